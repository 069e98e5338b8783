// Copyright 2026 The qfalab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Amplitude expressions as written in machine files, e.g. "1/sqrt(2)",
// "-1/(2*sqrt(2))" or "3/5 + 4/5*i".
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := number | 'i' | 'sqrt' '(' expr ')' | '(' expr ')' | '-' factor
//
// Whitespace is insignificant. Numbers are decimal literals with an optional
// exponent. sqrt only accepts nonnegative real arguments.

#pragma once

#include <complex>
#include <memory>
#include <string>
#include <string_view>

namespace qfa {

struct AmpNode;

/// Immutable parsed amplitude expression. Copies share the tree.
class AmpExpr {
   public:
    explicit AmpExpr(std::shared_ptr<const AmpNode> root);

    const AmpNode &root() const {
        return *root_;
    }

    /// Fully parenthesized form; reparses to a tree with identical value.
    std::string to_string() const;

   private:
    std::shared_ptr<const AmpNode> root_;
};

enum class AmpOp { number, imaginary_unit, add, sub, mul, div, negate, sqrt };

struct AmpNode {
    AmpOp op;
    /// Literal value and its source spelling, for AmpOp::number.
    double value = 0;
    std::string lexeme;
    std::shared_ptr<const AmpNode> lhs;
    std::shared_ptr<const AmpNode> rhs;
};

/// Throws ParseError carrying the byte offset of the first bad token.
AmpExpr parse_amp(std::string_view text);

/// Throws EvalError on division by zero or sqrt outside [0, inf).
std::complex<double> eval_amp(const AmpExpr &e);

/// parse_amp followed by eval_amp.
std::complex<double> eval_amp(std::string_view text);

}  // namespace qfa
