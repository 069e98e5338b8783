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

#include "qfalab/amp_expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "qfalab/errors.hpp"

namespace qfa {

namespace {

using NodePtr = std::shared_ptr<const AmpNode>;

NodePtr make_binary(AmpOp op, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<AmpNode>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

NodePtr make_unary(AmpOp op, NodePtr arg) {
    auto n = std::make_shared<AmpNode>();
    n->op = op;
    n->lhs = std::move(arg);
    return n;
}

class Parser {
   public:
    explicit Parser(std::string_view text) : text_(text) {
    }

    NodePtr parse() {
        NodePtr e = expr();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected trailing input");
        }
        return e;
    }

   private:
    [[noreturn]] void fail(const std::string &what) const {
        throw ParseError("amplitude expression: " + what, pos_);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    // Accepts ASCII '-' and U+2212 MINUS SIGN.
    bool eat_minus() {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == '-') {
            ++pos_;
            return true;
        }
        if (text_.substr(pos_, 3) == "\xE2\x88\x92") {
            pos_ += 3;
            return true;
        }
        return false;
    }

    bool eat(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        while (true) {
            if (eat('+')) {
                lhs = make_binary(AmpOp::add, lhs, term());
            } else if (eat_minus()) {
                lhs = make_binary(AmpOp::sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        while (true) {
            if (eat('*')) {
                lhs = make_binary(AmpOp::mul, lhs, factor());
            } else if (eat('/')) {
                lhs = make_binary(AmpOp::div, lhs, factor());
            } else {
                return lhs;
            }
        }
    }

    NodePtr factor() {
        if (eat_minus()) {
            return make_unary(AmpOp::negate, factor());
        }
        skip_space();
        if (pos_ >= text_.size()) {
            fail("unexpected end of input");
        }
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            if (!eat(')')) {
                fail("expected ')'");
            }
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            std::string_view word = text_.substr(start, pos_ - start);
            if (word == "i") {
                auto n = std::make_shared<AmpNode>();
                n->op = AmpOp::imaginary_unit;
                return n;
            }
            if (word == "sqrt") {
                if (!eat('(')) {
                    fail("expected '(' after sqrt");
                }
                NodePtr inner = expr();
                if (!eat(')')) {
                    fail("expected ')'");
                }
                return make_unary(AmpOp::sqrt, inner);
            }
            pos_ = start;
            fail("unknown identifier '" + std::string(word) + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr number() {
        size_t start = pos_;
        auto digits = [&] {
            size_t before = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            return pos_ - before;
        };
        size_t mantissa = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) {
            pos_ = start;
            fail("malformed number");
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
                ++pos_;
            }
            if (digits() == 0) {
                fail("malformed exponent");
            }
        }
        std::string_view lexeme = text_.substr(start, pos_ - start);
        double value = 0;
        auto [end, ec] = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), value);
        if (ec != std::errc() || end != lexeme.data() + lexeme.size() || !std::isfinite(value)) {
            pos_ = start;
            fail("number out of range");
        }
        auto n = std::make_shared<AmpNode>();
        n->op = AmpOp::number;
        n->value = value;
        n->lexeme = std::string(lexeme);
        return n;
    }

    std::string_view text_;
    size_t pos_ = 0;
};

std::complex<double> eval_node(const AmpNode &n) {
    using C = std::complex<double>;
    switch (n.op) {
        case AmpOp::number:
            return {n.value, 0};
        case AmpOp::imaginary_unit:
            return {0, 1};
        case AmpOp::add:
            return eval_node(*n.lhs) + eval_node(*n.rhs);
        case AmpOp::sub:
            return eval_node(*n.lhs) - eval_node(*n.rhs);
        case AmpOp::mul:
            return eval_node(*n.lhs) * eval_node(*n.rhs);
        case AmpOp::div: {
            C d = eval_node(*n.rhs);
            if (d == C(0)) {
                throw EvalError("division by zero in amplitude expression");
            }
            return eval_node(*n.lhs) / d;
        }
        case AmpOp::negate:
            return -eval_node(*n.lhs);
        case AmpOp::sqrt: {
            C a = eval_node(*n.lhs);
            if (a.imag() != 0 || a.real() < 0) {
                throw EvalError("sqrt of a negative or complex value in amplitude expression");
            }
            return {std::sqrt(a.real()), 0};
        }
    }
    throw EvalError("corrupt amplitude expression");
}

void print_node(const AmpNode &n, std::string &out) {
    auto binary = [&](char op) {
        out += '(';
        print_node(*n.lhs, out);
        out += ' ';
        out += op;
        out += ' ';
        print_node(*n.rhs, out);
        out += ')';
    };
    switch (n.op) {
        case AmpOp::number:
            out += n.lexeme;
            return;
        case AmpOp::imaginary_unit:
            out += 'i';
            return;
        case AmpOp::add:
            return binary('+');
        case AmpOp::sub:
            return binary('-');
        case AmpOp::mul:
            return binary('*');
        case AmpOp::div:
            return binary('/');
        case AmpOp::negate:
            out += "(-";
            print_node(*n.lhs, out);
            out += ')';
            return;
        case AmpOp::sqrt:
            out += "sqrt(";
            print_node(*n.lhs, out);
            out += ')';
            return;
    }
}

}  // namespace

AmpExpr::AmpExpr(std::shared_ptr<const AmpNode> root) : root_(std::move(root)) {
}

std::string AmpExpr::to_string() const {
    std::string out;
    print_node(*root_, out);
    return out;
}

AmpExpr parse_amp(std::string_view text) {
    return AmpExpr(Parser(text).parse());
}

std::complex<double> eval_amp(const AmpExpr &e) {
    return eval_node(e.root());
}

std::complex<double> eval_amp(std::string_view text) {
    return eval_amp(parse_amp(text));
}

}  // namespace qfa
