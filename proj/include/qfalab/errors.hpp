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

#pragma once

#include <stdexcept>
#include <string>

namespace qfa {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit the operation.
class DimensionError : public Error {
   public:
    using Error::Error;
};

/// A machine or operator violates a wellformedness condition.
class WellformednessError : public Error {
   public:
    using Error::Error;
};

/// Bad user input: unknown symbol, unknown oracle, mismatched alphabets.
class InputError : public Error {
   public:
    using Error::Error;
};

/// A conversion could not be carried out on the given machine.
class ConstructionError : public Error {
   public:
    using Error::Error;
};

/// Probability mass was created or destroyed during a run.
class ConservationError : public Error {
   public:
    using Error::Error;
};

/// Malformed text: amplitude expressions or machine files.
class ParseError : public Error {
   public:
    ParseError(const std::string &message, size_t offset)
        : Error(message + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {
    }
    explicit ParseError(const std::string &message) : Error(message), offset_(0) {
    }
    size_t offset() const {
        return offset_;
    }

   private:
    size_t offset_;
};

/// Amplitude expression evaluated outside its domain.
class EvalError : public Error {
   public:
    using Error::Error;
};

}  // namespace qfa
