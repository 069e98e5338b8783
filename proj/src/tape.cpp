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

#include "qfalab/tape.hpp"

#include "qfalab/errors.hpp"

namespace qfa {

Alphabet::Alphabet(std::string letters) : letters_(std::move(letters)) {
    for (size_t i = 0; i < letters_.size(); ++i) {
        if (letters_.find(letters_[i]) != i) {
            throw InputError(std::string("duplicate alphabet symbol '") + letters_[i] + "'");
        }
    }
}

size_t Alphabet::letter_index(char c) const {
    size_t k = letters_.find(c);
    if (k == std::string::npos) {
        throw InputError(std::string("symbol '") + c + "' is not in the alphabet {" + letters_ + "}");
    }
    return k;
}

std::vector<size_t> Alphabet::tape(std::string_view w) const {
    std::vector<size_t> out;
    out.reserve(w.size() + 2);
    out.push_back(cent());
    for (char c : w) {
        out.push_back(tape_index(c));
    }
    out.push_back(dollar());
    return out;
}

std::vector<size_t> Alphabet::letters_of(std::string_view w) const {
    std::vector<size_t> out;
    out.reserve(w.size());
    for (char c : w) {
        out.push_back(letter_index(c));
    }
    return out;
}

std::string Alphabet::tape_symbol_name(size_t tape_index) const {
    if (tape_index == cent()) {
        return "cent";
    }
    if (tape_index == dollar()) {
        return "dollar";
    }
    return std::string(1, letters_.at(tape_index - 1));
}

std::vector<std::string> Alphabet::words_up_to(size_t max_len) const {
    std::vector<std::string> out{""};
    size_t level_begin = 0;
    for (size_t len = 1; len <= max_len && !letters_.empty(); ++len) {
        size_t level_end = out.size();
        for (size_t k = level_begin; k < level_end; ++k) {
            for (char c : letters_) {
                out.push_back(out[k] + c);
            }
        }
        level_begin = level_end;
    }
    return out;
}

const char *to_string(StateKind k) {
    switch (k) {
        case StateKind::nonhalting:
            return "nonhalting";
        case StateKind::accepting:
            return "accepting";
        case StateKind::rejecting:
            return "rejecting";
    }
    return "?";
}

const char *to_string(Direction d) {
    switch (d) {
        case Direction::left:
            return "left";
        case Direction::stay:
            return "stay";
        case Direction::right:
            return "right";
    }
    return "?";
}

}  // namespace qfa
