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

// Input alphabets and the end-marked tape every machine reads.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qfa {

/// A finite input alphabet of single-character symbols. Tape symbols are
/// numbered 0 = left end-marker, 1..size() = letters in declaration order,
/// size()+1 = right end-marker.
class Alphabet {
   public:
    Alphabet() = default;
    /// Throws InputError on duplicate letters.
    explicit Alphabet(std::string letters);

    const std::string &letters() const {
        return letters_;
    }
    size_t size() const {
        return letters_.size();
    }
    /// Number of tape symbols including both end-markers.
    size_t tape_size() const {
        return letters_.size() + 2;
    }
    static constexpr size_t cent() {
        return 0;
    }
    size_t dollar() const {
        return letters_.size() + 1;
    }

    /// Position of a letter among the letters (0-based). Throws InputError.
    size_t letter_index(char c) const;
    /// Tape symbol number of a letter.
    size_t tape_index(char c) const {
        return letter_index(c) + 1;
    }

    /// Tape symbol numbers of w~ = cent w dollar. Throws InputError on a
    /// symbol outside the alphabet.
    std::vector<size_t> tape(std::string_view w) const;

    /// Letter indices of w (no end-markers).
    std::vector<size_t> letters_of(std::string_view w) const;

    /// "cent", "dollar" or the letter itself.
    std::string tape_symbol_name(size_t tape_index) const;

    /// Every word over the alphabet of length <= max_len, shortest first,
    /// then in letter declaration order.
    std::vector<std::string> words_up_to(size_t max_len) const;

    bool operator==(const Alphabet &other) const = default;

   private:
    std::string letters_;
};

enum class StateKind { nonhalting, accepting, rejecting };

/// Head movement attached to a destination state (unidirectional machines).
enum class Direction { left, stay, right };

inline int offset(Direction d) {
    return d == Direction::left ? -1 : d == Direction::stay ? 0 : 1;
}

const char *to_string(StateKind k);
const char *to_string(Direction d);

}  // namespace qfa
