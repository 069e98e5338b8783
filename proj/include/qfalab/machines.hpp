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

// The two explicit Kondacs-Watrous machines shipped with the library and
// exact membership tests for the languages they are checked against.
//
//   L_NH  = { a^x b a^y1 b ... a^yt b : x, t, yi >= 1, x = y1 + ... + yk for some k <= t }
//   L_YS  = { a^(n-1) b a^(kn) : n > 1, k > 0 }
//   L_fre = { a^n b a^n : n >= 1 }

#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "qfalab/linalg.hpp"
#include "qfalab/twoway.hpp"

namespace qfa {

/// The 63-state one-way machine for L_NH. Columns the fixture leaves open are
/// completed in the given basis order.
TwoWayKwqfa lnh_machine(CompletionOrder order = CompletionOrder::ascending);

/// The 19-state two-way machine for L_YS.
TwoWayKwqfa lys_machine(CompletionOrder order = CompletionOrder::ascending);

/// Fixture text exactly as shipped.
std::string_view lnh_fixture();
std::string_view lys_fixture();

struct LanguageOracle {
    std::string name;
    std::function<bool(std::string_view)> predicate;

    bool operator()(std::string_view w) const {
        return predicate(w);
    }
};

bool in_lnh(std::string_view w);
bool in_lys(std::string_view w);
bool in_lfre(std::string_view w);

/// "lnh", "lys" or "lfre". Throws InputError otherwise.
LanguageOracle oracle(std::string_view name);

std::vector<std::string> oracle_names();

struct EncodingAudit {
    /// States that are neither the initial state nor the source or target
    /// of any specified transition.
    std::vector<std::string> unreferenced_states;
    /// Distinct "state on symbol" pairs that some input up to the audited
    /// length reaches although the column was left to completion.
    std::vector<std::string> unspecified_reachable;

    bool clean() const {
        return unreferenced_states.empty() && unspecified_reachable.empty();
    }
};

/// Sweeps every input over the machine's alphabet up to max_len.
EncodingAudit audit_encoding(const TwoWayKwqfa &m, size_t max_len);

}  // namespace qfa
