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

#include "qfalab/machines.hpp"

#include <set>

#include "qfa_fixtures.hpp"
#include "qfalab/errors.hpp"
#include "qfalab/machine_file.hpp"

namespace qfa {

namespace {

TwoWayKwqfa load_fixture(std::string_view text, CompletionOrder order) {
    MachineFile file = parse_machine_file(text, order);
    return std::get<TwoWayKwqfa>(file.machine);
}

// Splits w into maximal runs of a's terminated by b's. Returns false unless w
// is (a+ b)+.
bool blocks(std::string_view w, std::vector<size_t> &out) {
    out.clear();
    size_t run = 0;
    for (char c : w) {
        if (c == 'a') {
            ++run;
        } else if (c == 'b' && run > 0) {
            out.push_back(run);
            run = 0;
        } else {
            return false;
        }
    }
    return run == 0 && !out.empty();
}

}  // namespace

TwoWayKwqfa lnh_machine(CompletionOrder order) {
    return load_fixture(fixtures::kLnh, order);
}

TwoWayKwqfa lys_machine(CompletionOrder order) {
    return load_fixture(fixtures::kLys, order);
}

std::string_view lnh_fixture() {
    return fixtures::kLnh;
}

std::string_view lys_fixture() {
    return fixtures::kLys;
}

bool in_lnh(std::string_view w) {
    std::vector<size_t> runs;
    if (!blocks(w, runs) || runs.size() < 2) {
        return false;
    }
    size_t sum = 0;
    for (size_t k = 1; k < runs.size(); ++k) {
        sum += runs[k];
        if (sum == runs[0]) {
            return true;
        }
    }
    return false;
}

bool in_lys(std::string_view w) {
    const size_t b = w.find('b');
    if (b == std::string_view::npos || w.find_first_not_of('a', b + 1) != std::string_view::npos ||
        w.find_first_not_of('a') != b) {
        return false;
    }
    const size_t n = b + 1;
    const size_t m = w.size() - b - 1;
    return n > 1 && m > 0 && m % n == 0;
}

bool in_lfre(std::string_view w) {
    const size_t b = w.find('b');
    if (b == std::string_view::npos || b == 0 || w.find_first_not_of('a', b + 1) != std::string_view::npos ||
        w.find_first_not_of('a') != b) {
        return false;
    }
    return w.size() - b - 1 == b;
}

LanguageOracle oracle(std::string_view name) {
    if (name == "lnh") {
        return {"lnh", in_lnh};
    }
    if (name == "lys") {
        return {"lys", in_lys};
    }
    if (name == "lfre") {
        return {"lfre", in_lfre};
    }
    throw InputError("unknown oracle \"" + std::string(name) + "\" (expected lnh, lys or lfre)");
}

std::vector<std::string> oracle_names() {
    return {"lnh", "lys", "lfre"};
}

EncodingAudit audit_encoding(const TwoWayKwqfa &m, size_t max_len) {
    EncodingAudit audit;
    std::vector<bool> referenced(m.state_count, false);
    referenced[m.initial] = true;
    for (size_t s = 0; s < m.unitaries.size(); ++s) {
        for (size_t q = 0; q < m.state_count; ++q) {
            if (!m.column_specified(s, q)) {
                continue;
            }
            for (size_t r = 0; r < m.state_count; ++r) {
                if (std::abs(m.unitaries[s](static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(q))) > 0) {
                    referenced[q] = true;
                    referenced[r] = true;
                }
            }
        }
    }
    for (size_t q = 0; q < m.state_count; ++q) {
        if (!referenced[q]) {
            audit.unreferenced_states.push_back(m.state_name(q));
        }
    }

    std::set<std::string> pairs;
    for (const std::string &w : m.alphabet.words_up_to(max_len)) {
        ConfigSpace space = build_config_operator(m, w);
        for (size_t c : space.unspecified_reachable) {
            const size_t q = space.state_of(c);
            const size_t s = space.tape[space.position_of(c) - 1];
            pairs.insert(m.state_name(q) + " on " + m.alphabet.tape_symbol_name(s));
        }
    }
    audit.unspecified_reachable.assign(pairs.begin(), pairs.end());
    return audit;
}

}  // namespace qfa
