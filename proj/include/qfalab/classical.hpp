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

// Real-time probabilistic finite automata and generalized finite automata.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qfalab/linalg.hpp"
#include "qfalab/tape.hpp"

namespace qfa {

/// Real-time probabilistic finite automaton. transitions[s] is the left
/// stochastic matrix for tape symbol s (see Alphabet for the numbering);
/// column j holds the distribution of successors of state j.
struct RtPfa {
    size_t state_count = 0;
    Alphabet alphabet;
    std::vector<RealMatrix> transitions;
    size_t initial = 0;
    std::vector<bool> accepting;
    std::vector<std::string> state_names;
};

/// Generalized finite automaton: f A_{w_n} ... A_{w_1} v0. transitions are
/// indexed by letter (no end-markers).
struct Gfa {
    size_t state_count = 0;
    Alphabet alphabet;
    std::vector<RealMatrix> transitions;
    RealVector initial;
    /// Final row vector, stored as a column.
    RealVector final;
};

/// Acceptance probability: accepting mass of A_{w~} e_initial.
double run_rtpfa(const RtPfa &m, std::string_view w);

/// Probability vectors v_0 .. v_{|w~|}. Throws ConservationError if the
/// total mass drifts from 1 by more than tol::kWellformed.
std::vector<RealVector> rtpfa_state_vectors(const RtPfa &m, std::string_view w);

/// Raw acceptance value; may lie outside [0, 1].
double run_gfa(const Gfa &g, std::string_view w);

enum class CutpointMode { strict, nonstrict, equals };

/// strict: value > cutpoint; nonstrict: value >= cutpoint;
/// equals: |value - cutpoint| <= tolerance.
bool classify(double value, double cutpoint, CutpointMode mode, double tolerance = tol::kWellformed);

/// All three readings at once. A two-sided test (above on members, below on
/// non-members) reads `strict` and `!nonstrict` and reports ties via `equals`.
struct CutpointVerdict {
    bool strict = false;
    bool nonstrict = false;
    bool equals = false;
};

CutpointVerdict classify_all(double value, double cutpoint, double tolerance = tol::kWellformed);

}  // namespace qfa
