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

// One-way and two-way Kondacs-Watrous QFAs simulated over the configuration
// space (state x head position) of a fixed input.
//
// Configurations are indexed state-major: (state, position) with state in
// [0, state_count) and position in [1, |w~|] maps to
// state * |w~| + (position - 1). Position 1 holds the left end-marker.

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qfalab/linalg.hpp"
#include "qfalab/tape.hpp"

namespace qfa {

struct TwoWayKwqfa {
    size_t state_count = 0;
    Alphabet alphabet;
    /// U_sigma per tape symbol; column q is the image of state q.
    std::vector<ComplexMatrix> unitaries;
    /// specified[s][q]: column q of unitaries[s] was given explicitly rather
    /// than produced by unitary completion. Empty means fully specified.
    std::vector<std::vector<bool>> specified;
    /// Head movement on entering each state.
    std::vector<Direction> directions;
    size_t initial = 0;
    std::vector<StateKind> kinds;
    std::vector<std::string> state_names;

    /// True when no state moves left.
    bool one_way() const;
    bool column_specified(size_t symbol, size_t state) const;
    std::string state_name(size_t q) const;
};

/// The configuration-level evolution of a machine on one input.
struct ConfigSpace {
    std::string input;
    /// Tape symbol numbers of w~.
    std::vector<size_t> tape;
    size_t state_count = 0;
    /// The induced operator M^w. Amplitudes that would leave the tape from
    /// configurations unreachable from the start wrap around the tape (the
    /// circular Kondacs-Watrous convention), which keeps M^w unitary.
    SparseComplexMatrix op;
    /// Reachable configurations (as indices) that read a symbol whose column
    /// of U was produced by completion rather than specified.
    std::vector<size_t> unspecified_reachable;

    size_t positions() const {
        return tape.size();
    }
    size_t dimension() const {
        return state_count * tape.size();
    }
    /// 1-based position.
    size_t index(size_t state, size_t position) const {
        return state * tape.size() + (position - 1);
    }
    size_t state_of(size_t index) const {
        return index / tape.size();
    }
    size_t position_of(size_t index) const {
        return index % tape.size() + 1;
    }
};

/// Builds M^w. A configuration reachable from (initial, 1) through
/// nonhalting states that sends nonzero amplitude past either end-marker is
/// malformed for this input and raises WellformednessError naming the
/// (state, position, symbol) triple and the amplitude.
ConfigSpace build_config_operator(const TwoWayKwqfa &m, std::string_view w);

/// Runs the machine from (initial, 1) until the nonhalting mass drops below
/// tol or max_steps is reached. Nonconvergence is flagged, never thrown.
RunOutcome run_twoway(const TwoWayKwqfa &m, std::string_view w, double tol = 1e-12, size_t max_steps = 100000);

/// Same run on a prebuilt configuration space.
RunOutcome run_twoway(const TwoWayKwqfa &m, const ConfigSpace &space, double tol = 1e-12, size_t max_steps = 100000);

struct TraceEntry {
    size_t state = 0;
    size_t position = 0;
    Complex amplitude;
};

struct TraceStep {
    size_t step = 0;
    /// Nonhalting components with |amplitude| > 1e-12, in configuration order.
    std::vector<TraceEntry> entries;
    /// Probability halted into accepting / rejecting configurations by the
    /// transition that produced this step (zero for step 0).
    double accept_increment = 0;
    double reject_increment = 0;
};

/// Nonhalting superposition after each of the first step_limit steps
/// (step 0 is the initial configuration). Stops early once nothing is left.
std::vector<TraceStep> path_trace(const TwoWayKwqfa &m, std::string_view w, size_t step_limit);

/// One line per entry: step, state name, position, re, im.
void write_trace(std::ostream &out, const TwoWayKwqfa &m, const std::vector<TraceStep> &trace);

}  // namespace qfa
