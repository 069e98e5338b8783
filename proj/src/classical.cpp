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

#include "qfalab/classical.hpp"

#include <cmath>
#include <sstream>

#include "qfalab/errors.hpp"

namespace qfa {

std::vector<RealVector> rtpfa_state_vectors(const RtPfa &m, std::string_view w) {
    std::vector<size_t> tape = m.alphabet.tape(w);
    std::vector<RealVector> out;
    out.reserve(tape.size() + 1);
    RealVector v = RealVector::Zero(static_cast<Eigen::Index>(m.state_count));
    v[static_cast<Eigen::Index>(m.initial)] = 1;
    out.push_back(v);
    for (size_t s : tape) {
        v = m.transitions[s] * v;
        out.push_back(v);
        const double mass = v.sum();
        if (std::abs(mass - 1.0) > tol::kWellformed) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "probability not conserved at step " << out.size() - 1 << ": total mass " << mass;
            detail::record_conservation(out.size() - 1, true);
            throw ConservationError(msg.str());
        }
    }
    detail::record_conservation(tape.size(), false);
    return out;
}

double run_rtpfa(const RtPfa &m, std::string_view w) {
    RealVector v = rtpfa_state_vectors(m, w).back();
    double p = 0;
    for (size_t i = 0; i < m.state_count; ++i) {
        if (m.accepting[i]) {
            p += v[static_cast<Eigen::Index>(i)];
        }
    }
    return p;
}

double run_gfa(const Gfa &g, std::string_view w) {
    RealVector v = g.initial;
    for (size_t k : g.alphabet.letters_of(w)) {
        v = g.transitions[k] * v;
    }
    return g.final.dot(v);
}

bool classify(double value, double cutpoint, CutpointMode mode, double tolerance) {
    switch (mode) {
        case CutpointMode::strict:
            return value > cutpoint;
        case CutpointMode::nonstrict:
            return value >= cutpoint;
        case CutpointMode::equals:
            return std::abs(value - cutpoint) <= tolerance;
    }
    return false;
}

CutpointVerdict classify_all(double value, double cutpoint, double tolerance) {
    return {
        classify(value, cutpoint, CutpointMode::strict),
        classify(value, cutpoint, CutpointMode::nonstrict),
        classify(value, cutpoint, CutpointMode::equals, tolerance),
    };
}

}  // namespace qfa
