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

// Real-time quantum finite automata: the general superoperator model
// (density matrices, one measurement at the end) and the Kondacs-Watrous
// restricted-measurement model (pure unnormalized vector, measured each step).

#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "qfalab/linalg.hpp"
#include "qfalab/tape.hpp"

namespace qfa {

/// Kraus elements of one quantum operation; sum E^dagger E = I when wellformed.
struct SuperOp {
    std::vector<ComplexMatrix> kraus;

    /// sum_i E_i rho E_i^dagger
    ComplexMatrix apply(const ComplexMatrix &rho) const;
};

/// (second o first) = {E'_j E_i}: apply `first`, then `second`.
SuperOp compose(const SuperOp &second, const SuperOp &first);

/// Hermitian, unit trace, positive semidefinite matrix.
class DensityMatrix {
   public:
    /// |q><q| in dimension n.
    static DensityMatrix basis_state(size_t n, size_t q);
    /// Throws WellformednessError unless hermitian within 1e-12, trace 1
    /// within 1e-12 and every eigenvalue >= -1e-10.
    static DensityMatrix checked(ComplexMatrix rho);

    const ComplexMatrix &matrix() const {
        return rho_;
    }
    double trace() const {
        return rho_.trace().real();
    }
    double min_eigenvalue() const;

   private:
    explicit DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
    }
    ComplexMatrix rho_;
};

struct RtQfa {
    size_t state_count = 0;
    Alphabet alphabet;
    /// One operation per tape symbol.
    std::vector<SuperOp> operations;
    size_t initial = 0;
    std::vector<bool> accepting;
    std::vector<std::string> state_names;
};

/// Real-time Kondacs-Watrous QFA.
struct RtKwqfa {
    size_t state_count = 0;
    Alphabet alphabet;
    /// One unitary per tape symbol.
    std::vector<ComplexMatrix> unitaries;
    size_t initial = 0;
    std::vector<StateKind> kinds;
    std::vector<std::string> state_names;
};

/// rho_0 .. rho_{|w~|}, unnormalized matrices exactly as evolved.
std::vector<ComplexMatrix> rtqfa_density_matrices(const RtQfa &m, std::string_view w);

/// tr(P_a rho_{|w~|}). Asserts trace preservation within tol::kWellformed
/// at every step.
double run_rtqfa(const RtQfa &m, std::string_view w);

/// Called after each measured step with the step number and the
/// (unnormalized) nonhalting vector.
using KwObserver = std::function<void(size_t, const ComplexVector &)>;

/// Unitary, then measurement, on every symbol of w~ including the
/// end-markers. Mass still nonhalting after the right end-marker is reported
/// as residual.
RunOutcome run_rtkwqfa(const RtKwqfa &m, std::string_view w, const KwObserver &observer = {});

}  // namespace qfa
