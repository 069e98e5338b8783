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

// Dense complex linear algebra shared by every machine model: the row-major
// vec mapping, tensor products, deterministic unitary completion and the
// infinite-horizon halting accumulator used by the Kondacs-Watrous runners.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace qfa {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
/// Column-major, so a column can be scattered without touching the others.
using SparseComplexMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

namespace tol {
/// Construction-time algebraic identities.
inline constexpr double kIdentity = 1e-12;
/// Pass/fail threshold of every wellformedness check.
inline constexpr double kWellformed = 1e-9;
/// Gram-Schmidt candidates with a smaller residual are treated as dependent.
inline constexpr double kDegenerate = 1e-6;
}  // namespace tol

/// vec(A)[(i-1)n + j] = A[i,j]: rows of A laid end to end.
ComplexVector vec(const ComplexMatrix &m);

/// Inverse of vec for an n*n vector.
ComplexMatrix unvec(const ComplexVector &v);

/// Standard tensor (Kronecker) product.
ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);

/// max |m[i,j]|, 0 for an empty matrix.
double max_abs(const ComplexMatrix &m);

/// ||U^dagger U - I||_max; U must be square.
double unitarity_defect(const ComplexMatrix &u);

enum class CompletionOrder { ascending, descending };

/// Extends k orthonormal columns (d x k, k <= d) to a d x d unitary whose
/// first k columns are the input. New columns come from Gram-Schmidt over the
/// standard basis vectors in the given order; candidates whose residual after
/// projection is below tol::kDegenerate are skipped.
///
/// Throws WellformednessError naming the first pair of input columns whose
/// inner product differs from the identity by more than tol::kWellformed.
ComplexMatrix complete_to_unitary(
    const ComplexMatrix &specified_columns, CompletionOrder order = CompletionOrder::ascending);

/// Same completion for a square matrix where only the columns flagged in
/// `specified` are meaningful. Generated columns fill the unflagged slots in
/// ascending slot order.
ComplexMatrix complete_partial_unitary(
    const ComplexMatrix &partial,
    const std::vector<bool> &specified,
    CompletionOrder order = CompletionOrder::ascending);

/// Accumulated result of a run of a machine with halting states.
struct RunOutcome {
    double p_acc = 0;
    double p_rej = 0;
    /// Squared norm of the nonhalting part left when the run stopped.
    double residual = 0;
    size_t steps = 0;
    /// False iff the step budget ran out with residual >= tol.
    bool converged = true;
};

/// Per-step hook: (step index after the update, nonhalting vector, outcome so far).
using HaltingObserver = std::function<void(size_t, const ComplexVector &, const RunOutcome &)>;

/// Iterates psi <- nonhalt * psi, adding ||accept * psi||^2 and
/// ||reject * psi||^2 before each update. Stops once ||psi||^2 < tol or after
/// max_steps updates. The three maps must be the measured blocks of a single
/// unitary (stacked column norms 1 within tol::kWellformed).
///
/// Every step asserts p_acc + p_rej + residual = ||init||^2 within
/// tol::kWellformed and that the residual does not grow; a violation throws
/// ConservationError.
RunOutcome accumulate_halting(
    const ComplexMatrix &nonhalt_map,
    const ComplexMatrix &accept_map,
    const ComplexMatrix &reject_map,
    const ComplexVector &init,
    double tol,
    size_t max_steps,
    const HaltingObserver &observer = {});

/// Sparse overload; only columns carrying amplitude are visited each step.
RunOutcome accumulate_halting(
    const SparseComplexMatrix &nonhalt_map,
    const SparseComplexMatrix &accept_map,
    const SparseComplexMatrix &reject_map,
    const ComplexVector &init,
    double tol,
    size_t max_steps,
    const HaltingObserver &observer = {});

struct HaltingProbabilities {
    double p_acc = 0;
    double p_rej = 0;
};

/// Closed-form infinite-horizon totals, p = init^dagger X init with
/// X = M^dagger M + N^dagger X N solved through the vec identity. The lifted
/// system has dimension d^2, so d is limited to 64. Cross-check oracle for
/// accumulate_halting; requires the spectral radius of N to be below one.
HaltingProbabilities halting_probabilities_direct(
    const ComplexMatrix &nonhalt_map,
    const ComplexMatrix &accept_map,
    const ComplexMatrix &reject_map,
    const ComplexVector &init);

/// Process-wide tally of the conservation assertions made by the runners
/// (accumulate_halting, the RT-QFA density-matrix evolution and the RT-KWQFA
/// runner). Counts are cumulative since program start; safe to read from any
/// thread.
struct ConservationTally {
    size_t runs = 0;
    size_t steps = 0;
    size_t failures = 0;
};
ConservationTally conservation_tally();

namespace detail {
/// Records one finished run; failed runs are recorded before they throw.
void record_conservation(size_t steps, bool failed);
}  // namespace detail

/// Converts a dense matrix, dropping exact zeros.
SparseComplexMatrix to_sparse(const ComplexMatrix &m);

}  // namespace qfa
