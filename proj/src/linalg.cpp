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

#include "qfalab/linalg.hpp"

#include <Eigen/LU>
#include <atomic>
#include <cmath>
#include <sstream>

#include "qfalab/errors.hpp"

namespace qfa {

ComplexVector vec(const ComplexMatrix &m) {
    if (m.rows() != m.cols()) {
        std::ostringstream msg;
        msg << "vec requires a square matrix, got " << m.rows() << "x" << m.cols();
        throw DimensionError(msg.str());
    }
    const Eigen::Index n = m.rows();
    ComplexVector out(n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out[i * n + j] = m(i, j);
        }
    }
    return out;
}

ComplexMatrix unvec(const ComplexVector &v) {
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (n * n != v.size()) {
        throw DimensionError("unvec requires a vector of square length, got " + std::to_string(v.size()));
    }
    ComplexMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out(i, j) = v[i * n + j];
        }
    }
    return out;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

double max_abs(const ComplexMatrix &m) {
    if (m.size() == 0) {
        return 0;
    }
    return m.cwiseAbs().maxCoeff();
}

double unitarity_defect(const ComplexMatrix &u) {
    if (u.rows() != u.cols()) {
        throw DimensionError("unitarity check requires a square matrix");
    }
    ComplexMatrix g = u.adjoint() * u;
    g -= ComplexMatrix::Identity(u.rows(), u.cols());
    return max_abs(g);
}

namespace {

void require_orthonormal(const ComplexMatrix &cols) {
    for (Eigen::Index a = 0; a < cols.cols(); ++a) {
        for (Eigen::Index b = a; b < cols.cols(); ++b) {
            Complex ip = cols.col(a).dot(cols.col(b));
            double expected = a == b ? 1.0 : 0.0;
            if (std::abs(ip - expected) > tol::kWellformed) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "specified columns " << a << " and " << b << " are not orthonormal: inner product ("
                    << ip.real() << ", " << ip.imag() << ")";
                throw WellformednessError(msg.str());
            }
        }
    }
}

// Returns the generated columns only (d x (d-k)).
ComplexMatrix gram_schmidt_extension(const ComplexMatrix &given, CompletionOrder order) {
    const Eigen::Index d = given.rows();
    const Eigen::Index k = given.cols();
    ComplexMatrix basis(d, d);
    basis.leftCols(k) = given;
    Eigen::Index filled = k;
    for (Eigen::Index step = 0; step < d && filled < d; ++step) {
        Eigen::Index candidate = order == CompletionOrder::ascending ? step : d - 1 - step;
        ComplexVector r = ComplexVector::Zero(d);
        r[candidate] = 1;
        // Two projection passes keep the result orthogonal to working precision.
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index j = 0; j < filled; ++j) {
                Complex c = basis.col(j).dot(r);
                if (c != Complex(0)) {
                    r -= c * basis.col(j);
                }
            }
        }
        double norm = r.norm();
        if (norm < tol::kDegenerate) {
            continue;
        }
        basis.col(filled++) = r / norm;
    }
    if (filled != d) {
        throw WellformednessError("unitary completion ran out of independent basis candidates");
    }
    return basis.rightCols(d - k);
}

}  // namespace

ComplexMatrix complete_to_unitary(const ComplexMatrix &specified_columns, CompletionOrder order) {
    const Eigen::Index d = specified_columns.rows();
    const Eigen::Index k = specified_columns.cols();
    if (k > d) {
        throw DimensionError("cannot complete " + std::to_string(k) + " columns in dimension " + std::to_string(d));
    }
    require_orthonormal(specified_columns);
    ComplexMatrix out(d, d);
    out.leftCols(k) = specified_columns;
    out.rightCols(d - k) = gram_schmidt_extension(specified_columns, order);
    return out;
}

ComplexMatrix complete_partial_unitary(
    const ComplexMatrix &partial, const std::vector<bool> &specified, CompletionOrder order) {
    const Eigen::Index d = partial.rows();
    if (partial.cols() != d || static_cast<Eigen::Index>(specified.size()) != d) {
        throw DimensionError("partial unitary must be square with one flag per column");
    }
    std::vector<Eigen::Index> given_idx;
    std::vector<Eigen::Index> free_idx;
    for (Eigen::Index j = 0; j < d; ++j) {
        (specified[j] ? given_idx : free_idx).push_back(j);
    }
    ComplexMatrix given(d, static_cast<Eigen::Index>(given_idx.size()));
    for (size_t c = 0; c < given_idx.size(); ++c) {
        given.col(static_cast<Eigen::Index>(c)) = partial.col(given_idx[c]);
    }
    try {
        require_orthonormal(given);
    } catch (const WellformednessError &) {
        // Re-raise with the machine's own column indices.
        for (size_t a = 0; a < given_idx.size(); ++a) {
            for (size_t b = a; b < given_idx.size(); ++b) {
                Complex ip = partial.col(given_idx[a]).dot(partial.col(given_idx[b]));
                double expected = a == b ? 1.0 : 0.0;
                if (std::abs(ip - expected) > tol::kWellformed) {
                    std::ostringstream msg;
                    msg.precision(17);
                    msg << "specified columns " << given_idx[a] << " and " << given_idx[b]
                        << " are not orthonormal: inner product (" << ip.real() << ", " << ip.imag() << ")";
                    throw WellformednessError(msg.str());
                }
            }
        }
        throw;
    }
    ComplexMatrix extra = gram_schmidt_extension(given, order);
    ComplexMatrix out(d, d);
    for (size_t c = 0; c < given_idx.size(); ++c) {
        out.col(given_idx[c]) = given.col(static_cast<Eigen::Index>(c));
    }
    for (size_t c = 0; c < free_idx.size(); ++c) {
        out.col(free_idx[c]) = extra.col(static_cast<Eigen::Index>(c));
    }
    return out;
}

SparseComplexMatrix to_sparse(const ComplexMatrix &m) {
    std::vector<Eigen::Triplet<Complex>> triplets;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (m(i, j) != Complex(0)) {
                triplets.emplace_back(i, j, m(i, j));
            }
        }
    }
    SparseComplexMatrix out(m.rows(), m.cols());
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

namespace {

void require_same_shape(Eigen::Index rows, Eigen::Index cols, Eigen::Index init_dim) {
    if (rows != cols || rows != init_dim) {
        throw DimensionError("halting maps must be square and match the initial vector");
    }
}

template <typename M>
void require_stacked_isometry(const M &nonhalt, const M &accept, const M &reject) {
    if (accept.rows() != nonhalt.rows() || reject.rows() != nonhalt.rows() || accept.cols() != nonhalt.cols() ||
        reject.cols() != nonhalt.cols()) {
        throw DimensionError("halting maps differ in shape");
    }
    Eigen::VectorXd norms = Eigen::VectorXd::Zero(nonhalt.cols());
    for (const M *m : {&nonhalt, &accept, &reject}) {
        if constexpr (std::is_same_v<M, SparseComplexMatrix>) {
            for (Eigen::Index j = 0; j < m->outerSize(); ++j) {
                for (typename M::InnerIterator it(*m, j); it; ++it) {
                    norms[j] += std::norm(it.value());
                }
            }
        } else {
            norms += m->colwise().squaredNorm().transpose();
        }
    }
    for (Eigen::Index j = 0; j < norms.size(); ++j) {
        if (std::abs(norms[j] - 1.0) > tol::kWellformed) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "halting maps are not blocks of one unitary: stacked column " << j << " has squared norm "
                << norms[j];
            throw WellformednessError(msg.str());
        }
    }
}

void apply(const ComplexMatrix &m, const ComplexVector &x, ComplexVector &out) {
    out.noalias() = m * x;
}

void apply(const SparseComplexMatrix &m, const ComplexVector &x, ComplexVector &out) {
    out.setZero(m.rows());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const Complex xj = x[j];
        if (xj == Complex(0)) {
            continue;
        }
        for (SparseComplexMatrix::InnerIterator it(m, j); it; ++it) {
            out[it.row()] += it.value() * xj;
        }
    }
}

template <typename M>
RunOutcome accumulate_impl(
    const M &nonhalt,
    const M &accept,
    const M &reject,
    const ComplexVector &init,
    double tol,
    size_t max_steps,
    const HaltingObserver &observer) {
    require_same_shape(nonhalt.rows(), nonhalt.cols(), init.size());
    require_stacked_isometry(nonhalt, accept, reject);

    const double total = init.squaredNorm();
    RunOutcome out;
    ComplexVector psi = init;
    ComplexVector next(init.size());
    ComplexVector halted(init.size());
    out.residual = total;
    while (out.residual >= tol && out.steps < max_steps) {
        apply(accept, psi, halted);
        out.p_acc += halted.squaredNorm();
        apply(reject, psi, halted);
        out.p_rej += halted.squaredNorm();
        apply(nonhalt, psi, next);
        psi.swap(next);
        const double previous = out.residual;
        out.residual = psi.squaredNorm();
        ++out.steps;
        if (out.residual > previous + tol::kIdentity) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "nonhalting mass grew at step " << out.steps << ": " << previous << " -> " << out.residual;
            detail::record_conservation(out.steps, true);
            throw ConservationError(msg.str());
        }
        const double sum = out.p_acc + out.p_rej + out.residual;
        if (std::abs(sum - total) > tol::kWellformed) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "probability not conserved at step " << out.steps << ": p_acc + p_rej + residual = " << sum;
            detail::record_conservation(out.steps, true);
            throw ConservationError(msg.str());
        }
        if (observer) {
            observer(out.steps, psi, out);
        }
    }
    out.converged = out.residual < tol;
    detail::record_conservation(out.steps, false);
    return out;
}

std::atomic<size_t> g_runs{0};
std::atomic<size_t> g_steps{0};
std::atomic<size_t> g_failures{0};

}  // namespace

ConservationTally conservation_tally() {
    return {g_runs.load(), g_steps.load(), g_failures.load()};
}

void detail::record_conservation(size_t steps, bool failed) {
    g_runs.fetch_add(1, std::memory_order_relaxed);
    g_steps.fetch_add(steps, std::memory_order_relaxed);
    if (failed) {
        g_failures.fetch_add(1, std::memory_order_relaxed);
    }
}

RunOutcome accumulate_halting(
    const ComplexMatrix &nonhalt_map,
    const ComplexMatrix &accept_map,
    const ComplexMatrix &reject_map,
    const ComplexVector &init,
    double tol,
    size_t max_steps,
    const HaltingObserver &observer) {
    return accumulate_impl(nonhalt_map, accept_map, reject_map, init, tol, max_steps, observer);
}

RunOutcome accumulate_halting(
    const SparseComplexMatrix &nonhalt_map,
    const SparseComplexMatrix &accept_map,
    const SparseComplexMatrix &reject_map,
    const ComplexVector &init,
    double tol,
    size_t max_steps,
    const HaltingObserver &observer) {
    return accumulate_impl(nonhalt_map, accept_map, reject_map, init, tol, max_steps, observer);
}

HaltingProbabilities halting_probabilities_direct(
    const ComplexMatrix &nonhalt_map,
    const ComplexMatrix &accept_map,
    const ComplexMatrix &reject_map,
    const ComplexVector &init) {
    const Eigen::Index d = nonhalt_map.rows();
    require_same_shape(d, nonhalt_map.cols(), init.size());
    if (d > 64) {
        throw DimensionError("direct halting solve is limited to dimension 64, got " + std::to_string(d));
    }
    // vec(N^dagger X N) = (N^dagger (x) N^T) vec(X) in the row-major convention.
    ComplexMatrix lifted = ComplexMatrix::Identity(d * d, d * d) - kron(nonhalt_map.adjoint(), nonhalt_map.transpose());
    Eigen::PartialPivLU<ComplexMatrix> lu(lifted);
    auto solve = [&](const ComplexMatrix &m) {
        ComplexMatrix x = unvec(lu.solve(vec(m.adjoint() * m)));
        return init.dot(x * init).real();
    };
    return {solve(accept_map), solve(reject_map)};
}

}  // namespace qfa
