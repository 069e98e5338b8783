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

#include "qfalab/quantum_rt.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "qfalab/errors.hpp"

namespace qfa {

ComplexMatrix SuperOp::apply(const ComplexMatrix &rho) const {
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (const auto &e : kraus) {
        out.noalias() += e * rho * e.adjoint();
    }
    return out;
}

SuperOp compose(const SuperOp &second, const SuperOp &first) {
    SuperOp out;
    out.kraus.reserve(second.kraus.size() * first.kraus.size());
    for (const auto &b : second.kraus) {
        for (const auto &a : first.kraus) {
            out.kraus.push_back(b * a);
        }
    }
    return out;
}

DensityMatrix DensityMatrix::basis_state(size_t n, size_t q) {
    ComplexMatrix rho = ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    rho(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q)) = 1;
    return DensityMatrix(std::move(rho));
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

DensityMatrix DensityMatrix::checked(ComplexMatrix rho) {
    if (rho.rows() != rho.cols()) {
        throw DimensionError("density matrix must be square");
    }
    if (max_abs(rho - rho.adjoint()) > tol::kIdentity) {
        throw WellformednessError("density matrix is not hermitian");
    }
    Complex tr = rho.trace();
    if (std::abs(tr - Complex(1)) > tol::kIdentity) {
        throw WellformednessError("density matrix trace is not 1");
    }
    DensityMatrix out(std::move(rho));
    if (out.min_eigenvalue() < -1e-10) {
        throw WellformednessError("density matrix has a negative eigenvalue");
    }
    return out;
}

std::vector<ComplexMatrix> rtqfa_density_matrices(const RtQfa &m, std::string_view w) {
    std::vector<size_t> tape = m.alphabet.tape(w);
    std::vector<ComplexMatrix> out;
    out.reserve(tape.size() + 1);
    out.push_back(DensityMatrix::basis_state(m.state_count, m.initial).matrix());
    for (size_t j = 0; j < tape.size(); ++j) {
        out.push_back(m.operations[tape[j]].apply(out.back()));
        double tr = out.back().trace().real();
        if (std::abs(tr - 1.0) > tol::kWellformed) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "trace not preserved at step " << (j + 1) << ": " << tr;
            detail::record_conservation(j + 1, true);
            throw ConservationError(msg.str());
        }
    }
    detail::record_conservation(tape.size(), false);
    return out;
}

double run_rtqfa(const RtQfa &m, std::string_view w) {
    ComplexMatrix rho = rtqfa_density_matrices(m, w).back();
    double p = 0;
    for (size_t q = 0; q < m.state_count; ++q) {
        if (m.accepting[q]) {
            p += rho(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q)).real();
        }
    }
    return p;
}

RunOutcome run_rtkwqfa(const RtKwqfa &m, std::string_view w, const KwObserver &observer) {
    std::vector<size_t> tape = m.alphabet.tape(w);
    const auto n = static_cast<Eigen::Index>(m.state_count);
    ComplexVector u = ComplexVector::Zero(n);
    u[static_cast<Eigen::Index>(m.initial)] = 1;
    RunOutcome out;
    out.residual = 1;
    for (size_t s : tape) {
        ComplexVector image = m.unitaries[s] * u;
        ComplexVector kept = ComplexVector::Zero(n);
        for (Eigen::Index q = 0; q < n; ++q) {
            switch (m.kinds[static_cast<size_t>(q)]) {
                case StateKind::accepting:
                    out.p_acc += std::norm(image[q]);
                    break;
                case StateKind::rejecting:
                    out.p_rej += std::norm(image[q]);
                    break;
                case StateKind::nonhalting:
                    kept[q] = image[q];
                    break;
            }
        }
        u = std::move(kept);
        const double previous = out.residual;
        out.residual = u.squaredNorm();
        ++out.steps;
        if (out.residual > previous + tol::kIdentity ||
            std::abs(out.p_acc + out.p_rej + out.residual - 1.0) > tol::kWellformed) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "probability not conserved at step " << out.steps << ": p_acc=" << out.p_acc
                << " p_rej=" << out.p_rej << " residual=" << out.residual;
            detail::record_conservation(out.steps, true);
            throw ConservationError(msg.str());
        }
        if (observer) {
            observer(out.steps, u);
        }
    }
    detail::record_conservation(out.steps, false);
    return out;
}

}  // namespace qfa
