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

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "qfalab/errors.hpp"
#include "test_util.hpp"

using namespace qfa;
using namespace qfa::testing;

namespace {

RtQfa identity_qfa(bool accept) {
    RtQfa m;
    m.state_count = 1;
    m.alphabet = Alphabet("ab");
    m.operations.assign(4, SuperOp{{ComplexMatrix::Identity(1, 1)}});
    m.accepting = {accept};
    return m;
}

// rho evolved with explicit sums, independent of SuperOp::apply.
double reference_rtqfa(const RtQfa &m, const std::string &w) {
    const auto n = static_cast<Eigen::Index>(m.state_count);
    ComplexMatrix rho = ComplexMatrix::Zero(n, n);
    rho(static_cast<Eigen::Index>(m.initial), static_cast<Eigen::Index>(m.initial)) = 1;
    for (size_t s : reference_tape(m.alphabet.letters(), w)) {
        ComplexMatrix next = ComplexMatrix::Zero(n, n);
        for (const ComplexMatrix &e : m.operations[s].kraus) {
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j < n; ++j) {
                    for (Eigen::Index k = 0; k < n; ++k) {
                        for (Eigen::Index l = 0; l < n; ++l) {
                            next(i, j) += e(i, k) * rho(k, l) * std::conj(e(j, l));
                        }
                    }
                }
            }
        }
        rho = next;
    }
    double p = 0;
    for (size_t q = 0; q < m.state_count; ++q) {
        if (m.accepting[q]) {
            p += rho(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q)).real();
        }
    }
    return p;
}

}  // namespace

TEST(density_matrix, checked_accepts_states_and_rejects_others) {
    EXPECT_EQ(DensityMatrix::basis_state(3, 1).trace(), 1);
    ComplexMatrix mixed = ComplexMatrix::Identity(2, 2) / 2.0;
    EXPECT_NEAR(DensityMatrix::checked(mixed).min_eigenvalue(), 0.5, 1e-15);
    ComplexMatrix not_hermitian(2, 2);
    not_hermitian << 0.5, 0.1, 0, 0.5;
    EXPECT_THROW(DensityMatrix::checked(not_hermitian), WellformednessError);
    EXPECT_THROW(DensityMatrix::checked(ComplexMatrix::Identity(2, 2)), WellformednessError);
    ComplexMatrix negative(2, 2);
    negative << 1.5, 0, 0, -0.5;
    EXPECT_THROW(DensityMatrix::checked(negative), WellformednessError);
}

TEST(run_rtqfa, identity_channel) {
    EXPECT_EQ(run_rtqfa(identity_qfa(true), "abba"), 1);
    EXPECT_EQ(run_rtqfa(identity_qfa(false), "abba"), 0);
    EXPECT_THROW(run_rtqfa(identity_qfa(true), "abc"), InputError);
}

TEST(run_rtqfa, matches_explicit_sums) {
    Rng rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        RtQfa m = random_rtqfa(uniform_index(rng, 1, 4), 3, rng);
        for (int k = 0; k < 10; ++k) {
            std::string w = random_word(rng, 6);
            EXPECT_NEAR(run_rtqfa(m, w), reference_rtqfa(m, w), 1e-12) << w;
        }
    }
}

TEST(run_rtqfa, density_matrices_stay_states) {
    Rng rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        RtQfa m = random_rtqfa(uniform_index(rng, 1, 5), 3, rng);
        for (const ComplexMatrix &rho : rtqfa_density_matrices(m, random_word(rng, 8))) {
            EXPECT_NEAR(rho.trace().real(), 1, 1e-9);
            EXPECT_LE(max_abs(rho - rho.adjoint()), 1e-12);
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho);
            EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8);
        }
    }
}

TEST(run_rtqfa, composition_matches_stepwise_application) {
    Rng rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        const size_t n = uniform_index(rng, 1, 4);
        SuperOp first = random_superop(n, uniform_index(rng, 1, 3), rng);
        SuperOp second = random_superop(n, uniform_index(rng, 1, 3), rng);
        ComplexMatrix psi = random_isometry(static_cast<Eigen::Index>(n), 1, rng);
        ComplexMatrix rho = psi * psi.adjoint();
        ComplexMatrix stepwise = second.apply(first.apply(rho));
        SuperOp both = compose(second, first);
        EXPECT_EQ(both.kraus.size(), first.kraus.size() * second.kraus.size());
        EXPECT_LE(max_abs(both.apply(rho) - stepwise), 1e-9);
    }
}

TEST(run_rtqfa, trace_loss_is_a_conservation_error) {
    RtQfa m = identity_qfa(true);
    m.operations[1] = SuperOp{{ComplexMatrix::Identity(1, 1) * 0.5}};
    EXPECT_THROW(run_rtqfa(m, "a"), ConservationError);
}

TEST(run_rtkwqfa, nothing_halts_under_identity) {
    RtKwqfa m;
    m.state_count = 2;
    m.alphabet = Alphabet("ab");
    m.unitaries.assign(4, ComplexMatrix::Identity(2, 2));
    m.kinds = {StateKind::nonhalting, StateKind::accepting};
    RunOutcome r = run_rtkwqfa(m, "ab");
    EXPECT_EQ(r.p_acc, 0);
    EXPECT_EQ(r.p_rej, 0);
    EXPECT_EQ(r.residual, 1);
    EXPECT_EQ(r.steps, 4u);
}

TEST(run_rtkwqfa, immediate_balanced_split) {
    const double h = 1 / std::sqrt(2.0);
    RtKwqfa m;
    m.state_count = 3;
    m.alphabet = Alphabet("a");
    ComplexMatrix split = complete_to_unitary((ComplexMatrix(3, 1) << 0, h, h).finished());
    m.unitaries = {split, ComplexMatrix::Identity(3, 3), ComplexMatrix::Identity(3, 3)};
    m.kinds = {StateKind::nonhalting, StateKind::accepting, StateKind::rejecting};
    std::vector<double> residuals;
    RunOutcome r = run_rtkwqfa(m, "a", [&](size_t, const ComplexVector &u) { residuals.push_back(u.squaredNorm()); });
    EXPECT_NEAR(r.p_acc, 0.5, 1e-15);
    EXPECT_NEAR(r.p_rej, 0.5, 1e-15);
    ASSERT_EQ(residuals.size(), 3u);
    EXPECT_NEAR(residuals[0], 0, 1e-15);
}

TEST(run_rtkwqfa, conserves_on_random_machines) {
    Rng rng(44);
    for (int trial = 0; trial < 50; ++trial) {
        RtKwqfa m = random_rtkwqfa(uniform_index(rng, 1, 6), rng);
        RunOutcome r = run_rtkwqfa(m, random_word(rng, 8));
        EXPECT_NEAR(r.p_acc + r.p_rej + r.residual, 1, 1e-9);
        EXPECT_GE(r.residual, 0);
    }
}
