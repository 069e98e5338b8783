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

#include <gtest/gtest.h>

#include "qfalab/errors.hpp"
#include "test_util.hpp"

using namespace qfa;
using namespace qfa::testing;

namespace {

// vec and kron written out index by index.
ComplexVector naive_vec(const ComplexMatrix &a) {
    const Eigen::Index n = a.rows();
    ComplexVector v(n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            v[i * n + j] = a(i, j);
        }
    }
    return v;
}

ComplexMatrix naive_kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            for (Eigen::Index k = 0; k < b.rows(); ++k) {
                for (Eigen::Index l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return out;
}

}  // namespace

TEST(vec, reads_rows_end_to_end) {
    ComplexMatrix a(2, 2);
    a << 1, 2, 3, 4;
    ComplexVector v = vec(a);
    ASSERT_EQ(v.size(), 4);
    for (int k = 0; k < 4; ++k) {
        EXPECT_EQ(v[k], Complex(k + 1));
    }
    EXPECT_EQ(vec(ComplexMatrix::Identity(2, 2)), (ComplexVector(4) << 1, 0, 0, 1).finished());
}

TEST(vec, rejects_non_square) {
    EXPECT_THROW(vec(ComplexMatrix::Zero(2, 3)), DimensionError);
}

TEST(vec, unvec_inverts_vec) {
    Rng rng(11);
    ComplexMatrix a = random_complex(4, 4, rng);
    EXPECT_EQ(unvec(vec(a)), a);
    EXPECT_EQ(vec(a), naive_vec(a));
}

TEST(vec, product_and_trace_identities) {
    Rng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<Eigen::Index>(uniform_index(rng, 1, 5));
        ComplexMatrix a = random_complex(n, n, rng);
        ComplexMatrix b = random_complex(n, n, rng);
        ComplexMatrix c = random_complex(n, n, rng);
        ComplexVector lhs = naive_vec(a * b * c);
        ComplexVector rhs = naive_kron(a, c.transpose()) * naive_vec(b);
        EXPECT_LE(max_abs(lhs - rhs), 1e-12 * std::max(1.0, max_abs(lhs)));
        Complex tr = (a.transpose() * b).trace();
        Complex dot = (naive_vec(a).transpose() * naive_vec(b))(0, 0);
        EXPECT_LE(std::abs(tr - dot), 1e-12 * std::max(1.0, std::abs(tr)));
    }
}

TEST(kron, identity_and_shape) {
    EXPECT_EQ(kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)), ComplexMatrix::Identity(4, 4));
    Rng rng(13);
    ComplexMatrix k = kron(random_complex(2, 2, rng), random_complex(3, 3, rng));
    EXPECT_EQ(k.rows(), 6);
    EXPECT_EQ(k.cols(), 6);
}

TEST(kron, matches_entrywise_definition_and_mixed_product) {
    Rng rng(14);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = static_cast<Eigen::Index>(uniform_index(rng, 1, 4));
        const auto q = static_cast<Eigen::Index>(uniform_index(rng, 1, 4));
        ComplexMatrix a = random_complex(p, p, rng);
        ComplexMatrix b = random_complex(q, q, rng);
        EXPECT_EQ(kron(a, b), naive_kron(a, b));
        ComplexMatrix v = random_complex(p, 1, rng);
        ComplexMatrix w = random_complex(q, 1, rng);
        EXPECT_LE(max_abs(kron(a, b) * kron(v, w) - kron(a * v, b * w)), 1e-12 * max_abs(kron(a * v, b * w)) + 1e-12);
    }
}

TEST(complete_to_unitary, basis_column_completes_to_identity) {
    ComplexMatrix e1 = ComplexMatrix::Zero(3, 1);
    e1(0, 0) = 1;
    EXPECT_LE(max_abs(complete_to_unitary(e1) - ComplexMatrix::Identity(3, 3)), 1e-15);
}

TEST(complete_to_unitary, full_set_is_returned_unchanged) {
    const double h = 1 / std::sqrt(2.0);
    ComplexMatrix u(2, 2);
    u << h, h, h, -h;
    EXPECT_EQ(complete_to_unitary(u), u);
}

TEST(complete_to_unitary, random_partial_isometries) {
    Rng rng(15);
    for (int trial = 0; trial < 100; ++trial) {
        const auto d = static_cast<Eigen::Index>(uniform_index(rng, 1, 12));
        const auto k = static_cast<Eigen::Index>(uniform_index(rng, 0, static_cast<size_t>(d)));
        ComplexMatrix given = random_isometry(d, k, rng);
        for (CompletionOrder order : {CompletionOrder::ascending, CompletionOrder::descending}) {
            ComplexMatrix u = complete_to_unitary(given, order);
            EXPECT_LE(unitarity_defect(u), 1e-9);
            EXPECT_EQ(u.leftCols(k), given);
        }
    }
}

TEST(complete_to_unitary, orders_differ_but_both_complete) {
    ComplexMatrix given = ComplexMatrix::Zero(3, 1);
    given(1, 0) = 1;
    ComplexMatrix up = complete_to_unitary(given, CompletionOrder::ascending);
    ComplexMatrix down = complete_to_unitary(given, CompletionOrder::descending);
    EXPECT_EQ(up(0, 1), Complex(1));
    EXPECT_EQ(down(2, 1), Complex(1));
}

TEST(complete_to_unitary, reports_offending_pair) {
    ComplexMatrix given(2, 2);
    given << 1, 0.6, 0, 0.8;
    try {
        complete_to_unitary(given);
        FAIL() << "expected WellformednessError";
    } catch (const WellformednessError &e) {
        std::string what = e.what();
        EXPECT_NE(what.find("columns 0 and 1"), std::string::npos) << what;
        EXPECT_NE(what.find("0.59999999999999998"), std::string::npos) << what;
    }
}

TEST(complete_partial_unitary, keeps_specified_slots) {
    Rng rng(16);
    ComplexMatrix iso = random_isometry(5, 2, rng);
    ComplexMatrix partial = ComplexMatrix::Zero(5, 5);
    partial.col(1) = iso.col(0);
    partial.col(3) = iso.col(1);
    ComplexMatrix u = complete_partial_unitary(partial, {false, true, false, true, false});
    EXPECT_EQ(u.col(1), iso.col(0));
    EXPECT_EQ(u.col(3), iso.col(1));
    EXPECT_LE(unitarity_defect(u), 1e-12);
}

TEST(accumulate_halting, immediate_acceptance) {
    ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
    ComplexVector init = ComplexVector::Zero(2);
    init[0] = 1;
    RunOutcome r = accumulate_halting(zero, ComplexMatrix::Identity(2, 2), zero, init, 1e-12, 100);
    EXPECT_EQ(r.p_acc, 1);
    EXPECT_EQ(r.residual, 0);
    EXPECT_EQ(r.steps, 1u);
    EXPECT_TRUE(r.converged);
}

TEST(accumulate_halting, geometric_leak_balances) {
    ComplexMatrix n(1, 1), a(1, 1);
    n << 1 / std::sqrt(2.0);
    a << 0.5;
    ComplexVector init = ComplexVector::Ones(1);
    RunOutcome r = accumulate_halting(n, a, a, init, 1e-12, 1000);
    EXPECT_NEAR(r.p_acc, 0.5, 1e-12);
    EXPECT_NEAR(r.p_rej, 0.5, 1e-12);
    EXPECT_TRUE(r.converged);
}

TEST(accumulate_halting, nonconvergence_is_flagged) {
    ComplexMatrix zero = ComplexMatrix::Zero(1, 1);
    ComplexVector init = ComplexVector::Ones(1);
    RunOutcome r = accumulate_halting(ComplexMatrix::Identity(1, 1), zero, zero, init, 1e-12, 10);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.steps, 10u);
    EXPECT_EQ(r.residual, 1);
}

TEST(accumulate_halting, rejects_non_isometric_blocks) {
    ComplexMatrix two = 2 * ComplexMatrix::Identity(1, 1);
    ComplexMatrix zero = ComplexMatrix::Zero(1, 1);
    EXPECT_THROW(accumulate_halting(zero, two, zero, ComplexVector::Ones(1), 1e-12, 10), WellformednessError);
}

TEST(accumulate_halting, observer_sees_monotone_residual) {
    Rng rng(17);
    ComplexMatrix u = random_unitary(6, rng);
    ComplexMatrix n = ComplexMatrix::Zero(6, 6), a = n, r = n;
    n.topRows(3) = u.topRows(3);
    a.row(3) = u.row(3);
    r.bottomRows(2) = u.bottomRows(2);
    ComplexVector init = ComplexVector::Zero(6);
    init[0] = 1;
    double last = 1;
    size_t calls = 0;
    accumulate_halting(n, a, r, init, 1e-12, 100000, [&](size_t, const ComplexVector &, const RunOutcome &o) {
        EXPECT_LE(o.residual, last + 1e-15);
        EXPECT_NEAR(o.p_acc + o.p_rej + o.residual, 1, 1e-9);
        last = o.residual;
        ++calls;
    });
    EXPECT_GT(calls, 0u);
}

TEST(accumulate_halting, dense_sparse_and_direct_solve_agree) {
    Rng rng(18);
    for (int trial = 0; trial < 30; ++trial) {
        const auto d = static_cast<Eigen::Index>(uniform_index(rng, 2, 10));
        const auto nonhalting = static_cast<Eigen::Index>(uniform_index(rng, 1, static_cast<size_t>(d) - 1));
        ComplexMatrix u = random_unitary(d, rng);
        ComplexMatrix n = ComplexMatrix::Zero(d, d), a = n, r = n;
        for (Eigen::Index row = 0; row < d; ++row) {
            ComplexMatrix &target = row < nonhalting ? n : row % 2 == 0 ? a : r;
            target.row(row) = u.row(row);
        }
        ComplexVector init = ComplexVector::Zero(d);
        init[0] = 1;
        RunOutcome dense = accumulate_halting(n, a, r, init, 1e-14, 1000000);
        RunOutcome sparse = accumulate_halting(to_sparse(n), to_sparse(a), to_sparse(r), init, 1e-14, 1000000);
        HaltingProbabilities direct = halting_probabilities_direct(n, a, r, init);
        ASSERT_TRUE(dense.converged);
        EXPECT_NEAR(dense.p_acc, direct.p_acc, 1e-9);
        EXPECT_NEAR(dense.p_rej, direct.p_rej, 1e-9);
        EXPECT_NEAR(sparse.p_acc, dense.p_acc, 1e-12);
        EXPECT_EQ(sparse.steps, dense.steps);
    }
}

TEST(conservation_tally, counts_runs) {
    ConservationTally before = conservation_tally();
    ComplexMatrix zero = ComplexMatrix::Zero(1, 1);
    accumulate_halting(zero, ComplexMatrix::Identity(1, 1), zero, ComplexVector::Ones(1), 1e-12, 10);
    ConservationTally after = conservation_tally();
    EXPECT_EQ(after.runs, before.runs + 1);
    EXPECT_EQ(after.failures, before.failures);
}

TEST(accumulate_halting, throws_when_mass_is_created) {
    // Unit stacked columns that are not orthogonal: the map is not an isometry.
    const double h = 1 / std::sqrt(2.0);
    ComplexMatrix n(2, 2), a(2, 2);
    n << h, h, 0, 0;
    a << h, h, 0, 0;
    ComplexMatrix r = ComplexMatrix::Zero(2, 2);
    ComplexVector init(2);
    init << h, h;
    ConservationTally before = conservation_tally();
    EXPECT_THROW(accumulate_halting(n, a, r, init, 1e-12, 10), ConservationError);
    EXPECT_EQ(conservation_tally().failures, before.failures + 1);
}
