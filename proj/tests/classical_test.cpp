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

#include <gtest/gtest.h>

#include "qfalab/errors.hpp"
#include "test_util.hpp"

using namespace qfa;
using namespace qfa::testing;

namespace {

RtPfa fair_coin() {
    RtPfa m;
    m.state_count = 2;
    m.alphabet = Alphabet("a");
    RealMatrix id = RealMatrix::Identity(2, 2);
    RealMatrix coin(2, 2);
    coin << 0.5, 0, 0.5, 1;
    m.transitions = {id, coin, id};
    m.accepting = {false, true};
    return m;
}

// Sum over every state sequence of the product of transition probabilities.
double path_sum(const RtPfa &m, const std::vector<size_t> &tape, size_t step, size_t state) {
    if (step == tape.size()) {
        return m.accepting[state] ? 1.0 : 0.0;
    }
    double total = 0;
    for (size_t next = 0; next < m.state_count; ++next) {
        double p = m.transitions[tape[step]](static_cast<Eigen::Index>(next), static_cast<Eigen::Index>(state));
        if (p != 0) {
            total += p * path_sum(m, tape, step + 1, next);
        }
    }
    return total;
}

}  // namespace

TEST(run_rtpfa, identity_dynamics) {
    RtPfa m;
    m.state_count = 1;
    m.alphabet = Alphabet("ab");
    m.transitions.assign(4, RealMatrix::Identity(1, 1));
    m.accepting = {true};
    EXPECT_EQ(run_rtpfa(m, "ab"), 1);
    m.accepting = {false};
    EXPECT_EQ(run_rtpfa(m, "ab"), 0);
}

TEST(run_rtpfa, fair_coin) {
    EXPECT_DOUBLE_EQ(run_rtpfa(fair_coin(), "a"), 0.5);
    EXPECT_DOUBLE_EQ(run_rtpfa(fair_coin(), "aa"), 0.75);
    EXPECT_DOUBLE_EQ(run_rtpfa(fair_coin(), ""), 0);
}

TEST(run_rtpfa, rejects_foreign_symbols) {
    EXPECT_THROW(run_rtpfa(fair_coin(), "ab"), InputError);
}

TEST(run_rtpfa, matches_path_enumeration) {
    Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        RtPfa m = random_rtpfa(uniform_index(rng, 1, 4), rng);
        for (const std::string &w : m.alphabet.words_up_to(4)) {
            double expected = path_sum(m, reference_tape("ab", w), 0, m.initial);
            EXPECT_NEAR(run_rtpfa(m, w), expected, 1e-12) << w;
        }
    }
}

TEST(run_rtpfa, state_vectors_stay_stochastic) {
    Rng rng(32);
    for (int trial = 0; trial < 40; ++trial) {
        RtPfa m = random_rtpfa(uniform_index(rng, 1, 6), rng);
        std::string w = random_word(rng, 10);
        std::vector<RealVector> vs = rtpfa_state_vectors(m, w);
        ASSERT_EQ(vs.size(), w.size() + 3);
        for (const RealVector &v : vs) {
            EXPECT_GE(v.minCoeff(), 0);
            EXPECT_NEAR(v.sum(), 1, 1e-12);
        }
        double p = run_rtpfa(m, w);
        EXPECT_GE(p, -1e-12);
        EXPECT_LE(p, 1 + 1e-12);
    }
}

TEST(run_gfa, identity_and_empty_word) {
    Gfa g;
    g.state_count = 2;
    g.alphabet = Alphabet("ab");
    g.transitions.assign(2, RealMatrix::Identity(2, 2));
    g.initial = RealVector::Unit(2, 0);
    g.final = RealVector::Unit(2, 0);
    EXPECT_EQ(run_gfa(g, ""), 1);
    EXPECT_EQ(run_gfa(g, "abba"), 1);

    g.initial << 2, 3;
    g.final << -1, 4;
    EXPECT_EQ(run_gfa(g, ""), 10);
}

TEST(run_gfa, products_apply_first_letter_first) {
    Gfa g;
    g.state_count = 2;
    g.alphabet = Alphabet("ab");
    RealMatrix a(2, 2), b(2, 2);
    a << 1, 2, 0, 1;
    b << 1, 0, 3, 1;
    g.transitions = {a, b};
    g.initial = RealVector::Unit(2, 0);
    g.final = RealVector::Unit(2, 1);
    // f * B * A * v0 for w = "ab".
    EXPECT_EQ(run_gfa(g, "ab"), (g.final.transpose() * b * a * g.initial)(0, 0));
    EXPECT_EQ(run_gfa(g, "ab"), 3);
    EXPECT_EQ(run_gfa(g, "ba"), 3);
    EXPECT_THROW(run_gfa(g, "c"), InputError);
}

TEST(classify, boundaries) {
    EXPECT_FALSE(classify(0.5, 0.5, CutpointMode::strict));
    EXPECT_TRUE(classify(0.5, 0.5, CutpointMode::nonstrict));
    EXPECT_TRUE(classify(0.5 + 1e-12, 0.5, CutpointMode::equals));
    EXPECT_FALSE(classify(0.5 + 1e-6, 0.5, CutpointMode::equals));
    EXPECT_TRUE(classify(0.5 + 1e-6, 0.5, CutpointMode::equals, 1e-5));
    CutpointVerdict v = classify_all(0.25, 0.5);
    EXPECT_FALSE(v.strict);
    EXPECT_FALSE(v.nonstrict);
    EXPECT_FALSE(v.equals);
}

TEST(run_rtpfa, leaking_matrix_is_a_conservation_error) {
    Rng rng(33);
    RtPfa m = random_rtpfa(3, rng);
    m.transitions[1] *= 0.9;
    const ConservationTally before = conservation_tally();
    EXPECT_NO_THROW(run_rtpfa(m, "b"));
    EXPECT_THROW(run_rtpfa(m, "ab"), ConservationError);
    const ConservationTally after = conservation_tally();
    EXPECT_EQ(after.runs, before.runs + 2);
    EXPECT_EQ(after.failures, before.failures + 1);
}
