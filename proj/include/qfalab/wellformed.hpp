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

// Wellformedness checkers. Every checker reports witnesses instead of a bare
// boolean: the violated condition, the indices that exhibit it, the measured
// value and the tolerance it was held to.

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qfalab/classical.hpp"
#include "qfalab/linalg.hpp"
#include "qfalab/quantum_rt.hpp"
#include "qfalab/twoway.hpp"

namespace qfa {

struct Violation {
    std::string condition;
    std::vector<size_t> witness;
    double measured = 0;
    double tolerance = 0;
    std::string detail;
};

struct CheckReport {
    std::vector<Violation> violations;

    bool passed() const {
        return violations.empty();
    }
    void merge(const CheckReport &other);
    /// Prefixes every condition of `other` with `scope` before merging.
    void merge(const CheckReport &other, const std::string &scope);
};

/// Throws WellformednessError describing the first violation, if any.
void require(const CheckReport &report, const std::string &what);

/// "PASS"/"FAIL" header plus one line per violation.
void write_report_text(std::ostream &out, const CheckReport &report);
/// The same content as JSON.
std::string report_json(const CheckReport &report);

/// Nonnegative entries and unit column sums.
CheckReport check_stochastic(std::span<const RealMatrix> ms, double tolerance = tol::kIdentity);

/// sum_i E_i^dagger E_i - I, the quantity check_superop bounds.
ComplexMatrix superop_defect(const SuperOp &s);

/// ||sum E^dagger E - I||_max <= tolerance. Witness: the worst (row, col).
CheckReport check_superop(const SuperOp &s, double tolerance = tol::kWellformed);

/// ||U^dagger U - I||_max <= tolerance per matrix. Witness: (matrix, row, col).
CheckReport check_unitary(std::span<const ComplexMatrix> us, double tolerance = tol::kWellformed);

/// delta(q, sigma, q', d, omega) of a general 2QFA. Tape symbols use the
/// Alphabet numbering (0 = left end-marker, symbols-1 = right end-marker).
class Local2QfaTable {
   public:
    Local2QfaTable(size_t states, size_t symbols, size_t registers);

    Complex &at(size_t q, size_t sigma, size_t target, Direction d, size_t omega);
    const Complex &at(size_t q, size_t sigma, size_t target, Direction d, size_t omega) const;

    size_t states() const {
        return states_;
    }
    size_t symbols() const {
        return symbols_;
    }
    size_t registers() const {
        return registers_;
    }

   private:
    size_t offset(size_t q, size_t sigma, size_t target, Direction d, size_t omega) const;

    size_t states_;
    size_t symbols_;
    size_t registers_;
    std::vector<Complex> amp_;
};

/// delta(q, sigma, q', omega) of a unidirectional 2QFA; the head movement is
/// carried by the destination state.
class UnidirectionalTable {
   public:
    UnidirectionalTable(size_t states, size_t symbols, size_t registers, std::vector<Direction> directions);

    Complex &at(size_t q, size_t sigma, size_t target, size_t omega);
    const Complex &at(size_t q, size_t sigma, size_t target, size_t omega) const;

    size_t states() const {
        return states_;
    }
    size_t symbols() const {
        return symbols_;
    }
    size_t registers() const {
        return registers_;
    }
    const std::vector<Direction> &directions() const {
        return directions_;
    }

   private:
    size_t states_;
    size_t symbols_;
    size_t registers_;
    std::vector<Direction> directions_;
    std::vector<Complex> amp_;
};

/// The three local orthogonality conditions for configurations whose head
/// positions differ by 0, 1 or 2 squares. Both orders of every state pair
/// are checked, which covers the conjugate-symmetric cases. For offsets 1
/// and 2 the two configurations may read different symbols, so every
/// tape-feasible symbol pair is checked (the left one is not the right
/// end-marker, the right one is not the left end-marker).
/// Witnesses: case1 (q1, q2, sigma); case2/case3 (q1, q2, sigma1, sigma2).
CheckReport check_local_2qfa(const Local2QfaTable &delta, double tolerance = tol::kWellformed);

/// sum_{q', omega} conj(delta(q1,s,q',omega)) delta(q2,s,q',omega) = [q1 = q2].
/// Witness: (q1, q2, sigma).
CheckReport check_local_unidirectional(const UnidirectionalTable &delta, double tolerance = tol::kWellformed);

/// E_{sigma,omega}[q', q] = delta(q, sigma, q', omega), one SuperOp per symbol.
std::vector<SuperOp> stacked_operators(const UnidirectionalTable &delta);

/// Lifts a unidirectional table to the general form: the only nonzero
/// direction for target q' is its own direction.
Local2QfaTable to_local_2qfa(const UnidirectionalTable &delta);

/// The single-register transition table of a Kondacs-Watrous machine.
UnidirectionalTable transition_table(const TwoWayKwqfa &m);

/// ||M^dagger M - I||_max of the configuration operator.
double config_unitarity_defect(const ConfigSpace &space);

CheckReport check_config_unitary(const ConfigSpace &space, double tolerance = tol::kWellformed);

/// Dimension, stochasticity and accepting-set checks.
CheckReport check_machine(const RtPfa &m);
CheckReport check_machine(const Gfa &g);
CheckReport check_machine(const RtQfa &m);
CheckReport check_machine(const RtKwqfa &m);
/// Adds the one-way restriction when `require_one_way` is set.
CheckReport check_machine(const TwoWayKwqfa &m, bool require_one_way = false);

}  // namespace qfa
