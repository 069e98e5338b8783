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

#include "qfalab/wellformed.hpp"

#include <cmath>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "qfalab/errors.hpp"

namespace qfa {

void CheckReport::merge(const CheckReport &other) {
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

void CheckReport::merge(const CheckReport &other, const std::string &scope) {
    for (Violation v : other.violations) {
        v.condition = scope + "." + v.condition;
        violations.push_back(std::move(v));
    }
}

namespace {

std::string describe(const Violation &v) {
    std::ostringstream out;
    out.precision(17);
    out << v.condition << " witness=(";
    for (size_t k = 0; k < v.witness.size(); ++k) {
        out << (k ? "," : "") << v.witness[k];
    }
    out << ") measured=" << v.measured << " tolerance=" << v.tolerance;
    if (!v.detail.empty()) {
        out << " " << v.detail;
    }
    return out.str();
}

}  // namespace

void require(const CheckReport &report, const std::string &what) {
    if (!report.passed()) {
        throw WellformednessError(what + " is not wellformed: " + describe(report.violations.front()));
    }
}

void write_report_text(std::ostream &out, const CheckReport &report) {
    out << (report.passed() ? "PASS" : "FAIL") << " (" << report.violations.size() << " violations)\n";
    for (const Violation &v : report.violations) {
        out << "  " << describe(v) << "\n";
    }
}

std::string report_json(const CheckReport &report) {
    nlohmann::json j;
    j["passed"] = report.passed();
    j["violations"] = nlohmann::json::array();
    for (const Violation &v : report.violations) {
        j["violations"].push_back({{"condition", v.condition},
                                   {"witness", v.witness},
                                   {"measured", v.measured},
                                   {"tolerance", v.tolerance},
                                   {"detail", v.detail}});
    }
    return j.dump();
}

CheckReport check_stochastic(std::span<const RealMatrix> ms, double tolerance) {
    CheckReport r;
    for (size_t k = 0; k < ms.size(); ++k) {
        const RealMatrix &m = ms[k];
        if (m.rows() != m.cols()) {
            r.violations.push_back({"stochastic.square", {k}, static_cast<double>(m.cols()), 0, "matrix is not square"});
            continue;
        }
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                if (m(i, j) < -tolerance || !std::isfinite(m(i, j))) {
                    r.violations.push_back({"stochastic.nonnegative",
                                            {k, static_cast<size_t>(i), static_cast<size_t>(j)},
                                            m(i, j),
                                            tolerance,
                                            ""});
                }
            }
            double sum = m.col(j).sum();
            if (!(std::abs(sum - 1.0) <= tolerance)) {
                r.violations.push_back({"stochastic.column_sum", {k, static_cast<size_t>(j)}, sum, tolerance, ""});
            }
        }
    }
    return r;
}

ComplexMatrix superop_defect(const SuperOp &s) {
    if (s.kraus.empty()) {
        throw DimensionError("superoperator has no Kraus elements");
    }
    const Eigen::Index n = s.kraus.front().cols();
    ComplexMatrix sum = -ComplexMatrix::Identity(n, n);
    for (const auto &e : s.kraus) {
        if (e.cols() != n || e.rows() != n) {
            throw DimensionError("Kraus elements must be square and of equal size");
        }
        sum.noalias() += e.adjoint() * e;
    }
    return sum;
}

namespace {

Violation worst_entry(const std::string &condition, const ComplexMatrix &defect, double tolerance,
                      std::vector<size_t> prefix) {
    Eigen::Index row = 0;
    Eigen::Index col = 0;
    double worst = defect.size() ? defect.cwiseAbs().maxCoeff(&row, &col) : 0;
    prefix.push_back(static_cast<size_t>(row));
    prefix.push_back(static_cast<size_t>(col));
    std::ostringstream detail;
    detail.precision(17);
    detail << "defect entry (" << defect(row, col).real() << ", " << defect(row, col).imag() << ")";
    return {condition, std::move(prefix), worst, tolerance, detail.str()};
}

}  // namespace

CheckReport check_superop(const SuperOp &s, double tolerance) {
    CheckReport r;
    ComplexMatrix defect = superop_defect(s);
    if (!(max_abs(defect) <= tolerance)) {
        r.violations.push_back(worst_entry("superop.completeness", defect, tolerance, {}));
    }
    return r;
}

CheckReport check_unitary(std::span<const ComplexMatrix> us, double tolerance) {
    CheckReport r;
    for (size_t k = 0; k < us.size(); ++k) {
        if (us[k].rows() != us[k].cols()) {
            r.violations.push_back({"unitary.square", {k}, static_cast<double>(us[k].cols()), 0, "matrix is not square"});
            continue;
        }
        ComplexMatrix defect = us[k].adjoint() * us[k] - ComplexMatrix::Identity(us[k].rows(), us[k].cols());
        if (!(max_abs(defect) <= tolerance)) {
            r.violations.push_back(worst_entry("unitary", defect, tolerance, {k}));
        }
    }
    return r;
}

Local2QfaTable::Local2QfaTable(size_t states, size_t symbols, size_t registers)
    : states_(states), symbols_(symbols), registers_(registers), amp_(states * symbols * states * 3 * registers) {
}

size_t Local2QfaTable::offset(size_t q, size_t sigma, size_t target, Direction d, size_t omega) const {
    return (((q * symbols_ + sigma) * states_ + target) * 3 + static_cast<size_t>(d)) * registers_ + omega;
}

Complex &Local2QfaTable::at(size_t q, size_t sigma, size_t target, Direction d, size_t omega) {
    return amp_.at(offset(q, sigma, target, d, omega));
}

const Complex &Local2QfaTable::at(size_t q, size_t sigma, size_t target, Direction d, size_t omega) const {
    return amp_.at(offset(q, sigma, target, d, omega));
}

UnidirectionalTable::UnidirectionalTable(size_t states, size_t symbols, size_t registers,
                                         std::vector<Direction> directions)
    : states_(states),
      symbols_(symbols),
      registers_(registers),
      directions_(std::move(directions)),
      amp_(states * symbols * states * registers) {
    if (directions_.size() != states) {
        throw DimensionError("one direction per state is required");
    }
}

Complex &UnidirectionalTable::at(size_t q, size_t sigma, size_t target, size_t omega) {
    return amp_.at(((q * symbols_ + sigma) * states_ + target) * registers_ + omega);
}

const Complex &UnidirectionalTable::at(size_t q, size_t sigma, size_t target, size_t omega) const {
    return amp_.at(((q * symbols_ + sigma) * states_ + target) * registers_ + omega);
}

CheckReport check_local_2qfa(const Local2QfaTable &delta, double tolerance) {
    CheckReport r;
    const size_t nq = delta.states();
    const size_t ns = delta.symbols();
    const size_t nw = delta.registers();
    const Direction dirs[] = {Direction::left, Direction::stay, Direction::right};
    auto report = [&](const char *cond, std::vector<size_t> witness, Complex value, double expected) {
        double measured = std::abs(value - Complex(expected));
        if (!(measured <= tolerance)) {
            std::ostringstream detail;
            detail.precision(17);
            detail << "sum (" << value.real() << ", " << value.imag() << ") expected " << expected;
            r.violations.push_back({cond, std::move(witness), measured, tolerance, detail.str()});
        }
    };
    // Case 1: same head position.
    for (size_t s = 0; s < ns; ++s) {
        for (size_t q1 = 0; q1 < nq; ++q1) {
            for (size_t q2 = 0; q2 < nq; ++q2) {
                Complex sum = 0;
                for (size_t t = 0; t < nq; ++t) {
                    for (Direction d : dirs) {
                        for (size_t w = 0; w < nw; ++w) {
                            sum += std::conj(delta.at(q1, s, t, d, w)) * delta.at(q2, s, t, d, w);
                        }
                    }
                }
                report("local.case1", {q1, q2, s}, sum, q1 == q2 ? 1.0 : 0.0);
            }
        }
    }
    const size_t cent = 0;
    const size_t dollar = ns - 1;
    // Cases 2 and 3: the first configuration one or two squares left of the second.
    for (size_t s1 = 0; s1 < ns; ++s1) {
        if (s1 == dollar) {
            continue;
        }
        for (size_t s2 = 0; s2 < ns; ++s2) {
            if (s2 == cent) {
                continue;
            }
            for (size_t q1 = 0; q1 < nq; ++q1) {
                for (size_t q2 = 0; q2 < nq; ++q2) {
                    Complex one_apart = 0;
                    Complex two_apart = 0;
                    for (size_t t = 0; t < nq; ++t) {
                        for (size_t w = 0; w < nw; ++w) {
                            one_apart += std::conj(delta.at(q1, s1, t, Direction::right, w)) *
                                             delta.at(q2, s2, t, Direction::stay, w) +
                                         std::conj(delta.at(q1, s1, t, Direction::stay, w)) *
                                             delta.at(q2, s2, t, Direction::left, w);
                            two_apart += std::conj(delta.at(q1, s1, t, Direction::right, w)) *
                                         delta.at(q2, s2, t, Direction::left, w);
                        }
                    }
                    report("local.case2", {q1, q2, s1, s2}, one_apart, 0.0);
                    report("local.case3", {q1, q2, s1, s2}, two_apart, 0.0);
                }
            }
        }
    }
    return r;
}

CheckReport check_local_unidirectional(const UnidirectionalTable &delta, double tolerance) {
    CheckReport r;
    const size_t nq = delta.states();
    for (size_t s = 0; s < delta.symbols(); ++s) {
        for (size_t q1 = 0; q1 < nq; ++q1) {
            for (size_t q2 = 0; q2 < nq; ++q2) {
                Complex sum = 0;
                for (size_t t = 0; t < nq; ++t) {
                    for (size_t w = 0; w < delta.registers(); ++w) {
                        sum += std::conj(delta.at(q1, s, t, w)) * delta.at(q2, s, t, w);
                    }
                }
                double expected = q1 == q2 ? 1.0 : 0.0;
                double measured = std::abs(sum - Complex(expected));
                if (!(measured <= tolerance)) {
                    std::ostringstream detail;
                    detail.precision(17);
                    detail << "sum (" << sum.real() << ", " << sum.imag() << ") expected " << expected;
                    r.violations.push_back({"local.unidirectional", {q1, q2, s}, measured, tolerance, detail.str()});
                }
            }
        }
    }
    return r;
}

std::vector<SuperOp> stacked_operators(const UnidirectionalTable &delta) {
    const auto nq = static_cast<Eigen::Index>(delta.states());
    std::vector<SuperOp> out(delta.symbols());
    for (size_t s = 0; s < delta.symbols(); ++s) {
        for (size_t w = 0; w < delta.registers(); ++w) {
            ComplexMatrix e = ComplexMatrix::Zero(nq, nq);
            for (Eigen::Index q = 0; q < nq; ++q) {
                for (Eigen::Index t = 0; t < nq; ++t) {
                    e(t, q) = delta.at(static_cast<size_t>(q), s, static_cast<size_t>(t), w);
                }
            }
            out[s].kraus.push_back(std::move(e));
        }
    }
    return out;
}

Local2QfaTable to_local_2qfa(const UnidirectionalTable &delta) {
    Local2QfaTable out(delta.states(), delta.symbols(), delta.registers());
    for (size_t q = 0; q < delta.states(); ++q) {
        for (size_t s = 0; s < delta.symbols(); ++s) {
            for (size_t t = 0; t < delta.states(); ++t) {
                for (size_t w = 0; w < delta.registers(); ++w) {
                    out.at(q, s, t, delta.directions()[t], w) = delta.at(q, s, t, w);
                }
            }
        }
    }
    return out;
}

UnidirectionalTable transition_table(const TwoWayKwqfa &m) {
    UnidirectionalTable out(m.state_count, m.unitaries.size(), 1, m.directions);
    for (size_t s = 0; s < m.unitaries.size(); ++s) {
        for (size_t q = 0; q < m.state_count; ++q) {
            for (size_t t = 0; t < m.state_count; ++t) {
                out.at(q, s, t, 0) = m.unitaries[s](static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(q));
            }
        }
    }
    return out;
}

namespace {

struct GramDefect {
    double value = 0;
    size_t row = 0;
    size_t col = 0;
};

GramDefect worst_gram_entry(const ConfigSpace &space) {
    SparseComplexMatrix gram = SparseComplexMatrix(space.op.adjoint()) * space.op;
    GramDefect worst;
    std::vector<bool> diag_seen(static_cast<size_t>(gram.cols()), false);
    auto consider = [&](double v, size_t row, size_t col) {
        if (v > worst.value) {
            worst = {v, row, col};
        }
    };
    for (Eigen::Index j = 0; j < gram.outerSize(); ++j) {
        for (SparseComplexMatrix::InnerIterator it(gram, j); it; ++it) {
            Complex expected = it.row() == it.col() ? Complex(1) : Complex(0);
            if (it.row() == it.col()) {
                diag_seen[static_cast<size_t>(j)] = true;
            }
            consider(std::abs(it.value() - expected), static_cast<size_t>(it.row()), static_cast<size_t>(it.col()));
        }
    }
    for (size_t j = 0; j < diag_seen.size(); ++j) {
        if (!diag_seen[j]) {
            consider(1.0, j, j);
        }
    }
    return worst;
}

}  // namespace

double config_unitarity_defect(const ConfigSpace &space) {
    return worst_gram_entry(space).value;
}

CheckReport check_config_unitary(const ConfigSpace &space, double tolerance) {
    CheckReport r;
    GramDefect d = worst_gram_entry(space);
    if (!(d.value <= tolerance)) {
        r.violations.push_back({"config.unitary",
                                {space.state_of(d.row), space.position_of(d.row), space.state_of(d.col),
                                 space.position_of(d.col)},
                                d.value,
                                tolerance,
                                "input \"" + space.input + "\", witness is (state, position) of both configurations"});
    }
    return r;
}

namespace {

void check_square_family(CheckReport &r, const std::string &what, size_t count, size_t n,
                         const std::vector<Eigen::Index> &rows, const std::vector<Eigen::Index> &cols) {
    if (rows.size() != count) {
        r.violations.push_back({what + ".count", {}, static_cast<double>(rows.size()), 0,
                                "expected " + std::to_string(count) + " matrices"});
        return;
    }
    for (size_t k = 0; k < rows.size(); ++k) {
        if (rows[k] != static_cast<Eigen::Index>(n) || cols[k] != static_cast<Eigen::Index>(n)) {
            r.violations.push_back({what + ".shape", {k}, static_cast<double>(rows[k]), 0,
                                    "expected " + std::to_string(n) + "x" + std::to_string(n)});
        }
    }
}

template <typename Ms>
void shapes(const Ms &ms, std::vector<Eigen::Index> &rows, std::vector<Eigen::Index> &cols) {
    for (const auto &m : ms) {
        rows.push_back(m.rows());
        cols.push_back(m.cols());
    }
}

void check_partition(CheckReport &r, const std::vector<StateKind> &kinds, size_t n, size_t initial) {
    if (kinds.size() != n) {
        r.violations.push_back({"partition.size", {}, static_cast<double>(kinds.size()), 0, "one kind per state"});
        return;
    }
    if (initial >= n || kinds[initial] != StateKind::nonhalting) {
        r.violations.push_back({"partition.initial", {initial}, 0, 0, "initial state must be nonhalting"});
    }
}

}  // namespace

CheckReport check_machine(const RtPfa &m) {
    CheckReport r;
    std::vector<Eigen::Index> rows, cols;
    shapes(m.transitions, rows, cols);
    check_square_family(r, "rtpfa.transitions", m.alphabet.tape_size(), m.state_count, rows, cols);
    if (!r.passed()) {
        return r;
    }
    r.merge(check_stochastic(m.transitions));
    if (m.accepting.size() != m.state_count) {
        r.violations.push_back({"rtpfa.accepting", {}, static_cast<double>(m.accepting.size()), 0,
                                "one accepting flag per state"});
    }
    if (m.initial >= m.state_count) {
        r.violations.push_back({"rtpfa.initial", {m.initial}, 0, 0, "initial state out of range"});
    }
    return r;
}

CheckReport check_machine(const Gfa &g) {
    CheckReport r;
    std::vector<Eigen::Index> rows, cols;
    shapes(g.transitions, rows, cols);
    check_square_family(r, "gfa.transitions", g.alphabet.size(), g.state_count, rows, cols);
    if (g.initial.size() != static_cast<Eigen::Index>(g.state_count) ||
        g.final.size() != static_cast<Eigen::Index>(g.state_count)) {
        r.violations.push_back({"gfa.vectors", {}, static_cast<double>(g.initial.size()), 0,
                                "initial and final vectors must have one entry per state"});
    }
    return r;
}

CheckReport check_machine(const RtQfa &m) {
    CheckReport r;
    if (m.operations.size() != m.alphabet.tape_size()) {
        r.violations.push_back({"rtqfa.operations.count", {}, static_cast<double>(m.operations.size()), 0,
                                "one operation per tape symbol"});
        return r;
    }
    for (size_t s = 0; s < m.operations.size(); ++s) {
        std::vector<Eigen::Index> rows, cols;
        shapes(m.operations[s].kraus, rows, cols);
        CheckReport shape;
        check_square_family(shape, "kraus", rows.size(), m.state_count, rows, cols);
        if (rows.empty()) {
            shape.violations.push_back({"kraus.empty", {s}, 0, 0, "no Kraus elements"});
        }
        r.merge(shape, "rtqfa." + m.alphabet.tape_symbol_name(s));
        if (shape.passed()) {
            r.merge(check_superop(m.operations[s]), "rtqfa." + m.alphabet.tape_symbol_name(s));
        }
    }
    if (m.accepting.size() != m.state_count) {
        r.violations.push_back({"rtqfa.accepting", {}, static_cast<double>(m.accepting.size()), 0,
                                "one accepting flag per state"});
    }
    if (m.initial >= m.state_count) {
        r.violations.push_back({"rtqfa.initial", {m.initial}, 0, 0, "initial state out of range"});
    }
    return r;
}

CheckReport check_machine(const RtKwqfa &m) {
    CheckReport r;
    std::vector<Eigen::Index> rows, cols;
    shapes(m.unitaries, rows, cols);
    check_square_family(r, "rtkwqfa.unitaries", m.alphabet.tape_size(), m.state_count, rows, cols);
    if (!r.passed()) {
        return r;
    }
    r.merge(check_unitary(m.unitaries), "rtkwqfa");
    check_partition(r, m.kinds, m.state_count, m.initial);
    return r;
}

CheckReport check_machine(const TwoWayKwqfa &m, bool require_one_way) {
    CheckReport r;
    std::vector<Eigen::Index> rows, cols;
    shapes(m.unitaries, rows, cols);
    check_square_family(r, "kwqfa.unitaries", m.alphabet.tape_size(), m.state_count, rows, cols);
    if (!r.passed()) {
        return r;
    }
    r.merge(check_unitary(m.unitaries), "kwqfa");
    check_partition(r, m.kinds, m.state_count, m.initial);
    if (m.directions.size() != m.state_count) {
        r.violations.push_back({"kwqfa.directions", {}, static_cast<double>(m.directions.size()), 0,
                                "one direction per state"});
    } else if (require_one_way) {
        for (size_t q = 0; q < m.state_count; ++q) {
            if (m.directions[q] == Direction::left) {
                r.violations.push_back({"kwqfa.one_way", {q}, -1, 0, "state " + m.state_name(q) + " moves left"});
            }
        }
    }
    return r;
}

}  // namespace qfa
