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

#include "qfalab/twoway.hpp"

#include <ostream>
#include <sstream>

#include "qfalab/errors.hpp"

namespace qfa {

bool TwoWayKwqfa::one_way() const {
    for (Direction d : directions) {
        if (d == Direction::left) {
            return false;
        }
    }
    return true;
}

bool TwoWayKwqfa::column_specified(size_t symbol, size_t state) const {
    return specified.empty() || specified[symbol].empty() || specified[symbol][state];
}

std::string TwoWayKwqfa::state_name(size_t q) const {
    if (q < state_names.size()) {
        return state_names[q];
    }
    return "q" + std::to_string(q);
}

namespace {

struct Image {
    size_t target;
    Complex amplitude;
};

// Nonzero entries of every column of every U_sigma.
std::vector<std::vector<std::vector<Image>>> column_images(const TwoWayKwqfa &m) {
    std::vector<std::vector<std::vector<Image>>> out(m.unitaries.size());
    for (size_t s = 0; s < m.unitaries.size(); ++s) {
        const ComplexMatrix &u = m.unitaries[s];
        out[s].resize(m.state_count);
        for (Eigen::Index q = 0; q < u.cols(); ++q) {
            for (Eigen::Index t = 0; t < u.rows(); ++t) {
                if (u(t, q) != Complex(0)) {
                    out[s][static_cast<size_t>(q)].push_back({static_cast<size_t>(t), u(t, q)});
                }
            }
        }
    }
    return out;
}

}  // namespace

ConfigSpace build_config_operator(const TwoWayKwqfa &m, std::string_view w) {
    ConfigSpace space;
    space.input = std::string(w);
    space.tape = m.alphabet.tape(w);
    space.state_count = m.state_count;
    const size_t n_pos = space.positions();
    const auto images = column_images(m);

    // Reachability from the start configuration through nonhalting states.
    std::vector<bool> seen(space.dimension(), false);
    std::vector<size_t> frontier{space.index(m.initial, 1)};
    seen[frontier.front()] = true;
    while (!frontier.empty()) {
        size_t c = frontier.back();
        frontier.pop_back();
        size_t q = space.state_of(c);
        size_t x = space.position_of(c);
        size_t s = space.tape[x - 1];
        if (!m.column_specified(s, q)) {
            space.unspecified_reachable.push_back(c);
        }
        for (const Image &img : images[s][q]) {
            if (std::abs(img.amplitude) <= tol::kIdentity) {
                continue;
            }
            long target = static_cast<long>(x) + offset(m.directions[img.target]);
            if (target < 1 || target > static_cast<long>(n_pos)) {
                std::ostringstream msg;
                msg.precision(17);
                msg << "boundary violation on input \"" << w << "\": state " << m.state_name(q) << " at position "
                    << x << " reading " << m.alphabet.tape_symbol_name(s) << " sends amplitude ("
                    << img.amplitude.real() << ", " << img.amplitude.imag() << ") to state "
                    << m.state_name(img.target) << " at position " << target;
                throw WellformednessError(msg.str());
            }
            if (m.kinds[img.target] == StateKind::nonhalting) {
                size_t next = space.index(img.target, static_cast<size_t>(target));
                if (!seen[next]) {
                    seen[next] = true;
                    frontier.push_back(next);
                }
            }
        }
    }

    std::vector<Eigen::Triplet<Complex>> triplets;
    for (size_t q = 0; q < m.state_count; ++q) {
        for (size_t x = 1; x <= n_pos; ++x) {
            size_t s = space.tape[x - 1];
            for (const Image &img : images[s][q]) {
                long raw = static_cast<long>(x) - 1 + offset(m.directions[img.target]);
                long wrapped = (raw % static_cast<long>(n_pos) + static_cast<long>(n_pos)) % static_cast<long>(n_pos);
                size_t row = space.index(img.target, static_cast<size_t>(wrapped) + 1);
                triplets.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(space.index(q, x)),
                                      img.amplitude);
            }
        }
    }
    const auto dim = static_cast<Eigen::Index>(space.dimension());
    space.op.resize(dim, dim);
    space.op.setFromTriplets(triplets.begin(), triplets.end());
    return space;
}

namespace {

struct Blocks {
    SparseComplexMatrix nonhalt;
    SparseComplexMatrix accept;
    SparseComplexMatrix reject;
};

Blocks measured_blocks(const TwoWayKwqfa &m, const ConfigSpace &space) {
    std::vector<Eigen::Triplet<Complex>> parts[3];
    for (Eigen::Index j = 0; j < space.op.outerSize(); ++j) {
        for (SparseComplexMatrix::InnerIterator it(space.op, j); it; ++it) {
            StateKind k = m.kinds[space.state_of(static_cast<size_t>(it.row()))];
            parts[static_cast<int>(k)].emplace_back(it.row(), it.col(), it.value());
        }
    }
    const auto dim = static_cast<Eigen::Index>(space.dimension());
    Blocks b{SparseComplexMatrix(dim, dim), SparseComplexMatrix(dim, dim), SparseComplexMatrix(dim, dim)};
    b.nonhalt.setFromTriplets(parts[static_cast<int>(StateKind::nonhalting)].begin(),
                              parts[static_cast<int>(StateKind::nonhalting)].end());
    b.accept.setFromTriplets(parts[static_cast<int>(StateKind::accepting)].begin(),
                             parts[static_cast<int>(StateKind::accepting)].end());
    b.reject.setFromTriplets(parts[static_cast<int>(StateKind::rejecting)].begin(),
                             parts[static_cast<int>(StateKind::rejecting)].end());
    return b;
}

ComplexVector start_vector(const TwoWayKwqfa &m, const ConfigSpace &space) {
    ComplexVector init = ComplexVector::Zero(static_cast<Eigen::Index>(space.dimension()));
    init[static_cast<Eigen::Index>(space.index(m.initial, 1))] = 1;
    return init;
}

}  // namespace

RunOutcome run_twoway(const TwoWayKwqfa &m, const ConfigSpace &space, double tol, size_t max_steps) {
    Blocks b = measured_blocks(m, space);
    return accumulate_halting(b.nonhalt, b.accept, b.reject, start_vector(m, space), tol, max_steps);
}

RunOutcome run_twoway(const TwoWayKwqfa &m, std::string_view w, double tol, size_t max_steps) {
    return run_twoway(m, build_config_operator(m, w), tol, max_steps);
}

std::vector<TraceStep> path_trace(const TwoWayKwqfa &m, std::string_view w, size_t step_limit) {
    ConfigSpace space = build_config_operator(m, w);
    Blocks b = measured_blocks(m, space);
    std::vector<TraceStep> out;
    auto record = [&](size_t step, const ComplexVector &psi) {
        TraceStep row;
        row.step = step;
        for (Eigen::Index c = 0; c < psi.size(); ++c) {
            if (std::abs(psi[c]) > tol::kIdentity) {
                row.entries.push_back(
                    {space.state_of(static_cast<size_t>(c)), space.position_of(static_cast<size_t>(c)), psi[c]});
            }
        }
        out.push_back(std::move(row));
    };
    ComplexVector init = start_vector(m, space);
    record(0, init);
    RunOutcome previous;
    accumulate_halting(b.nonhalt, b.accept, b.reject, init, 1e-24, step_limit,
                       [&](size_t step, const ComplexVector &psi, const RunOutcome &so_far) {
                           record(step, psi);
                           out.back().accept_increment = so_far.p_acc - previous.p_acc;
                           out.back().reject_increment = so_far.p_rej - previous.p_rej;
                           previous = so_far;
                       });
    return out;
}

void write_trace(std::ostream &out, const TwoWayKwqfa &m, const std::vector<TraceStep> &trace) {
    auto flags = out.flags();
    auto precision = out.precision(17);
    out << "# step state position re im\n";
    for (const TraceStep &row : trace) {
        for (const TraceEntry &e : row.entries) {
            out << row.step << ' ' << m.state_name(e.state) << ' ' << e.position << ' ' << e.amplitude.real() << ' '
                << e.amplitude.imag() << '\n';
        }
    }
    out.flags(flags);
    out.precision(precision);
}

}  // namespace qfa
