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

#include "qfalab/convert.hpp"

#include <cmath>
#include <sstream>

#include "qfalab/errors.hpp"
#include "qfalab/wellformed.hpp"

namespace qfa {

RealMatrix encode_real_pairs(const ComplexMatrix &m) {
    RealMatrix out(2 * m.rows(), 2 * m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double a = m(i, j).real();
            const double b = m(i, j).imag();
            out(2 * i, 2 * j) = a;
            out(2 * i, 2 * j + 1) = b;
            out(2 * i + 1, 2 * j) = -b;
            out(2 * i + 1, 2 * j + 1) = a;
        }
    }
    return out;
}

HermitianCompression hermitian_compression(size_t n) {
    const auto nn = static_cast<Eigen::Index>(n * n);
    HermitianCompression h{RealMatrix::Zero(nn, 2 * nn), RealMatrix::Zero(2 * nn, nn)};
    auto k = [n](size_t i, size_t j) { return static_cast<Eigen::Index>(i * n + j); };
    // Real-pair slot 2k holds Re z_k, slot 2k+1 holds -Im z_k.
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            if (i == j) {
                h.compress(k(i, i), 2 * k(i, i)) = 1;
                h.expand(2 * k(i, i), k(i, i)) = 1;
            } else if (i < j) {
                h.compress(k(i, j), 2 * k(i, j)) = 1;       // Re rho[i,j]
                h.compress(k(j, i), 2 * k(i, j) + 1) = -1;  // Im rho[i,j]
                h.expand(2 * k(i, j), k(i, j)) = 1;
                h.expand(2 * k(i, j) + 1, k(j, i)) = -1;
                h.expand(2 * k(j, i), k(i, j)) = 1;
                h.expand(2 * k(j, i) + 1, k(j, i)) = 1;
            }
        }
    }
    return h;
}

namespace {

ComplexMatrix lifted_operation(const SuperOp &op) {
    const Eigen::Index n = op.kraus.front().rows();
    ComplexMatrix out = ComplexMatrix::Zero(n * n, n * n);
    for (const auto &e : op.kraus) {
        out += kron(e, e.conjugate());
    }
    return out;
}

}  // namespace

Gfa rtqfa_to_gfa_uncompressed(const RtQfa &m) {
    require(check_machine(m), "RT-QFA");
    const size_t n = m.state_count;

    ComplexMatrix rho1 = m.operations[Alphabet::cent()].apply(DensityMatrix::basis_state(n, m.initial).matrix());
    ComplexVector v0 = vec(rho1);
    ComplexMatrix projector = ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (size_t q = 0; q < n; ++q) {
        if (m.accepting[q]) {
            projector(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q)) = 1;
        }
    }
    ComplexMatrix f = vec(projector).transpose() * lifted_operation(m.operations[m.alphabet.dollar()]);

    Gfa g;
    g.state_count = 2 * n * n;
    g.alphabet = m.alphabet;
    g.initial = encode_real_pairs(v0).col(0);
    g.final = encode_real_pairs(f).row(0).transpose();
    for (size_t k = 0; k < m.alphabet.size(); ++k) {
        g.transitions.push_back(encode_real_pairs(lifted_operation(m.operations[k + 1])));
    }
    return g;
}

Gfa rtqfa_to_gfa(const RtQfa &m) {
    Gfa wide = rtqfa_to_gfa_uncompressed(m);
    HermitianCompression h = hermitian_compression(m.state_count);
    Gfa g;
    g.state_count = m.state_count * m.state_count;
    g.alphabet = m.alphabet;
    g.initial = h.compress * wide.initial;
    g.final = (wide.final.transpose() * h.expand).transpose();
    for (const RealMatrix &a : wide.transitions) {
        g.transitions.push_back(h.compress * a * h.expand);
    }
    return g;
}

namespace {

RealMatrix padded_matrix(const RtPfa &p, size_t s) {
    const auto n = static_cast<Eigen::Index>(p.state_count);
    RealMatrix a = RealMatrix::Zero(n + 2, n + 2);
    a.topLeftCorner(n, n) = p.transitions[s];
    a(n, n) = 1;
    a(n + 1, n + 1) = 1;
    if (s != p.alphabet.dollar()) {
        return a;
    }
    // Collapse the final distribution onto the accept/reject pair.
    RealMatrix collapse = RealMatrix::Zero(n + 2, n + 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        collapse(p.accepting[static_cast<size_t>(i)] ? n : n + 1, i) = 1;
    }
    collapse(n, n) = 1;
    collapse(n + 1, n + 1) = 1;
    return collapse * a;
}

// Upper triangular B with the columns of [a; B] pairwise orthogonal and of
// length `scale`.
RealMatrix orthogonalizing_block(const RealMatrix &a, double scale, EmbeddingLoopTrace &trace) {
    const Eigen::Index d = a.cols();
    RealMatrix b = RealMatrix::Zero(d, d);
    auto column_dot = [&](Eigen::Index x, Eigen::Index y) { return a.col(x).dot(a.col(y)) + b.col(x).dot(b.col(y)); };
    for (Eigen::Index i = 0; i < d; ++i) {
        const double len = std::sqrt(column_dot(i, i));
        trace.column_lengths.push_back(len);
        if (len >= scale) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "column " << i << " has length " << len << " >= scale factor " << scale;
            throw ConstructionError(msg.str());
        }
        b(i, i) = -std::sqrt(scale * scale - len * len);
        trace.diagonal.push_back(b(i, i));
        for (Eigen::Index j = i + 1; j < d; ++j) {
            // Row i is the only one still free in both columns; b(i,j) is forced.
            b(i, j) = column_dot(i, j) / std::abs(b(i, i));
            trace.off_diagonal.push_back(b(i, j));
        }
    }
    return b;
}

}  // namespace

RtPfaEmbedding rtpfa_to_rtkwqfa(const RtPfa &p) {
    require(check_machine(p), "RT-PFA");
    const size_t n = p.state_count;
    const auto d = static_cast<Eigen::Index>(n + 2);
    const double scale = 2.0 * static_cast<double>(n) + 7.0;

    RtPfaEmbedding out;
    out.scale = scale;
    RtKwqfa &m = out.machine;
    m.state_count = 3 * n + 6;
    m.alphabet = p.alphabet;
    m.initial = p.initial;
    for (size_t q = 0; q < m.state_count; ++q) {
        m.state_names.push_back("r" + std::to_string(q + 1));
        if (q < n) {
            m.kinds.push_back(StateKind::nonhalting);
        } else if (q == n) {
            m.kinds.push_back(StateKind::accepting);
        } else if (q == n + 1) {
            m.kinds.push_back(StateKind::rejecting);
        } else if (q < 2 * n + 4) {
            m.kinds.push_back(StateKind::accepting);
        } else {
            m.kinds.push_back(StateKind::rejecting);
        }
    }

    for (size_t s = 0; s < p.alphabet.tape_size(); ++s) {
        RealMatrix a = padded_matrix(p, s);
        EmbeddingLoopTrace trace;
        RealMatrix b = orthogonalizing_block(a, scale, trace);
        ComplexMatrix given(3 * d, d);
        given.topRows(d) = (a / scale).cast<Complex>();
        given.middleRows(d, d) = (b / (std::sqrt(2.0) * scale)).cast<Complex>();
        given.bottomRows(d) = (b / (std::sqrt(2.0) * scale)).cast<Complex>();
        m.unitaries.push_back(complete_to_unitary(given));
        out.padded.push_back(std::move(a));
        out.blocks.push_back(std::move(b));
        out.loops.push_back(std::move(trace));
    }
    return out;
}

RtQfa rtpfa_to_rtqfa(const RtPfa &p) {
    require(check_machine(p), "RT-PFA");
    const auto n = static_cast<Eigen::Index>(p.state_count);
    RtQfa m;
    m.state_count = p.state_count;
    m.alphabet = p.alphabet;
    m.initial = p.initial;
    m.accepting = p.accepting;
    m.state_names = p.state_names;
    for (const RealMatrix &a : p.transitions) {
        SuperOp op;
        for (Eigen::Index k = 0; k < n; ++k) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (a(j, k) > 0) {
                    ComplexMatrix e = ComplexMatrix::Zero(n, n);
                    e(j, k) = std::sqrt(a(j, k));
                    op.kraus.push_back(std::move(e));
                }
            }
        }
        m.operations.push_back(std::move(op));
    }
    return m;
}

RtKwqfa equiprobable_union(const RtKwqfa &m1, const RtKwqfa &m2) {
    if (!(m1.alphabet == m2.alphabet)) {
        throw InputError("union requires identical alphabets, got {" + m1.alphabet.letters() + "} and {" +
                         m2.alphabet.letters() + "}");
    }
    require(check_machine(m1), "first union operand");
    require(check_machine(m2), "second union operand");
    const auto n1 = static_cast<Eigen::Index>(m1.state_count);
    const auto n2 = static_cast<Eigen::Index>(m2.state_count);
    const Eigen::Index n = 1 + n1 + n2;

    RtKwqfa m;
    m.state_count = static_cast<size_t>(n);
    m.alphabet = m1.alphabet;
    m.initial = 0;
    m.kinds.push_back(StateKind::nonhalting);
    m.state_names.push_back("start");
    for (size_t q = 0; q < m1.state_count; ++q) {
        m.kinds.push_back(m1.kinds[q]);
        m.state_names.push_back("m1." + (q < m1.state_names.size() ? m1.state_names[q] : std::to_string(q)));
    }
    for (size_t q = 0; q < m2.state_count; ++q) {
        m.kinds.push_back(m2.kinds[q]);
        m.state_names.push_back("m2." + (q < m2.state_names.size() ? m2.state_names[q] : std::to_string(q)));
    }

    for (size_t s = 0; s < m1.alphabet.tape_size(); ++s) {
        if (s == Alphabet::cent()) {
            // Only the fresh start state ever reads the left end-marker.
            ComplexMatrix partial = ComplexMatrix::Zero(n, n);
            const double h = 1.0 / std::sqrt(2.0);
            partial.col(0).segment(1, n1) = h * m1.unitaries[s].col(static_cast<Eigen::Index>(m1.initial));
            partial.col(0).segment(1 + n1, n2) = h * m2.unitaries[s].col(static_cast<Eigen::Index>(m2.initial));
            std::vector<bool> specified(static_cast<size_t>(n), false);
            specified[0] = true;
            m.unitaries.push_back(complete_partial_unitary(partial, specified));
        } else {
            ComplexMatrix u = ComplexMatrix::Zero(n, n);
            u(0, 0) = 1;
            u.block(1, 1, n1, n1) = m1.unitaries[s];
            u.block(1 + n1, 1 + n1, n2, n2) = m2.unitaries[s];
            m.unitaries.push_back(std::move(u));
        }
    }
    return m;
}

}  // namespace qfa
