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

// Machine-to-machine reductions between the probabilistic and quantum models.

#pragma once

#include <vector>

#include "qfalab/classical.hpp"
#include "qfalab/linalg.hpp"
#include "qfalab/quantum_rt.hpp"

namespace qfa {

/// Replaces every complex entry a+bi by the real block [[a, b], [-b, a]].
/// The map is an algebra homomorphism from complex to real matrices.
RealMatrix encode_real_pairs(const ComplexMatrix &m);

/// Converts between the 2n^2 real-pair form of vec(rho) (first column of the
/// encoding) and n^2 real coordinates of a hermitian rho: diagonal entries,
/// then Re rho[i,j] at (i, j) and Im rho[i,j] at (j, i) for i < j.
struct HermitianCompression {
    /// n^2 x 2n^2 with entries in {-1, 0, 1}.
    RealMatrix compress;
    /// 2n^2 x n^2.
    RealMatrix expand;
};

HermitianCompression hermitian_compression(size_t n);

/// Linearized GFA with 2n^2 states, before the hermitian compression.
Gfa rtqfa_to_gfa_uncompressed(const RtQfa &m);

/// GFA with exactly n^2 states and the same acceptance value on every word.
/// Throws WellformednessError on a malformed input machine.
Gfa rtqfa_to_gfa(const RtQfa &m);

/// Record of one run of the column-orthogonalization loop for one symbol.
struct EmbeddingLoopTrace {
    /// Column length before its diagonal entry was set, per column.
    std::vector<double> column_lengths;
    /// The diagonal entries b_{i,i}, per column.
    std::vector<double> diagonal;
    /// Every off-diagonal entry b_{i,j}, i < j, in the order they were set.
    std::vector<double> off_diagonal;
};

struct RtPfaEmbedding {
    RtKwqfa machine;
    /// Scaling factor, 2n + 7.
    double scale = 0;
    /// The (n+2) x (n+2) padded stochastic matrices, per tape symbol.
    std::vector<RealMatrix> padded;
    /// The upper triangular orthogonalizing blocks, per tape symbol.
    std::vector<RealMatrix> blocks;
    std::vector<EmbeddingLoopTrace> loops;
};

/// Embeds an n-state RT-PFA in a (3n+6)-state RT-KWQFA that accepts with
/// probability above (at least) 1/2 exactly when the RT-PFA does. States
/// 0..n-1 mirror the RT-PFA, n accepts, n+1 rejects, then n+2 accepting and
/// n+2 rejecting twins.
/// Throws ConstructionError if a column grows past the scale factor.
RtPfaEmbedding rtpfa_to_rtkwqfa(const RtPfa &p);

/// Exact RT-QFA simulation: one Kraus element sqrt(A[j,k]) |j><k| per
/// positive entry of each transition matrix.
RtQfa rtpfa_to_rtqfa(const RtPfa &p);

/// Runs m1 and m2 with probability 1/2 each from a fresh start state, so the
/// acceptance probability is the average of the two.
/// Throws InputError if the alphabets differ.
RtKwqfa equiprobable_union(const RtKwqfa &m1, const RtKwqfa &m2);

}  // namespace qfa
