#pragma once

#include "retime/graph.hpp"

namespace retime {

/// Undersampling rate. u = 1 means every causal timestep is observed.
struct Rate {
  int value = 1;

  Rate() = default;
  explicit Rate(int v);
};

/// Forward undersampling operator.
///
/// The observed graph at rate u has a directed edge i -> j exactly when the
/// causal-timescale graph has a walk of length u from i to j, and a
/// bidirected pair {i, j} exactly when some node reaches both i and j by
/// walks of one common length l with 1 <= l <= u-1.
MixedGraph undersample(const DirectedGraph& g, Rate u);

/// Same operator on a raw adjacency matrix (solver hot path).
/// `parallel` gates the OpenMP row kernels; matters only for large n.
MixedGraph undersample_bits(const BitMatrix& adj, int u, bool parallel = true);

/// Independent verification oracle: explicit walk enumeration over
/// adjacency lists, sharing no code with the matrix-power implementation.
/// Limited to n <= 8, u <= 6.
MixedGraph undersample_oracle(const DirectedGraph& g, Rate u);

}  // namespace retime
