#include "retime/undersample.hpp"

#include <stdexcept>

namespace retime {

Rate::Rate(int v) : value(v) {
  if (v < 1) throw std::invalid_argument("undersampling rate must be >= 1");
}

MixedGraph undersample_bits(const BitMatrix& adj, int u, bool parallel) {
  const int n = adj.size();
  MixedGraph out(n);

  // power = A^l, built incrementally; bidirected accumulates
  // (A^l)^T A^l for l = 1..u-1.
  BitMatrix power = adj;
  for (int l = 1; l < u; ++l) {
    out.bidirected.or_with(bit_multiply(bit_transpose(power), power, parallel));
    power = bit_multiply(power, adj, parallel);
  }
  out.directed = power;
  out.bidirected.clear_diagonal();
  return out;
}

MixedGraph undersample(const DirectedGraph& g, Rate u) {
  return undersample_bits(g.adj, u.value);
}

MixedGraph undersample_oracle(const DirectedGraph& g, Rate u) {
  if (g.n > 8 || u.value > 6)
    throw std::invalid_argument("oracle limits exceeded (n <= 8, u <= 6)");

  std::vector<std::vector<int>> succ(g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      if (g.adj.get(i, j)) succ[i].push_back(j);

  // reach[l][k] = nodes reachable from k by walks of exactly length l.
  std::vector<std::vector<std::vector<bool>>> reach(
      u.value + 1, std::vector<std::vector<bool>>(g.n, std::vector<bool>(g.n, false)));
  for (int k = 0; k < g.n; ++k) reach[0][k][k] = true;
  for (int l = 1; l <= u.value; ++l)
    for (int k = 0; k < g.n; ++k)
      for (int m = 0; m < g.n; ++m)
        if (reach[l - 1][k][m])
          for (int j : succ[m]) reach[l][k][j] = true;

  MixedGraph out(g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      if (reach[u.value][i][j]) out.add_directed(i, j);

  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j)
      for (int l = 1; l <= u.value - 1 && !out.has_bidirected(i, j); ++l)
        for (int k = 0; k < g.n; ++k)
          if (reach[l][k][i] && reach[l][k][j]) {
            out.add_bidirected(i, j);
            break;
          }
  return out;
}

}  // namespace retime
