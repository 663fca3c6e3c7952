#pragma once

#include <utility>
#include <vector>

#include "retime/bitmatrix.hpp"

namespace retime {

/// Directed graph over nodes 0..n-1 (1-based only at the I/O boundary).
/// Self-loops are allowed.
struct DirectedGraph {
  int n = 0;
  BitMatrix adj;

  DirectedGraph() = default;
  explicit DirectedGraph(int node_count);

  void add_edge(int i, int j);
  bool has_edge(int i, int j) const { return adj.get(i, j); }
  int edge_count() const { return adj.count(); }

  bool operator==(const DirectedGraph&) const = default;
};

/// Graph with directed edges and unordered bidirected pairs.
/// The bidirected relation is stored as a symmetric matrix with an empty
/// diagonal; pair views always report i < j once.
struct MixedGraph {
  int n = 0;
  BitMatrix directed;
  BitMatrix bidirected;

  MixedGraph() = default;
  explicit MixedGraph(int node_count);

  void add_directed(int i, int j) { directed.set(i, j); }
  void add_bidirected(int i, int j);
  bool has_bidirected(int i, int j) const { return bidirected.get(i, j); }

  std::vector<std::pair<int, int>> bidirected_pairs() const;
  int bidirected_count() const { return bidirected.count() / 2; }

  bool operator==(const MixedGraph&) const = default;
};

/// Strongly-connected-component decomposition.
/// Component ids are assigned in topological order of the condensation,
/// so every condensation edge (k, l) has k < l.
struct SccInfo {
  std::vector<int> component;                    // node -> component id
  std::vector<int> sizes;                        // component id -> member count
  std::vector<std::pair<int, int>> condensation; // sorted, deduplicated

  int component_count() const { return static_cast<int>(sizes.size()); }
  bool has_condensation_edge(int k, int l) const;
};

SccInfo scc_decompose(const DirectedGraph& g);

}  // namespace retime
