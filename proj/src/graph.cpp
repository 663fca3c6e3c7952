#include "retime/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace retime {

DirectedGraph::DirectedGraph(int node_count) : n(node_count), adj(node_count) {
  if (node_count < 1) throw std::invalid_argument("graph needs at least one node");
}

void DirectedGraph::add_edge(int i, int j) {
  if (i < 0 || i >= n || j < 0 || j >= n)
    throw std::out_of_range("edge endpoint out of range");
  adj.set(i, j);
}

MixedGraph::MixedGraph(int node_count)
    : n(node_count), directed(node_count), bidirected(node_count) {
  if (node_count < 1) throw std::invalid_argument("graph needs at least one node");
}

void MixedGraph::add_bidirected(int i, int j) {
  if (i == j) throw std::invalid_argument("bidirected self-pair is not allowed");
  bidirected.set(i, j);
  bidirected.set(j, i);
}

std::vector<std::pair<int, int>> MixedGraph::bidirected_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i)
    bidirected.for_each_set_in_row(i, [&](int j) {
      if (i < j) out.emplace_back(i, j);
    });
  return out;
}

bool SccInfo::has_condensation_edge(int k, int l) const {
  return std::binary_search(condensation.begin(), condensation.end(),
                            std::make_pair(k, l));
}

namespace {

// Tarjan's algorithm. Components are emitted in reverse topological order
// of the condensation, so ids are renumbered afterwards.
struct TarjanState {
  const DirectedGraph& g;
  std::vector<int> index, lowlink, on_stack_pos;
  std::vector<int> stack;
  std::vector<std::vector<int>> components;
  int next_index = 0;

  explicit TarjanState(const DirectedGraph& graph)
      : g(graph), index(graph.n, -1), lowlink(graph.n, -1), on_stack_pos(graph.n, -1) {}

  void dfs(int v) {
    index[v] = lowlink[v] = next_index++;
    on_stack_pos[v] = static_cast<int>(stack.size());
    stack.push_back(v);

    g.adj.for_each_set_in_row(v, [&](int w) {
      if (index[w] == -1) {
        dfs(w);
        lowlink[v] = std::min(lowlink[v], lowlink[w]);
      } else if (on_stack_pos[w] != -1) {
        lowlink[v] = std::min(lowlink[v], index[w]);
      }
    });

    if (lowlink[v] == index[v]) {
      std::vector<int> comp(stack.begin() + on_stack_pos[v], stack.end());
      for (int u : comp) on_stack_pos[u] = -1;
      stack.resize(stack.size() - comp.size());
      components.push_back(std::move(comp));
    }
  }
};

}  // namespace

SccInfo scc_decompose(const DirectedGraph& g) {
  TarjanState t(g);
  for (int v = 0; v < g.n; ++v)
    if (t.index[v] == -1) t.dfs(v);

  const int num = static_cast<int>(t.components.size());
  SccInfo info;
  info.component.assign(g.n, -1);
  info.sizes.assign(num, 0);
  // Tarjan finishes sinks first; flipping the order makes ids topological.
  for (int c = 0; c < num; ++c) {
    const int id = num - 1 - c;
    for (int v : t.components[c]) info.component[v] = id;
    info.sizes[id] = static_cast<int>(t.components[c].size());
  }

  g.adj.for_each_set([&](int i, int j) {
    const int k = info.component[i], l = info.component[j];
    if (k != l) info.condensation.emplace_back(k, l);
  });
  std::sort(info.condensation.begin(), info.condensation.end());
  info.condensation.erase(
      std::unique(info.condensation.begin(), info.condensation.end()),
      info.condensation.end());
  return info;
}

}  // namespace retime
