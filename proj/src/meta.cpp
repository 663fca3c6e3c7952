#include "retime/meta.hpp"

#include <stdexcept>

namespace retime {

void EnrichmentPolicy::validate() const {
  if (w_bidirected < 1 || w_twocycle_directed < 1 || w_directed < 1 || w_absent < 1)
    throw std::invalid_argument("enrichment weights must be positive integers");
  if (w_twocycle_directed >= w_directed)
    throw std::invalid_argument("two-cycle directed weight must be below the ordinary one");
}

WeightedHypothesis enrich(const DirectedGraph& first_order, const EnrichmentPolicy& policy) {
  policy.validate();
  const int n = first_order.n;
  MixedGraph h(n);
  h.directed = first_order.adj;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (first_order.has_edge(i, j) && first_order.has_edge(j, i)) h.add_bidirected(i, j);

  WeightedHypothesis out(h);
  h.directed.for_each_set([&](int i, int j) {
    const bool two_cycle = i != j && h.directed.get(j, i);
    out.w_directed.at(i, j) = two_cycle ? policy.w_twocycle_directed : policy.w_directed;
  });
  h.bidirected.for_each_set([&](int i, int j) {
    out.w_bidirected.at(i, j) = policy.w_bidirected;
  });
  out.wa_directed = policy.w_absent;
  out.wa_bidirected = policy.w_absent;
  return out;
}

SolutionSet meta_solve(const DirectedGraph& first_order, const EnrichmentPolicy& policy,
                       const SolverConfig& cfg) {
  return solve(enrich(first_order, policy), cfg);
}

}  // namespace retime
