#pragma once

#include "retime/solver.hpp"

namespace retime {

/// Weights used when enriching a first-order method's output graph.
/// Two-cycle directed edges get a low weight to encode uncertainty about
/// which direction is real.
struct EnrichmentPolicy {
  long long w_bidirected = 10;
  long long w_twocycle_directed = 2;
  long long w_directed = 5;
  long long w_absent = 10;

  void validate() const;
};

/// Turn a plain directed graph from a first-order method into a weighted
/// hypothesis: every length-2 loop {i->j, j->i} gains a bidirected pair and
/// has both directions reweighted low; all input edges are kept.
WeightedHypothesis enrich(const DirectedGraph& first_order, const EnrichmentPolicy& policy);

/// enrich followed by solve; no hidden state.
SolutionSet meta_solve(const DirectedGraph& first_order, const EnrichmentPolicy& policy,
                       const SolverConfig& cfg);

}  // namespace retime
