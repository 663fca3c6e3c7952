#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "retime/objective.hpp"

namespace retime {

enum class OptVariant { Opt, OptN, Enum };

/// Search mode, mirroring the external solver's --opt-mode vocabulary.
///   Opt      — one optimal solution.
///   OptN     — all optimal solutions; an optional bound seeds the search.
///   Enum(b)  — every solution with total cost <= b.
/// `cap` limits the number of enumerated solutions (0 = unlimited).
struct OptMode {
  OptVariant variant = OptVariant::OptN;
  std::optional<long long> bound;
  long long cap = 0;

  static OptMode opt() { return {OptVariant::Opt, std::nullopt, 0}; }
  static OptMode optn(std::optional<long long> bound = std::nullopt, long long cap = 0) {
    return {OptVariant::OptN, bound, cap};
  }
  static OptMode enumerate(long long bound, long long cap = 0) {
    return {OptVariant::Enum, bound, cap};
  }
};

struct SolverConfig {
  int max_u = 20;
  OptMode mode;
  std::optional<DensityBand> band;  // unset = inactive band
  Priority priority = Priority::Lex;
  bool strict_density = false;      // any band violation is infeasible
  std::optional<SccInfo> scc_constraint;
  int workers = 1;
  /// Per-subproblem node budget (0 = unlimited). When hit, the result is
  /// flagged incomplete instead of blocking; intended for benchmark runs.
  long long node_limit = 0;
};

struct Solution {
  DirectedGraph graph;
  int u = 1;
  CostVector cost;
};

struct SolutionSet {
  std::vector<Solution> solutions;  // canonically sorted by (u, adjacency)
  std::optional<CostVector> optimum;
  bool complete = true;
  long long nodes_visited = 0;
};

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact inverse search: enumerate the (graph, u) pairs minimizing the
/// cost vector over u = 1..max_u, per the configured mode. The returned
/// set is identical for every worker count.
SolutionSet solve(const WeightedHypothesis& hyp, const SolverConfig& cfg);

/// Independent oracle: exhaustive enumeration of every (graph, u) pair.
/// Limited to n <= 4 and max_u <= 4; shares no search code with solve().
SolutionSet solve_bruteforce(const WeightedHypothesis& hyp, const SolverConfig& cfg);

/// Three-valued edge assignment: decided bits of `decided` are fixed to
/// the value in `decided_in`; the rest are undecided.
struct PartialAssignment {
  int n = 0;
  BitMatrix decided_in;
  BitMatrix decided;

  explicit PartialAssignment(int n_) : n(n_), decided_in(n_), decided(n_) {}
};

/// Admissible bound: componentwise <= the cost of every completion of the
/// partial assignment at rate u. Built from the monotonicity of the
/// undersampling operator. Equals cost() exactly on full assignments.
CostVector lower_bound(const PartialAssignment& partial, Rate u,
                       const WeightedHypothesis& hyp, const DensityBand& band);

/// Canonical solution order: (u, adjacency rows lexicographically).
bool solution_order(const Solution& a, const Solution& b);

/// Text form used by the CLI and the determinism checks.
std::string format_solution_set(const SolutionSet& s);

}  // namespace retime
