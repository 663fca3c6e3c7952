#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "retime/solver.hpp"

namespace retime {

/// Normalized omission/commission per edge kind, plus directed-edge F1.
struct ErrorReport {
  double omission_d = 0.0;
  double commission_d = 0.0;
  double omission_b = 0.0;
  double commission_b = 0.0;
  double f1 = 1.0;

  double total() const { return omission_d + commission_d + omission_b + commission_b; }
};

ErrorReport error_report(const MixedGraph& estimate, const MixedGraph& truth);

/// Errors of one chosen solution under the three reporting conventions:
/// against the undersampled ground truth, against the hypothesis, and
/// against the rate-1 ground truth.
struct ThreeWayReport {
  ErrorReport vs_gt_u;
  ErrorReport vs_h;
  ErrorReport vs_gt1;
};

/// Each directed slot drawn independently with probability `density`.
DirectedGraph random_graph(int n, double density, std::uint64_t seed);

struct EdgeBreakResult {
  bool skipped = false;        // undersampled graph had no edge to delete
  CostVector optimal_cost;     // optimum of the solve on the broken graph
  long long deleted_weight = 1;
  int class_size = 0;
  bool complete = true;
  ErrorReport best_gt1;        // class member closest to the rate-1 ground truth
  ErrorReport blind;           // first member in canonical order (cost-only pick)
  ErrorReport naive;           // hypothesis' directed part taken as the answer
};

/// Generate a graph, undersample it, delete one edge uniformly at random,
/// solve, and score the recovered rate-1 graphs against the ground truth.
/// Runs with flat priority: the optimal cost then never exceeds the
/// deleted edge's weight, since the ground truth attains exactly that.
EdgeBreakResult edge_break_trial(int n, double density, int u, std::uint64_t seed,
                                 const SolverConfig& cfg);

/// Linear dynamic system x_t = A x_{t-1} + noise on a graph's support.
struct VarSystem {
  DoubleMatrix coefficients;
  double noise_std = 1.0;
  int length = 0;
};

/// Coefficients drawn on g's support with magnitudes in [0.1, 0.9] and
/// random sign; rescaled to spectral radius 0.95 when it would exceed it.
VarSystem make_var_system(const DirectedGraph& g, double noise_std, int length,
                          std::uint64_t seed);

double spectral_radius(const DoubleMatrix& a);

/// Row-major n x length sample matrix.
struct Series {
  int n = 0;
  int length = 0;
  std::vector<double> values;

  double at(int node, int t) const { return values[static_cast<std::size_t>(node) * length + t]; }
  double& at(int node, int t) { return values[static_cast<std::size_t>(node) * length + t]; }
};

/// Simulate after a 200-sample burn-in from a zero initial state.
Series var_simulate(const DirectedGraph& g, double noise_std, int length, std::uint64_t seed);

/// Subsample by stride u, regress x_t on x_{t-1}, threshold coefficients
/// for directed edges and residual correlations for bidirected pairs.
MixedGraph estimate_h(const Series& series, Rate u, double threshold_d, double threshold_b);

enum class SelectionCriterion { VsGtU = 0, VsH = 1, VsGt1 = 2 };

struct VarTrialResult {
  // Indexed by SelectionCriterion: report for the class member minimizing
  // that criterion (ties broken by rate-1 error, then canonical order).
  std::array<ThreeWayReport, 3> by_criterion;
  CostVector optimal_cost;
  int class_size = 0;
  bool complete = true;
};

struct VarBenchOptions {
  double noise_std = 0.1;
  int length = 2000;
  double threshold_d = 0.1;
  double threshold_b = 0.2;
  /// Skip simulation and estimation; use the exact undersampled graph.
  bool noiseless = false;
  /// Derive the SCC constraint from each trial's estimated hypothesis.
  bool scc_auto = false;
};

VarTrialResult var_benchmark(int n, double density, int u, const VarBenchOptions& opt,
                             const SolverConfig& cfg, std::uint64_t seed);

const char* criterion_name(SelectionCriterion c);

/// Batch runners behind the bench-* CLI subcommands. Trials run in
/// parallel; rows come out sorted by trial index, so the bytes do not
/// depend on `trial_workers`. Columns:
///   trial,u,cost,omission_d,commission_d,omission_b,commission_b,f1,criterion
std::string edge_break_csv(int n, double density, int u, int trials, std::uint64_t seed,
                           const SolverConfig& cfg, int trial_workers);
std::string var_bench_csv(int n, double density, int u, int trials, std::uint64_t seed,
                          const VarBenchOptions& opt, const SolverConfig& cfg,
                          int trial_workers);

}  // namespace retime
