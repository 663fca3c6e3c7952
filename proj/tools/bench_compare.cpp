// Compares the OpenMP kernels against their serial counterparts:
// the matrix-power undersampling operator, the solver worker fan-out,
// and the benchmark-harness trial loop.

#include <chrono>
#include <cstdio>
#include <omp.h>

#include "retime/simbench.hpp"
#include "retime/solver.hpp"
#include "retime/undersample.hpp"

using namespace retime;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void bench_undersample() {
  std::printf("undersample kernel (boolean matrix powers, u=4)\n");
  std::printf("%8s %12s %12s %8s\n", "n", "serial[s]", "openmp[s]", "speedup");
  for (int n : {128, 256, 512}) {
    const auto g = random_graph(n, 0.02, 7);
    const int reps = n <= 256 ? 20 : 5;

    auto start = std::chrono::steady_clock::now();
    MixedGraph serial_result(1);
    for (int r = 0; r < reps; ++r) serial_result = undersample_bits(g.adj, 4, false);
    const double t_serial = seconds_since(start) / reps;

    start = std::chrono::steady_clock::now();
    MixedGraph parallel_result(1);
    for (int r = 0; r < reps; ++r) parallel_result = undersample_bits(g.adj, 4, true);
    const double t_parallel = seconds_since(start) / reps;

    if (!(serial_result == parallel_result)) {
      std::printf("MISMATCH at n=%d\n", n);
      continue;
    }
    std::printf("%8d %12.5f %12.5f %7.2fx\n", n, t_serial, t_parallel, t_serial / t_parallel);
  }
}

void bench_solver() {
  std::printf("\nsolver worker fan-out (round-trip instances, n=6, u=2)\n");
  std::printf("%8s %12s %8s\n", "workers", "total[s]", "speedup");
  std::vector<WeightedHypothesis> instances;
  for (int trial = 0; trial < 6; ++trial) {
    const auto g = random_graph(6, 0.2, 4000 + trial);
    instances.push_back(WeightedHypothesis::uniform(undersample(g, Rate(2))));
  }

  double t_one = 0;
  for (int workers : {1, 2, omp_get_max_threads()}) {
    SolverConfig cfg;
    cfg.max_u = 3;
    cfg.workers = workers;
    const auto start = std::chrono::steady_clock::now();
    long long total_solutions = 0;
    for (const auto& hyp : instances) total_solutions += solve(hyp, cfg).solutions.size();
    const double t = seconds_since(start);
    if (workers == 1) t_one = t;
    std::printf("%8d %12.3f %7.2fx   (%lld solutions)\n", workers, t, t_one / t,
                total_solutions);
  }
}

void bench_trials() {
  std::printf("\nbenchmark harness trial loop (edge-break, n=5, u=2, 16 trials)\n");
  std::printf("%8s %12s %8s\n", "workers", "total[s]", "speedup");
  SolverConfig cfg;
  cfg.max_u = 3;
  double t_one = 0;
  for (int workers : {1, 2, omp_get_max_threads()}) {
    const auto start = std::chrono::steady_clock::now();
    const auto csv = edge_break_csv(5, 0.25, 2, 16, 99, cfg, workers);
    const double t = seconds_since(start);
    if (workers == 1) t_one = t;
    std::printf("%8d %12.3f %7.2fx   (%zu bytes)\n", workers, t, t_one / t, csv.size());
  }
}

}  // namespace

int main() {
  std::printf("hardware threads: %d\n\n", omp_get_max_threads());
  bench_undersample();
  bench_solver();
  bench_trials();
  return 0;
}
