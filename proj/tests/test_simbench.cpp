#include <doctest.h>

#include <cmath>
#include <sstream>

#include "retime/simbench.hpp"

using namespace retime;

namespace {

MixedGraph mixed(int n, std::initializer_list<std::pair<int, int>> directed_1based) {
  MixedGraph m(n);
  for (auto [i, j] : directed_1based) m.add_directed(i - 1, j - 1);
  return m;
}

int count_lines(const std::string& s) {
  int c = 0;
  for (char ch : s)
    if (ch == '\n') ++c;
  return c;
}

}  // namespace

TEST_CASE("identical graphs report zero error and perfect f1") {
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = random_graph(2 + trial % 5, 0.4, 100 + trial);
    const auto m = undersample(g, Rate(1 + trial % 3));
    const auto e = error_report(m, m);
    CHECK(e.omission_d == 0.0);
    CHECK(e.commission_d == 0.0);
    CHECK(e.omission_b == 0.0);
    CHECK(e.commission_b == 0.0);
    CHECK(e.f1 == 1.0);
  }
}

TEST_CASE("omission is the missed fraction of truth edges") {
  const auto truth = mixed(3, {{1, 2}, {2, 3}});
  const auto estimate = mixed(3, {{1, 2}});
  const auto e = error_report(estimate, truth);
  CHECK(e.omission_d == doctest::Approx(0.5));
  CHECK(e.commission_d == 0.0);
  CHECK(e.f1 == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("commission saturates when everything spurious is asserted") {
  MixedGraph estimate(2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) estimate.add_directed(i, j);
  const auto e = error_report(estimate, MixedGraph(2));
  CHECK(e.commission_d == 1.0);
  CHECK(e.omission_d == 0.0);
  CHECK(e.f1 == 0.0);
}

TEST_CASE("random graphs are seeded and density-faithful") {
  CHECK(random_graph(4, 1.0, 3).edge_count() == 16);  // includes self-loops
  CHECK(random_graph(5, 1e-12, 3).edge_count() == 0);
  CHECK(random_graph(6, 0.3, 42) == random_graph(6, 0.3, 42));
  CHECK(random_graph(6, 0.3, 42).edge_count() != random_graph(6, 0.3, 43).edge_count());
}

TEST_CASE("edge-break trials stay within the deleted edge's weight") {
  SolverConfig cfg;
  cfg.max_u = 3;
  int ran = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto r = edge_break_trial(5, 0.25, 2 + trial % 2, 7000 + trial, cfg);
    if (r.skipped) continue;
    ++ran;
    CHECK(r.optimal_cost.total() <= r.deleted_weight);
    CHECK(r.class_size >= 1);
  }
  CHECK(ran > 0);

  const auto a = edge_break_trial(5, 0.25, 2, 7001, cfg);
  const auto b = edge_break_trial(5, 0.25, 2, 7001, cfg);
  CHECK(a.skipped == b.skipped);
  CHECK(a.optimal_cost == b.optimal_cost);
  CHECK(a.best_gt1.total() == b.best_gt1.total());
}

TEST_CASE("var systems stay strictly stable") {
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_graph(4 + trial % 4, 0.5, 8100 + trial);
    const auto sys = make_var_system(g, 0.1, 100, 8100 + trial);
    CHECK(spectral_radius(sys.coefficients) < 0.95 + 1e-9);
  }
}

TEST_CASE("zero noise from a zero state stays identically zero") {
  const auto g = random_graph(3, 0.5, 5);
  const auto series = var_simulate(g, 0.0, 50, 5);
  for (int i = 0; i < series.n; ++i)
    for (int t = 0; t < series.length; ++t) CHECK(series.at(i, t) == 0.0);
}

TEST_CASE("one-node self-loop matches the closed-form ar(1) autocovariance") {
  DirectedGraph g(1);
  g.add_edge(0, 0);
  const double sigma = 0.7;
  const int length = 100000;
  const std::uint64_t seed = 99;

  const auto sys = make_var_system(g, sigma, length, seed);
  const double a = sys.coefficients.at(0, 0);
  REQUIRE(std::abs(a) >= 0.1);

  const auto series = var_simulate(g, sigma, length, seed);
  double mean = 0.0;
  for (int t = 0; t < length; ++t) mean += series.at(0, t);
  mean /= length;
  double autocov = 0.0;
  for (int t = 1; t < length; ++t)
    autocov += (series.at(0, t) - mean) * (series.at(0, t - 1) - mean);
  autocov /= (length - 1);

  const double expected = a * sigma * sigma / (1.0 - a * a);
  CHECK(autocov == doctest::Approx(expected).epsilon(0.10));
}

TEST_CASE("estimation recovers the support of a stable system at u=1") {
  const auto g = random_graph(4, 0.3, 314);
  REQUIRE(g.edge_count() > 0);
  const auto series = var_simulate(g, 1e-6, 100000, 314);
  const auto h = estimate_h(series, Rate(1), 0.05, 0.2);
  CHECK(h.directed == g.adj);
}

TEST_CASE("thresholds above every coefficient give an empty estimate") {
  const auto g = random_graph(3, 0.5, 11);
  const auto series = var_simulate(g, 0.05, 2000, 11);
  const auto h = estimate_h(series, Rate(1), 1.0, 1.0);
  CHECK(!h.directed.any());
  CHECK(!h.bidirected.any());
}

TEST_CASE("estimation demands enough subsampled data") {
  Series tiny;
  tiny.n = 4;
  tiny.length = 30;
  tiny.values.assign(4 * 30, 0.0);
  CHECK_THROWS_AS(estimate_h(tiny, Rate(1), 0.1, 0.2), std::invalid_argument);
}

TEST_CASE("noiseless var benchmark reports zero everywhere") {
  SolverConfig cfg;
  cfg.max_u = 3;
  VarBenchOptions opt;
  opt.noiseless = true;
  for (int seed = 0; seed < 5; ++seed) {
    const auto r = var_benchmark(5, 0.25, 2, opt, cfg, 900 + seed);
    REQUIRE(r.class_size >= 1);
    CHECK(r.optimal_cost.is_zero());
    for (const auto& report : r.by_criterion) {
      CHECK(report.vs_gt_u.total() == 0.0);
      CHECK(report.vs_h.total() == 0.0);
      CHECK(report.vs_gt1.total() == 0.0);
      CHECK(report.vs_gt1.f1 == 1.0);
    }
  }
}

TEST_CASE("csv batches are well-formed and deterministic") {
  SolverConfig cfg;
  cfg.max_u = 2;

  const auto csv = edge_break_csv(4, 0.3, 2, 4, 123, cfg, 2);
  std::istringstream ss(csv);
  std::string header;
  std::getline(ss, header);
  CHECK(header ==
        "trial,u,cost,omission_d,commission_d,omission_b,commission_b,f1,criterion");
  CHECK(csv == edge_break_csv(4, 0.3, 2, 4, 123, cfg, 1));

  VarBenchOptions opt;
  opt.noiseless = true;
  const auto vcsv = var_bench_csv(4, 0.3, 2, 3, 321, opt, cfg, 2);
  CHECK(count_lines(vcsv) == 1 + 3 * 3);  // header + three criterion rows per trial
  CHECK(vcsv == var_bench_csv(4, 0.3, 2, 3, 321, opt, cfg, 1));
}
