#include <doctest.h>

#include "retime/objective.hpp"
#include "retime/rng.hpp"
#include "retime/simbench.hpp"

using namespace retime;

namespace {

DirectedGraph make(int n, std::initializer_list<std::pair<int, int>> edges_1based) {
  DirectedGraph g(n);
  for (auto [i, j] : edges_1based) g.add_edge(i - 1, j - 1);
  return g;
}

}  // namespace

TEST_CASE("exact reconstruction costs nothing") {
  const auto g = make(3, {{1, 2}, {2, 3}, {3, 1}});
  const auto hyp = WeightedHypothesis::uniform(undersample(g, Rate(2)));
  const auto c = cost(g, Rate(2), hyp, DensityBand::inactive(3));
  CHECK(c == CostVector{});
  CHECK(c.is_zero());
}

TEST_CASE("missing hypothesis edge is charged its presence weight") {
  // H = {2<->3, 2->3 w=5}; the fork reproduces only the bidirected pair.
  MixedGraph h(3);
  h.add_directed(1, 2);
  h.add_bidirected(1, 2);
  WeightedHypothesis hyp = WeightedHypothesis::uniform(h);
  hyp.w_directed.at(1, 2) = 5;

  const auto fork = make(3, {{1, 2}, {1, 3}});
  const auto c = cost(fork, Rate(2), hyp, DensityBand::inactive(3));
  CHECK(c.directed_cost == 5);
  CHECK(c.bidirected_cost == 0);
  CHECK(c.density_violation == 0);
}

TEST_CASE("spurious directed edge is charged the global absence weight") {
  WeightedHypothesis hyp{MixedGraph(3)};
  hyp.wa_directed = 2;
  hyp.wa_bidirected = 3;
  const auto c = cost(make(3, {{1, 2}}), Rate(1), hyp, DensityBand::inactive(3));
  CHECK(c.directed_cost == 2);
  CHECK(c.bidirected_cost == 0);
}

TEST_CASE("per-slot absence overrides take precedence over the global") {
  WeightedHypothesis hyp{MixedGraph(2)};
  hyp.wa_directed = 2;
  IntMatrix override_m(2, 2);
  override_m.at(0, 1) = 7;
  hyp.wa_directed_override = override_m;
  const auto c = cost(make(2, {{1, 2}}), Rate(1), hyp, DensityBand::inactive(2));
  CHECK(c.directed_cost == 7);
}

TEST_CASE("density violation is the linear distance outside the band") {
  const DensityBand band{2, 4};
  CHECK(band.violation(0) == 2);
  CHECK(band.violation(2) == 0);
  CHECK(band.violation(4) == 0);
  CHECK(band.violation(7) == 3);
  CHECK(band.interval_violation(0, 1) == 1);
  CHECK(band.interval_violation(0, 9) == 0);
  CHECK(band.interval_violation(5, 9) == 1);

  const auto g = make(2, {{1, 2}});
  const auto hyp = WeightedHypothesis::uniform(undersample(g, Rate(1)));
  CHECK(cost(g, Rate(1), hyp, DensityBand{2, 4}).density_violation == 1);
}

TEST_CASE("matched density preset brackets the hypothesis edge count") {
  MixedGraph h(4);
  h.add_directed(0, 1);
  h.add_directed(1, 2);
  h.add_directed(2, 3);
  h.add_directed(3, 0);
  const auto band = DensityBand::matched(h);
  CHECK(band.d_min == 3);
  CHECK(band.d_max == 5);
}

TEST_CASE("cost is zero in all components iff the observation matches exactly") {
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 4;
    const int u = 1 + trial % 3;
    const auto g = random_graph(n, 0.35, 3100 + trial);
    const auto candidate = random_graph(n, 0.35, 9900 + trial);
    const auto hyp = WeightedHypothesis::uniform(undersample(g, Rate(u)));
    const auto c = cost(candidate, Rate(u), hyp, DensityBand::inactive(n));
    CHECK(c.is_zero() == (undersample(candidate, Rate(u)) == hyp.graph));
  }
}

TEST_CASE("scaling every weight scales the disagreement components") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 4;
    const auto g = random_graph(n, 0.4, 4100 + trial);
    const auto candidate = random_graph(n, 0.4, 5100 + trial);
    auto hyp = WeightedHypothesis::uniform(undersample(g, Rate(2)));
    const long long k = 2 + static_cast<long long>(rng.below(5));

    auto scaled = hyp;
    scaled.graph.directed.for_each_set([&](int i, int j) { scaled.w_directed.at(i, j) *= k; });
    scaled.graph.bidirected.for_each_set(
        [&](int i, int j) { scaled.w_bidirected.at(i, j) *= k; });
    scaled.wa_directed *= k;
    scaled.wa_bidirected *= k;

    const auto base = cost(candidate, Rate(2), hyp, DensityBand::inactive(n));
    const auto big = cost(candidate, Rate(2), scaled, DensityBand::inactive(n));
    CHECK(big.directed_cost == k * base.directed_cost);
    CHECK(big.bidirected_cost == k * base.bidirected_cost);
    CHECK(big.density_violation == base.density_violation);
  }
}

TEST_CASE("lexicographic order agrees with the scalarized comparison") {
  Rng rng(23);
  const long long kBase = 1000;  // exceeds any component drawn below
  for (int trial = 0; trial < 200; ++trial) {
    const CostVector a{static_cast<long long>(rng.below(9)), static_cast<long long>(rng.below(999)),
                       static_cast<long long>(rng.below(999))};
    const CostVector b{static_cast<long long>(rng.below(9)), static_cast<long long>(rng.below(999)),
                       static_cast<long long>(rng.below(999))};
    const long long sa = a.density_violation * kBase * kBase + a.bidirected_cost * kBase +
                         a.directed_cost;
    const long long sb = b.density_violation * kBase * kBase + b.bidirected_cost * kBase +
                         b.directed_cost;
    CHECK(cost_less(a, b, Priority::Lex) == (sa < sb));
    CHECK(cost_eq(a, b, Priority::Lex) == (sa == sb));
  }
}

TEST_CASE("flat priority compares totals") {
  const CostVector a{0, 3, 0};
  const CostVector b{0, 0, 2};
  CHECK(cost_less(b, a, Priority::Flat));
  CHECK(cost_eq(CostVector{0, 1, 1}, CostVector{0, 2, 0}, Priority::Flat));
}

TEST_CASE("adaptive weights quantize strengths linearly") {
  MixedGraph h(3);
  h.add_directed(0, 1);

  SUBCASE("a single edge gets the maximum weight") {
    DoubleMatrix sd(3, 0.0), sb(3, 0.0);
    sd.at(0, 1) = 0.37;
    const auto hyp = adaptive_weights(h, sd, sb, 10);
    CHECK(hyp.presence_weight_directed(0, 1) == 10);
    CHECK(hyp.wa_directed == 10);
    CHECK(hyp.wa_bidirected == 10);
  }

  SUBCASE("two strengths map per the stated formula") {
    h.add_directed(1, 2);
    DoubleMatrix sd(3, 0.0), sb(3, 0.0);
    sd.at(0, 1) = 0.2;
    sd.at(1, 2) = 0.8;
    const auto hyp = adaptive_weights(h, sd, sb, 10);
    CHECK(hyp.presence_weight_directed(0, 1) == 3);
    CHECK(hyp.presence_weight_directed(1, 2) == 10);
  }

  SUBCASE("all-zero strengths give weight 1 on present edges") {
    DoubleMatrix sd(3, 0.0), sb(3, 0.0);
    const auto hyp = adaptive_weights(h, sd, sb, 10);
    CHECK(hyp.presence_weight_directed(0, 1) == 1);
    CHECK(hyp.wa_directed == 10);
  }

  SUBCASE("negative magnitudes are rejected") {
    DoubleMatrix sd(3, 0.0), sb(3, 0.0);
    sd.at(0, 1) = -0.5;
    CHECK_THROWS_AS(adaptive_weights(h, sd, sb, 10), std::invalid_argument);
  }
}

TEST_CASE("dimension mismatches are rejected") {
  const auto hyp = WeightedHypothesis::uniform(MixedGraph(3));
  CHECK_THROWS_AS(cost(DirectedGraph(2), Rate(1), hyp, DensityBand::inactive(3)),
                  std::invalid_argument);
}
