#include "retime/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace retime {

WeightedHypothesis::WeightedHypothesis(MixedGraph g)
    : graph(std::move(g)), w_directed(graph.n, 0), w_bidirected(graph.n, 0) {}

WeightedHypothesis WeightedHypothesis::uniform(MixedGraph g) {
  WeightedHypothesis h(std::move(g));
  h.graph.directed.for_each_set([&](int i, int j) { h.w_directed.at(i, j) = 1; });
  h.graph.bidirected.for_each_set([&](int i, int j) { h.w_bidirected.at(i, j) = 1; });
  return h;
}

DensityBand DensityBand::matched(const MixedGraph& h) {
  const long long e = h.directed.count();
  return DensityBand{static_cast<long long>(std::floor(0.75 * e)),
                     static_cast<long long>(std::ceil(1.25 * e))};
}

long long DensityBand::violation(long long edges) const {
  if (edges < d_min) return d_min - edges;
  if (edges > d_max) return edges - d_max;
  return 0;
}

long long DensityBand::interval_violation(long long lo, long long hi) const {
  if (hi < d_min) return d_min - hi;
  if (lo > d_max) return lo - d_max;
  return 0;
}

std::string CostVector::str() const {
  return std::to_string(density_violation) + "," + std::to_string(bidirected_cost) +
         "," + std::to_string(directed_cost);
}

bool cost_less(const CostVector& a, const CostVector& b, Priority p) {
  if (p == Priority::Lex) return a < b;
  return a.total() < b.total();
}

bool cost_eq(const CostVector& a, const CostVector& b, Priority p) {
  if (p == Priority::Lex) return a == b;
  return a.total() == b.total();
}

CostVector mismatch_cost(const MixedGraph& observed, const WeightedHypothesis& hyp) {
  if (observed.n != hyp.graph.n) throw std::invalid_argument("dimension mismatch");
  const int n = observed.n;
  const MixedGraph& h = hyp.graph;
  CostVector c;

  for (int i = 0; i < n; ++i) {
    const int wpr = h.directed.words_per_row();
    const std::uint64_t* hr = h.directed.row(i);
    const std::uint64_t* mr = observed.directed.row(i);
    for (int k = 0; k < wpr; ++k) {
      std::uint64_t missing = hr[k] & ~mr[k];
      while (missing) {
        int j = k * 64 + std::countr_zero(missing);
        c.directed_cost += hyp.presence_weight_directed(i, j);
        missing &= missing - 1;
      }
      std::uint64_t spurious = mr[k] & ~hr[k];
      while (spurious) {
        int j = k * 64 + std::countr_zero(spurious);
        c.directed_cost += hyp.absence_weight_directed(i, j);
        spurious &= spurious - 1;
      }
    }
  }

  // Symmetric matrices: visit each unordered pair once via i < j.
  for (int i = 0; i < n; ++i) {
    h.bidirected.for_each_set_in_row(i, [&](int j) {
      if (i < j && !observed.bidirected.get(i, j))
        c.bidirected_cost += hyp.presence_weight_bidirected(i, j);
    });
    observed.bidirected.for_each_set_in_row(i, [&](int j) {
      if (i < j && !h.bidirected.get(i, j))
        c.bidirected_cost += hyp.absence_weight_bidirected(i, j);
    });
  }
  return c;
}

CostVector cost(const DirectedGraph& candidate, Rate u, const WeightedHypothesis& hyp,
                const DensityBand& band) {
  if (candidate.n != hyp.graph.n) throw std::invalid_argument("dimension mismatch");
  CostVector c = mismatch_cost(undersample(candidate, u), hyp);
  c.density_violation = band.violation(candidate.edge_count());
  return c;
}

WeightedHypothesis adaptive_weights(const MixedGraph& h, const DoubleMatrix& directed_strength,
                                    const DoubleMatrix& bidirected_strength, long long w_max) {
  if (w_max < 1) throw std::invalid_argument("w_max must be >= 1");
  if (directed_strength.size() != h.n || bidirected_strength.size() != h.n)
    throw std::invalid_argument("dimension mismatch");

  double max_mag = 0.0;
  auto check = [&](double s) {
    if (s < 0) throw std::invalid_argument("strength magnitudes must be >= 0");
    max_mag = std::max(max_mag, s);
  };
  h.directed.for_each_set([&](int i, int j) { check(directed_strength.at(i, j)); });
  h.bidirected.for_each_set([&](int i, int j) { check(bidirected_strength.at(i, j)); });

  WeightedHypothesis out(h);
  auto quantize = [&](double s) -> long long {
    if (max_mag == 0.0) return 1;
    return std::llround(1.0 + (static_cast<double>(w_max) - 1.0) * s / max_mag);
  };
  out.graph.directed.for_each_set(
      [&](int i, int j) { out.w_directed.at(i, j) = quantize(directed_strength.at(i, j)); });
  out.graph.bidirected.for_each_set(
      [&](int i, int j) { out.w_bidirected.at(i, j) = quantize(bidirected_strength.at(i, j)); });
  out.wa_directed = w_max;
  out.wa_bidirected = w_max;
  return out;
}

}  // namespace retime
