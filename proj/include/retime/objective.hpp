#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include "retime/graph.hpp"
#include "retime/matrix.hpp"
#include "retime/undersample.hpp"

namespace retime {

/// Observed mixed graph plus integer disagreement weights.
///
/// Presence weights are per edge; absence weights are global with optional
/// per-slot overrides (the text format only carries the globals).
struct WeightedHypothesis {
  MixedGraph graph;
  IntMatrix w_directed;    // meaningful where graph.directed is set
  IntMatrix w_bidirected;  // symmetric, meaningful on bidirected pairs
  long long wa_directed = 1;
  long long wa_bidirected = 1;
  std::optional<IntMatrix> wa_directed_override;
  std::optional<IntMatrix> wa_bidirected_override;

  WeightedHypothesis() = default;
  explicit WeightedHypothesis(MixedGraph g);

  /// All presence and absence weights set to 1.
  static WeightedHypothesis uniform(MixedGraph g);

  int n() const { return graph.n; }
  long long presence_weight_directed(int i, int j) const { return w_directed.at(i, j); }
  long long presence_weight_bidirected(int i, int j) const { return w_bidirected.at(i, j); }
  long long absence_weight_directed(int i, int j) const {
    if (wa_directed_override) return wa_directed_override->at(i, j);
    return wa_directed;
  }
  long long absence_weight_bidirected(int i, int j) const {
    if (wa_bidirected_override) return wa_bidirected_override->at(i, j);
    return wa_bidirected;
  }

  bool operator==(const WeightedHypothesis&) const = default;
};

/// Inclusive bounds on the directed-edge count of a candidate graph.
struct DensityBand {
  long long d_min = 0;
  long long d_max = 0;

  static DensityBand inactive(int n) {
    return DensityBand{0, static_cast<long long>(n) * n};
  }
  /// Band at +/- 25% of the hypothesis' directed-edge count.
  static DensityBand matched(const MixedGraph& h);

  /// Linear distance of `edges` from [d_min, d_max]; 0 inside.
  long long violation(long long edges) const;
  /// Smallest violation attainable when the edge count can be anything
  /// in [lo, hi].
  long long interval_violation(long long lo, long long hi) const;
};

/// Three-component cost, compared lexicographically in field order.
struct CostVector {
  long long density_violation = 0;
  long long bidirected_cost = 0;
  long long directed_cost = 0;

  long long total() const { return density_violation + bidirected_cost + directed_cost; }
  bool is_zero() const { return density_violation == 0 && bidirected_cost == 0 && directed_cost == 0; }

  auto operator<=>(const CostVector&) const = default;

  std::string str() const;
};

enum class Priority { Lex, Flat };

/// Comparison under the active priority scheme: lexicographic
/// (density, bidirected, directed) or the single-level total.
bool cost_less(const CostVector& a, const CostVector& b, Priority p);
bool cost_eq(const CostVector& a, const CostVector& b, Priority p);

/// Weighted disagreement between undersample(candidate, u) and the
/// hypothesis, plus the density-band violation of the candidate.
CostVector cost(const DirectedGraph& candidate, Rate u, const WeightedHypothesis& hyp,
                const DensityBand& band);

/// Disagreement part only, for an already-computed observed graph.
CostVector mismatch_cost(const MixedGraph& observed, const WeightedHypothesis& hyp);

/// Quantize connection strengths into presence weights in [1, w_max];
/// absent edges get weight w_max. All-zero strengths map to weight 1.
WeightedHypothesis adaptive_weights(const MixedGraph& h, const DoubleMatrix& directed_strength,
                                    const DoubleMatrix& bidirected_strength, long long w_max);

}  // namespace retime
