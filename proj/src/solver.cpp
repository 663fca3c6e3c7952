#include "retime/solver.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "retime/graph_io.hpp"

namespace retime {

namespace {

struct VarSlot {
  int i, j;
  bool present_first;
};

// Read-only problem description shared by all workers.
struct Instance {
  const WeightedHypothesis* hyp = nullptr;
  int n = 0;
  int max_u = 1;
  DensityBand band;
  Priority priority = Priority::Lex;
  bool strict = false;
  long long node_limit = 0;
  std::vector<VarSlot> vars;  // decision order; slots forced absent are omitted
  BitMatrix possible_init;    // all slots that may be present
};

// Unavoidable disagreement between the hypothesis and any completion whose
// observed graph lies between m_low and m_high (monotonicity).
CostVector disagreement_bound(const MixedGraph& m_low, const MixedGraph& m_high,
                              const WeightedHypothesis& hyp) {
  const int n = hyp.graph.n;
  const MixedGraph& h = hyp.graph;
  CostVector c;
  const int wpr = h.directed.words_per_row();
  for (int i = 0; i < n; ++i) {
    const std::uint64_t* hr = h.directed.row(i);
    const std::uint64_t* hi = m_high.directed.row(i);
    const std::uint64_t* lo = m_low.directed.row(i);
    for (int k = 0; k < wpr; ++k) {
      std::uint64_t unreachable = hr[k] & ~hi[k];
      while (unreachable) {
        int j = k * 64 + std::countr_zero(unreachable);
        c.directed_cost += hyp.presence_weight_directed(i, j);
        unreachable &= unreachable - 1;
      }
      std::uint64_t forced = lo[k] & ~hr[k];
      while (forced) {
        int j = k * 64 + std::countr_zero(forced);
        c.directed_cost += hyp.absence_weight_directed(i, j);
        forced &= forced - 1;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    h.bidirected.for_each_set_in_row(i, [&](int j) {
      if (i < j && !m_high.bidirected.get(i, j))
        c.bidirected_cost += hyp.presence_weight_bidirected(i, j);
    });
    m_low.bidirected.for_each_set_in_row(i, [&](int j) {
      if (i < j && !h.bidirected.get(i, j))
        c.bidirected_cost += hyp.absence_weight_bidirected(i, j);
    });
  }
  return c;
}

struct Incumbent {
  std::mutex mu;
  bool has = false;
  CostVector best;
  Priority priority = Priority::Lex;

  std::pair<bool, CostVector> snapshot() {
    std::lock_guard<std::mutex> lock(mu);
    return {has, best};
  }
  void offer(const CostVector& c) {
    std::lock_guard<std::mutex> lock(mu);
    if (!has || cost_less(c, best, priority)) {
      has = true;
      best = c;
    }
  }
};

enum class Phase { FindBest, Enumerate };

struct SubResult {
  std::vector<Solution> sols;
  std::optional<CostVector> best;
  bool truncated = false;
  long long nodes = 0;
};

class Dfs {
 public:
  Dfs(const Instance& inst, int u, Phase phase)
      : I(inst), u_(u), phase_(phase), in_(inst.n), possible_(inst.possible_init) {
    poss_cnt_ = possible_.count();
  }

  // Phase 1
  Incumbent* incumbent = nullptr;
  std::optional<long long> seed_total;

  // Phase 2
  CostVector threshold;
  bool collect_leq = false;  // Enum semantics: total() <= bound_total
  long long bound_total = 0;
  long long local_cap = 0;

  SubResult out;

  void run(const std::vector<std::uint8_t>& prefix) {
    for (std::size_t d = 0; d < prefix.size(); ++d) apply(I.vars[d], prefix[d] != 0);
    dfs(prefix.size(), nullptr, nullptr);
  }

 private:
  void apply(const VarSlot& v, bool present) {
    if (present) {
      in_.set(v.i, v.j);
      ++in_cnt_;
    } else {
      possible_.reset(v.i, v.j);
      --poss_cnt_;
    }
  }
  void undo(const VarSlot& v, bool present) {
    if (present) {
      in_.reset(v.i, v.j);
      --in_cnt_;
    } else {
      possible_.set(v.i, v.j);
      ++poss_cnt_;
    }
  }

  void dfs(std::size_t depth, const MixedGraph* cached_low, const MixedGraph* cached_high) {
    ++out.nodes;
    if (I.node_limit && out.nodes > I.node_limit) {
      out.truncated = true;
      aborted_ = true;
      return;
    }

    // One side is always inherited from the parent: a present-branch keeps
    // `possible` (so m_high), an absent-branch keeps `in` (so m_low).
    MixedGraph storage_low, storage_high;
    if (!cached_low) {
      storage_low = undersample_bits(in_, u_, false);
      cached_low = &storage_low;
    }
    if (!cached_high) {
      storage_high = undersample_bits(possible_, u_, false);
      cached_high = &storage_high;
    }
    const MixedGraph& low = *cached_low;
    const MixedGraph& high = *cached_high;
    CostVector lb = disagreement_bound(low, high, *I.hyp);
    lb.density_violation = I.band.interval_violation(in_cnt_, poss_cnt_);

    if (I.strict && lb.density_violation > 0) return;

    const bool leaf = depth == I.vars.size();
    if (phase_ == Phase::FindBest) {
      if (seed_total && lb.total() > *seed_total) return;
      if (leaf) {
        incumbent->offer(lb);
        if (!out.best || cost_less(lb, *out.best, I.priority)) out.best = lb;
        return;
      }
      auto [has, best] = incumbent->snapshot();
      if (has && !cost_less(lb, best, I.priority)) return;
    } else {
      if (collect_leq) {
        if (lb.total() > bound_total) return;
      } else {
        if (cost_less(threshold, lb, I.priority)) return;
      }
      if (leaf) {
        if (collect_leq || cost_eq(lb, threshold, I.priority)) {
          if (local_cap > 0 && static_cast<long long>(out.sols.size()) >= local_cap) {
            out.truncated = true;
            aborted_ = true;
            return;
          }
          DirectedGraph g(I.n);
          g.adj = in_;
          out.sols.push_back(Solution{std::move(g), u_, lb});
        }
        return;
      }
    }

    const VarSlot& v = I.vars[depth];
    const bool order[2] = {v.present_first, !v.present_first};
    for (bool present : order) {
      apply(v, present);
      if (present)
        dfs(depth + 1, nullptr, &high);  // possible unchanged
      else
        dfs(depth + 1, &low, nullptr);  // in unchanged
      undo(v, present);
      if (aborted_) return;
    }
  }

  const Instance& I;
  int u_;
  Phase phase_;
  BitMatrix in_, possible_;
  long long in_cnt_ = 0, poss_cnt_ = 0;
  bool aborted_ = false;
};

Instance prepare(const WeightedHypothesis& hyp, const SolverConfig& cfg) {
  const int n = hyp.graph.n;
  Instance I;
  I.hyp = &hyp;
  I.n = n;
  I.max_u = cfg.max_u;
  I.band = cfg.band ? *cfg.band : DensityBand::inactive(n);
  if (I.band.d_min < 0 || I.band.d_min > I.band.d_max)
    throw std::invalid_argument("invalid density band");
  I.priority = cfg.priority;
  I.strict = cfg.strict_density;
  I.node_limit = cfg.node_limit;

  // Slots ruled out by the SCC membership constraint are fixed absent.
  I.possible_init = BitMatrix(n);
  const SccInfo* scc = cfg.scc_constraint ? &*cfg.scc_constraint : nullptr;
  if (scc && static_cast<int>(scc->component.size()) != n)
    throw std::invalid_argument("scc constraint size mismatch");
  auto slot_allowed = [&](int i, int j) {
    if (!scc) return true;
    const int k = scc->component[i], l = scc->component[j];
    if (k == l) return true;
    if (scc->sizes[l] <= 1) return true;
    return scc->has_condensation_edge(k, l);
  };

  // Decide edges that touch many hypothesis edges first (fail-first).
  std::vector<int> out_demand(n, 0), in_demand(n, 0);
  hyp.graph.directed.for_each_set([&](int i, int j) {
    ++out_demand[i];
    ++in_demand[j];
  });
  for (auto [i, j] : hyp.graph.bidirected_pairs()) {
    ++out_demand[i];
    ++in_demand[i];
    ++out_demand[j];
    ++in_demand[j];
  }

  struct Scored {
    int score, i, j;
  };
  std::vector<Scored> scored;
  scored.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!slot_allowed(i, j)) continue;
      I.possible_init.set(i, j);
      scored.push_back({out_demand[i] + in_demand[j], i, j});
    }
  std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  I.vars.reserve(scored.size());
  for (const auto& s : scored) I.vars.push_back({s.i, s.j, s.score > 0});
  return I;
}

// Prefix assignments over the first split_depth variables, listed in the
// exact order the serial DFS would visit them. Chunking the traversal this
// way keeps the enumeration order independent of the worker count.
std::vector<std::vector<std::uint8_t>> make_prefixes(const Instance& I) {
  constexpr int kTargetSubproblems = 64;
  int depth = 0;
  while ((1LL << depth) * I.max_u < kTargetSubproblems &&
         depth < static_cast<int>(I.vars.size()) && depth < 10)
    ++depth;

  std::vector<std::vector<std::uint8_t>> prefixes;
  std::vector<std::uint8_t> cur(depth, 0);
  auto expand = [&](auto&& self, int d) -> void {
    if (d == depth) {
      prefixes.push_back(cur);
      return;
    }
    const bool first = I.vars[d].present_first;
    for (bool present : {first, !first}) {
      cur[d] = present ? 1 : 0;
      self(self, d + 1);
    }
  };
  expand(expand, 0);
  return prefixes;
}

struct SubTask {
  int u;
  int prefix;
};

std::vector<SubTask> make_tasks(const Instance& I,
                                const std::vector<std::vector<std::uint8_t>>& prefixes) {
  std::vector<SubTask> tasks;
  tasks.reserve(static_cast<std::size_t>(I.max_u) * prefixes.size());
  for (int u = 1; u <= I.max_u; ++u)
    for (int p = 0; p < static_cast<int>(prefixes.size()); ++p) tasks.push_back({u, p});
  return tasks;
}

struct PhaseOneResult {
  std::optional<CostVector> best;
  bool truncated = false;
  long long nodes = 0;
};

// Heuristic leaf candidates evaluated up front: cheap incumbents that let
// the first descents prune. Their costs are attainable by construction.
std::vector<CostVector> seed_costs(const Instance& I) {
  std::vector<CostVector> seeds;
  std::vector<BitMatrix> candidates;
  candidates.push_back(BitMatrix(I.n));  // empty graph
  BitMatrix h_dir = I.hyp->graph.directed;
  for (int i = 0; i < I.n; ++i)
    for (int j = 0; j < I.n; ++j)
      if (h_dir.get(i, j) && !I.possible_init.get(i, j)) h_dir.reset(i, j);
  candidates.push_back(h_dir);
  candidates.push_back(I.possible_init);
  for (const auto& bits : candidates) {
    for (int u = 1; u <= I.max_u; ++u) {
      CostVector c = mismatch_cost(undersample_bits(bits, u), *I.hyp);
      c.density_violation = I.band.violation(bits.count());
      if (I.strict && c.density_violation > 0) continue;
      seeds.push_back(c);
    }
  }
  return seeds;
}

PhaseOneResult find_optimum(const Instance& I,
                            const std::vector<std::vector<std::uint8_t>>& prefixes,
                            const std::vector<SubTask>& tasks, int workers,
                            std::optional<long long> seed_total) {
  Incumbent shared;
  shared.priority = I.priority;
  // A node budget makes pruning depend on incumbent arrival order, so the
  // shared incumbent is disabled to keep budgeted runs deterministic.
  const bool share = I.node_limit == 0;

  std::optional<CostVector> seed_best;
  for (const CostVector& c : seed_costs(I)) {
    if (seed_total && c.total() > *seed_total) continue;
    if (!seed_best || cost_less(c, *seed_best, I.priority)) seed_best = c;
  }
  if (share && seed_best) shared.offer(*seed_best);

  const int count = static_cast<int>(tasks.size());
  std::vector<SubResult> results(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (int t = 0; t < count; ++t) {
    Dfs d(I, tasks[t].u, Phase::FindBest);
    Incumbent local;
    local.priority = I.priority;
    if (!share && seed_best) local.offer(*seed_best);
    d.incumbent = share ? &shared : &local;
    d.seed_total = seed_total;
    d.run(prefixes[tasks[t].prefix]);
    results[t] = std::move(d.out);
  }

  PhaseOneResult r;
  r.best = seed_best;
  for (const auto& sub : results) {
    r.nodes += sub.nodes;
    r.truncated = r.truncated || sub.truncated;
    if (sub.best && (!r.best || cost_less(*sub.best, *r.best, I.priority))) r.best = sub.best;
  }
  return r;
}

struct EnumerateResult {
  std::vector<Solution> sols;
  bool complete = true;
  long long nodes = 0;
};

EnumerateResult enumerate_solutions(const Instance& I,
                                    const std::vector<std::vector<std::uint8_t>>& prefixes,
                                    const std::vector<SubTask>& tasks, int workers,
                                    const CostVector& threshold, bool collect_leq,
                                    long long bound_total, long long cap) {
  const int count = static_cast<int>(tasks.size());
  std::vector<SubResult> results(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (int t = 0; t < count; ++t) {
    Dfs d(I, tasks[t].u, Phase::Enumerate);
    d.threshold = threshold;
    d.collect_leq = collect_leq;
    d.bound_total = bound_total;
    d.local_cap = cap;
    d.run(prefixes[tasks[t].prefix]);
    results[t] = std::move(d.out);
  }

  // Concatenating in task order reproduces the serial enumeration order,
  // so a cap keeps the same solutions for every worker count.
  EnumerateResult r;
  bool any_truncated = false;
  for (auto& sub : results) {
    r.nodes += sub.nodes;
    any_truncated = any_truncated || sub.truncated;
    for (auto& s : sub.sols) r.sols.push_back(std::move(s));
  }
  if (cap > 0 && static_cast<long long>(r.sols.size()) > cap) {
    r.sols.resize(cap);
    r.complete = false;
  }
  if (any_truncated) r.complete = false;
  return r;
}

void validate(const WeightedHypothesis& hyp, const SolverConfig& cfg) {
  if (hyp.graph.n < 1) throw std::invalid_argument("hypothesis has no nodes");
  if (cfg.max_u < 1) throw std::invalid_argument("max_u must be >= 1");
  if (cfg.workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (cfg.node_limit < 0) throw std::invalid_argument("node_limit must be >= 0");
  if (cfg.mode.cap < 0) throw std::invalid_argument("solution cap must be >= 0");
  if (cfg.mode.variant == OptVariant::Enum && !cfg.mode.bound)
    throw std::invalid_argument("enum mode requires a cost bound");
}

}  // namespace

SolutionSet solve(const WeightedHypothesis& hyp, const SolverConfig& cfg) {
  validate(hyp, cfg);
  Instance I = prepare(hyp, cfg);
  const auto prefixes = make_prefixes(I);
  const auto tasks = make_tasks(I, prefixes);

  SolutionSet out;

  if (cfg.mode.variant == OptVariant::Enum) {
    auto e = enumerate_solutions(I, prefixes, tasks, cfg.workers, CostVector{}, true,
                                 *cfg.mode.bound, cfg.mode.cap);
    out.solutions = std::move(e.sols);
    out.complete = e.complete;
    out.nodes_visited = e.nodes;
    for (const auto& s : out.solutions)
      if (!out.optimum || cost_less(s.cost, *out.optimum, I.priority)) out.optimum = s.cost;
    std::sort(out.solutions.begin(), out.solutions.end(), solution_order);
    return out;
  }

  std::optional<long long> seed_total;
  if (cfg.mode.variant == OptVariant::OptN) seed_total = cfg.mode.bound;
  PhaseOneResult p1 = find_optimum(I, prefixes, tasks, cfg.workers, seed_total);
  if (!p1.best && seed_total) {
    // Seeded bound excluded everything; redo without it.
    p1 = find_optimum(I, prefixes, tasks, cfg.workers, std::nullopt);
  }
  if (!p1.best) {
    if (I.strict)
      throw InfeasibleError("no solution satisfies the strict density band");
    throw InfeasibleError("search exhausted without finding a solution");
  }

  const CostVector optimum = *p1.best;
  const long long cap = cfg.mode.variant == OptVariant::Opt ? 1 : cfg.mode.cap;
  auto e = enumerate_solutions(I, prefixes, tasks, cfg.workers, optimum, false, 0, cap);

  out.solutions = std::move(e.sols);
  out.optimum = optimum;
  out.nodes_visited = p1.nodes + e.nodes;
  out.complete = cfg.mode.variant == OptVariant::Opt ? !p1.truncated
                                                     : (e.complete && !p1.truncated);
  std::sort(out.solutions.begin(), out.solutions.end(), solution_order);
  return out;
}

SolutionSet solve_bruteforce(const WeightedHypothesis& hyp, const SolverConfig& cfg) {
  validate(hyp, cfg);
  const int n = hyp.graph.n;
  if (n > 4 || cfg.max_u > 4)
    throw std::invalid_argument("brute force limits exceeded (n <= 4, max_u <= 4)");
  const DensityBand band = cfg.band ? *cfg.band : DensityBand::inactive(n);
  const Priority prio = cfg.priority;

  const SccInfo* scc = cfg.scc_constraint ? &*cfg.scc_constraint : nullptr;
  auto graph_allowed = [&](const DirectedGraph& g) {
    if (!scc) return true;
    bool ok = true;
    g.adj.for_each_set([&](int i, int j) {
      const int k = scc->component[i], l = scc->component[j];
      if (k != l && scc->sizes[l] > 1 && !scc->has_condensation_edge(k, l)) ok = false;
    });
    return ok;
  };

  std::vector<Solution> all;
  const long long slots = static_cast<long long>(n) * n;
  for (int u = 1; u <= cfg.max_u; ++u) {
    for (long long mask = 0; mask < (1LL << slots); ++mask) {
      DirectedGraph g(n);
      for (long long b = 0; b < slots; ++b)
        if (mask & (1LL << b)) g.adj.set(static_cast<int>(b / n), static_cast<int>(b % n));
      if (!graph_allowed(g)) continue;
      CostVector c = cost(g, Rate(u), hyp, band);
      if (cfg.strict_density && c.density_violation > 0) continue;
      all.push_back(Solution{std::move(g), u, c});
    }
  }

  SolutionSet out;
  if (cfg.mode.variant == OptVariant::Enum) {
    for (auto& s : all)
      if (s.cost.total() <= *cfg.mode.bound) out.solutions.push_back(std::move(s));
  } else {
    std::optional<CostVector> best;
    for (const auto& s : all)
      if (!best || cost_less(s.cost, *best, prio)) best = s.cost;
    if (!best) {
      if (cfg.strict_density)
        throw InfeasibleError("no solution satisfies the strict density band");
      throw InfeasibleError("empty search space");
    }
    for (auto& s : all)
      if (cost_eq(s.cost, *best, prio)) out.solutions.push_back(std::move(s));
    out.optimum = best;
  }

  std::sort(out.solutions.begin(), out.solutions.end(), solution_order);
  for (const auto& s : out.solutions)
    if (!out.optimum || cost_less(s.cost, *out.optimum, prio)) out.optimum = s.cost;

  long long cap = cfg.mode.variant == OptVariant::Opt ? 1 : cfg.mode.cap;
  if (cap > 0 && static_cast<long long>(out.solutions.size()) > cap) {
    out.solutions.resize(cap);
    out.complete = cfg.mode.variant == OptVariant::Opt;
  }
  return out;
}

CostVector lower_bound(const PartialAssignment& partial, Rate u, const WeightedHypothesis& hyp,
                       const DensityBand& band) {
  const int n = partial.n;
  if (n != hyp.graph.n) throw std::invalid_argument("dimension mismatch");
  if (!partial.decided_in.is_subset_of(partial.decided))
    throw std::invalid_argument("decided_in must be a subset of decided");

  BitMatrix possible(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (partial.decided_in.get(i, j) || !partial.decided.get(i, j)) possible.set(i, j);

  const MixedGraph m_low = undersample_bits(partial.decided_in, u.value);
  const MixedGraph m_high = undersample_bits(possible, u.value);
  CostVector c = disagreement_bound(m_low, m_high, hyp);
  c.density_violation = band.interval_violation(partial.decided_in.count(), possible.count());
  return c;
}

bool solution_order(const Solution& a, const Solution& b) {
  if (a.u != b.u) return a.u < b.u;
  for (int i = 0; i < a.graph.n; ++i) {
    for (int k = 0; k < a.graph.adj.words_per_row(); ++k) {
      const std::uint64_t wa = a.graph.adj.row(i)[k];
      const std::uint64_t wb = b.graph.adj.row(i)[k];
      if (wa != wb) return wa < wb;
    }
  }
  return false;
}

std::string format_solution_set(const SolutionSet& s) {
  std::ostringstream out;
  out << "# optimum " << (s.optimum ? s.optimum->str() : "none") << "\n";
  out << "# complete " << (s.complete ? "true" : "false") << "\n";
  for (const auto& sol : s.solutions) {
    out << "--- solution u=" << sol.u << " cost=" << sol.cost.str() << "\n";
    out << write_graph(sol.graph);
  }
  return out.str();
}

}  // namespace retime
