#include "retime/asp.hpp"

#include <algorithm>
#include <sstream>

namespace retime {

AspProgram emit_program(const WeightedHypothesis& hyp, const SolverConfig& cfg) {
  const int n = hyp.graph.n;
  const DensityBand band = cfg.band ? *cfg.band : DensityBand::inactive(n);
  const bool band_active = band.d_min > 0 || band.d_max < static_cast<long long>(n) * n;
  const bool lex = cfg.priority == Priority::Lex;
  const int level_density = lex ? 3 : 1;
  const int level_bidirected = lex ? 2 : 1;
  const int level_directed = 1;

  std::ostringstream p;
  p << "% causal-timescale graph recovery under undersampling\n";
  p << "#const maxu = " << cfg.max_u << ".\n";
  p << "\n% nodes\n";
  p << "node(1.." << n << ").\n";

  p << "\n% observed graph\n";
  hyp.graph.directed.for_each_set(
      [&](int i, int j) { p << "hdirected(" << i + 1 << "," << j + 1 << ").\n"; });
  for (auto [i, j] : hyp.graph.bidirected_pairs())
    p << "hbidirected(" << i + 1 << "," << j + 1 << ").\n";

  p << "\n% presence weights\n";
  hyp.graph.directed.for_each_set([&](int i, int j) {
    p << "wdp(" << i + 1 << "," << j + 1 << "," << hyp.presence_weight_directed(i, j) << ").\n";
  });
  for (auto [i, j] : hyp.graph.bidirected_pairs())
    p << "wbp(" << i + 1 << "," << j + 1 << "," << hyp.presence_weight_bidirected(i, j) << ").\n";
  p << "% absence weights\n";
  p << "wda(" << hyp.wa_directed << ").\n";
  p << "wba(" << hyp.wa_bidirected << ").\n";

  if (cfg.scc_constraint) {
    const SccInfo& scc = *cfg.scc_constraint;
    p << "\n% SCC structure\n";
    for (int v = 0; v < n; ++v) p << "scc(" << v + 1 << "," << scc.component[v] + 1 << ").\n";
    for (int c = 0; c < scc.component_count(); ++c)
      p << "sccsize(" << c + 1 << "," << scc.sizes[c] << ").\n";
    for (auto [k, l] : scc.condensation) p << "dag(" << k + 1 << "," << l + 1 << ").\n";
  }

  p << "\n% undersampling rate\n";
  p << "1 {u(1.." << cfg.max_u << ")} 1.\n";

  p << "\n% candidate causal-timescale graph\n";
  p << "{edge1(X,Y)} :- node(X), node(Y).\n";

  p << "\n% exact-length walk reachability\n";
  p << "directed(X,Y,1) :- edge1(X,Y).\n";
  p << "directed(X,Y,L) :- directed(X,Z,L-1), edge1(Z,Y), L = 2..maxu.\n";
  p << "\n% observed-rate projection\n";
  p << "odirected(X,Y) :- directed(X,Y,U), u(U).\n";
  p << "obidirected(X,Y) :- directed(Z,X,L), directed(Z,Y,L), X < Y, u(U), L = 1..maxu-1, "
       "L < U.\n";

  if (cfg.scc_constraint) {
    p << "\n% SCC membership integrity\n";
    p << ":- edge1(X, Y), scc(X, K), scc(Y, L), K != L, sccsize(L, Z), Z > 1, not dag(K,L).\n";
  }

  if (band_active) {
    p << "\n% density band\n";
    p << "edgecount(C) :- C = #count { X,Y : edge1(X,Y) }.\n";
    if (cfg.strict_density) {
      p << ":- edgecount(C), C > " << band.d_max << ".\n";
      p << ":- edgecount(C), C < " << band.d_min << ".\n";
    } else {
      p << ":~ edgecount(C), C > " << band.d_max << ". [C-" << band.d_max << "@"
        << level_density << ",density]\n";
      p << ":~ edgecount(C), C < " << band.d_min << ". [" << band.d_min << "-C@"
        << level_density << ",density]\n";
    }
  }

  p << "\n% disagreement costs\n";
  p << ":~ hdirected(X,Y), not odirected(X,Y), wdp(X,Y,W). [W@" << level_directed
    << ",X,Y,hd]\n";
  p << ":~ odirected(X,Y), not hdirected(X,Y), wda(W). [W@" << level_directed << ",X,Y,od]\n";
  p << ":~ hbidirected(X,Y), not obidirected(X,Y), wbp(X,Y,W). [W@" << level_bidirected
    << ",X,Y,hb]\n";
  p << ":~ obidirected(X,Y), not hbidirected(X,Y), wba(W). [W@" << level_bidirected
    << ",X,Y,ob]\n";

  p << "\n#show edge1/2.\n";
  p << "#show u/1.\n";

  AspProgram out;
  out.text = p.str();
  out.n = n;
  out.max_u = cfg.max_u;
  out.priority = cfg.priority;
  out.atom_map = {
      {"edge1/2", "candidate causal-timescale edge X->Y"},
      {"u/1", "undersampling rate"},
      {"hdirected/2", "observed directed edge"},
      {"hbidirected/2", "observed bidirected pair (X<Y)"},
      {"odirected/2", "candidate undersampled directed edge"},
      {"obidirected/2", "candidate undersampled bidirected pair (X<Y)"},
  };
  return out;
}

namespace {

struct Atom {
  std::string name;
  std::vector<long long> args;
};

[[noreturn]] void bad_atom(int line_no, const std::string& tok) {
  throw std::runtime_error("line " + std::to_string(line_no) + ": unparseable atom '" + tok +
                           "'");
}

Atom parse_atom(const std::string& tok, int line_no) {
  const auto open = tok.find('(');
  Atom a;
  if (open == std::string::npos) {
    a.name = tok;
    return a;
  }
  if (tok.back() != ')') bad_atom(line_no, tok);
  a.name = tok.substr(0, open);
  std::string args = tok.substr(open + 1, tok.size() - open - 2);
  std::istringstream ss(args);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    try {
      a.args.push_back(std::stoll(piece));
    } catch (const std::exception&) {
      bad_atom(line_no, tok);
    }
  }
  return a;
}

}  // namespace

SolutionSet parse_answer_sets(const AspProgram& program, std::istream& in) {
  SolutionSet out;
  std::string line;
  int line_no = 0;
  bool expect_model = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("Answer:", 0) == 0) {
      expect_model = true;
      continue;
    }
    if (line.rfind("Optimization:", 0) == 0) {
      if (out.solutions.empty())
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": optimization line before any model");
      std::istringstream ss(line.substr(std::string("Optimization:").size()));
      std::vector<long long> values;
      long long v;
      while (ss >> v) values.push_back(v);
      CostVector c;
      if (program.priority == Priority::Flat) {
        if (!values.empty()) c.directed_cost = values.back();
      } else {
        // Levels print most-significant first; right-align onto
        // (density, bidirected, directed).
        const int k = static_cast<int>(values.size());
        if (k >= 1) c.directed_cost = values[k - 1];
        if (k >= 2) c.bidirected_cost = values[k - 2];
        if (k >= 3) c.density_violation = values[k - 3];
      }
      out.solutions.back().cost = c;
      continue;
    }
    if (!expect_model) continue;
    expect_model = false;

    DirectedGraph g(program.n);
    int u = 1;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
      Atom a = parse_atom(tok, line_no);
      if (a.name == "edge1") {
        if (a.args.size() != 2 || a.args[0] < 1 || a.args[0] > program.n || a.args[1] < 1 ||
            a.args[1] > program.n)
          throw std::runtime_error("line " + std::to_string(line_no) + ": bad edge1 atom '" +
                                   tok + "'");
        g.add_edge(static_cast<int>(a.args[0]) - 1, static_cast<int>(a.args[1]) - 1);
      } else if (a.name == "u") {
        if (a.args.size() != 1 || a.args[0] < 1 || a.args[0] > program.max_u)
          throw std::runtime_error("line " + std::to_string(line_no) + ": bad u atom '" + tok +
                                   "'");
        u = static_cast<int>(a.args[0]);
      } else {
        throw std::runtime_error("line " + std::to_string(line_no) + ": atom '" + a.name +
                                 "' outside the program's atom map");
      }
    }
    out.solutions.push_back(Solution{std::move(g), u, CostVector{}});
  }
  for (const auto& s : out.solutions)
    if (!out.optimum || cost_less(s.cost, *out.optimum, program.priority)) out.optimum = s.cost;
  return out;
}

SolutionSet parse_answer_sets(const AspProgram& program, const std::string& text) {
  std::istringstream ss(text);
  return parse_answer_sets(program, ss);
}

SolutionSet filter_optimal(const SolutionSet& parsed, Priority priority) {
  SolutionSet out;
  out.complete = parsed.complete;
  if (parsed.solutions.empty()) return out;
  CostVector best = parsed.solutions.front().cost;
  for (const auto& s : parsed.solutions)
    if (cost_less(s.cost, best, priority)) best = s.cost;
  for (const auto& s : parsed.solutions)
    if (cost_eq(s.cost, best, priority)) out.solutions.push_back(s);
  out.optimum = best;
  std::sort(out.solutions.begin(), out.solutions.end(), solution_order);
  out.solutions.erase(std::unique(out.solutions.begin(), out.solutions.end(),
                                  [](const Solution& a, const Solution& b) {
                                    return a.u == b.u && a.graph == b.graph;
                                  }),
                      out.solutions.end());
  return out;
}

}  // namespace retime
