#include "retime/graph_io.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace retime {

const DirectedGraph& ParsedGraph::require_directed() const {
  if (!plain_directed)
    throw std::runtime_error("expected a plain directed graph (no b/weight/wa lines)");
  return directed;
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream ss(line);
  std::string t;
  while (ss >> t) tokens.push_back(t);
  return tokens;
}

long long parse_int(const std::string& tok, int line_no, const std::string& what) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError(line_no, "expected integer for " + what + ", got '" + tok + "'");
  }
  if (pos != tok.size())
    throw ParseError(line_no, "expected integer for " + what + ", got '" + tok + "'");
  return v;
}

}  // namespace

ParsedGraph parse_graph(std::istream& in) {
  std::string line;
  int line_no = 0;
  int n = -1;
  bool saw_hyp_content = false;
  std::optional<long long> wa_d, wa_b;

  struct EdgeLine {
    int i, j;
    long long w;
    bool weighted;
    int line_no;
  };
  std::vector<EdgeLine> directed_edges, bidirected_edges;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    const std::string& kind = tokens[0];

    if (n < 0) {
      if (kind != "nodes") throw ParseError(line_no, "expected 'nodes <n>' header first");
      if (tokens.size() != 2) throw ParseError(line_no, "malformed nodes line");
      long long v = parse_int(tokens[1], line_no, "node count");
      if (v < 1) throw ParseError(line_no, "node count must be >= 1");
      n = static_cast<int>(v);
      continue;
    }

    if (kind == "nodes") throw ParseError(line_no, "duplicate nodes line");

    if (kind == "d" || kind == "b") {
      if (tokens.size() != 3 && tokens.size() != 4)
        throw ParseError(line_no, "malformed edge line");
      long long i = parse_int(tokens[1], line_no, "node index");
      long long j = parse_int(tokens[2], line_no, "node index");
      if (i < 1 || i > n) throw ParseError(line_no, "node " + tokens[1] + " out of range [1.." + std::to_string(n) + "]");
      if (j < 1 || j > n) throw ParseError(line_no, "node " + tokens[2] + " out of range [1.." + std::to_string(n) + "]");
      EdgeLine e{static_cast<int>(i) - 1, static_cast<int>(j) - 1, 1, false, line_no};
      if (tokens.size() == 4) {
        e.w = parse_int(tokens[3], line_no, "edge weight");
        if (e.w < 1) throw ParseError(line_no, "edge weight must be a positive integer");
        e.weighted = true;
        saw_hyp_content = true;
      }
      if (kind == "d") {
        directed_edges.push_back(e);
      } else {
        if (e.i == e.j) throw ParseError(line_no, "bidirected self-pair is not allowed");
        bidirected_edges.push_back(e);
        saw_hyp_content = true;
      }
      continue;
    }

    if (kind == "wa-d" || kind == "wa-b") {
      if (tokens.size() != 2) throw ParseError(line_no, "malformed absence-weight line");
      long long w = parse_int(tokens[1], line_no, "absence weight");
      if (w < 1) throw ParseError(line_no, "absence weight must be a positive integer");
      auto& slot = (kind == "wa-d") ? wa_d : wa_b;
      if (slot) throw ParseError(line_no, "duplicate " + kind + " line");
      slot = w;
      saw_hyp_content = true;
      continue;
    }

    throw ParseError(line_no, "unrecognized line kind '" + kind + "'");
  }

  if (n < 0) throw ParseError(line_no, "missing 'nodes <n>' header");

  ParsedGraph out;
  MixedGraph mixed(n);
  IntMatrix wd(n, 0), wb(n, 0);
  for (const auto& e : directed_edges) {
    if (mixed.directed.get(e.i, e.j))
      throw ParseError(e.line_no, "duplicate directed edge " + std::to_string(e.i + 1) + " " +
                                      std::to_string(e.j + 1));
    mixed.add_directed(e.i, e.j);
    wd.at(e.i, e.j) = e.w;
  }
  for (const auto& e : bidirected_edges) {
    if (mixed.has_bidirected(e.i, e.j))
      throw ParseError(e.line_no, "duplicate bidirected edge " + std::to_string(e.i + 1) + " " +
                                      std::to_string(e.j + 1));
    mixed.add_bidirected(e.i, e.j);
    wb.at(e.i, e.j) = e.w;
    wb.at(e.j, e.i) = e.w;
  }

  out.hyp = WeightedHypothesis(mixed);
  out.hyp.w_directed = std::move(wd);
  out.hyp.w_bidirected = std::move(wb);
  out.hyp.wa_directed = wa_d.value_or(1);
  out.hyp.wa_bidirected = wa_b.value_or(1);

  out.plain_directed = !saw_hyp_content;
  if (out.plain_directed) {
    out.directed = DirectedGraph(n);
    out.directed.adj = mixed.directed;
  }
  return out;
}

ParsedGraph parse_graph(const std::string& text) {
  std::istringstream ss(text);
  return parse_graph(ss);
}

ParsedGraph parse_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return parse_graph(in);
}

std::string write_graph(const DirectedGraph& g) {
  std::ostringstream out;
  out << "nodes " << g.n << "\n";
  g.adj.for_each_set([&](int i, int j) { out << "d " << i + 1 << " " << j + 1 << "\n"; });
  return out.str();
}

std::string write_graph(const MixedGraph& g) {
  std::ostringstream out;
  out << "nodes " << g.n << "\n";
  g.directed.for_each_set([&](int i, int j) { out << "d " << i + 1 << " " << j + 1 << "\n"; });
  for (auto [i, j] : g.bidirected_pairs()) out << "b " << i + 1 << " " << j + 1 << "\n";
  return out.str();
}

std::string write_graph(const WeightedHypothesis& h) {
  std::ostringstream out;
  out << "nodes " << h.graph.n << "\n";
  out << "wa-d " << h.wa_directed << "\n";
  out << "wa-b " << h.wa_bidirected << "\n";
  h.graph.directed.for_each_set([&](int i, int j) {
    out << "d " << i + 1 << " " << j + 1 << " " << h.w_directed.at(i, j) << "\n";
  });
  for (auto [i, j] : h.graph.bidirected_pairs())
    out << "b " << i + 1 << " " << j + 1 << " " << h.w_bidirected.at(i, j) << "\n";
  return out.str();
}

void write_graph_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << text;
}

}  // namespace retime
