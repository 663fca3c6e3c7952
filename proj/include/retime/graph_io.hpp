#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "retime/objective.hpp"

namespace retime {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

/// Result of parsing the graph text format.
///
/// A file with only `nodes` and unweighted `d` lines is a plain directed
/// graph; anything with `b`, weights or `wa-*` lines is a weighted
/// hypothesis. Both views are populated so callers pick what they need.
struct ParsedGraph {
  bool plain_directed = false;
  DirectedGraph directed;   // valid when plain_directed
  WeightedHypothesis hyp;   // always valid (defaults filled in)

  /// The directed view; throws if the input carried hypothesis-only content.
  const DirectedGraph& require_directed() const;
};

ParsedGraph parse_graph(std::istream& in);
ParsedGraph parse_graph(const std::string& text);
ParsedGraph parse_graph_file(const std::string& path);

std::string write_graph(const DirectedGraph& g);
std::string write_graph(const MixedGraph& g);
std::string write_graph(const WeightedHypothesis& h);

void write_graph_file(const std::string& path, const std::string& text);

}  // namespace retime
