#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "retime/solver.hpp"

namespace retime {

/// A complete ASP-Core-2 program equivalent to the native search problem,
/// plus the correspondence between its atoms and graph elements.
struct AspProgram {
  std::string text;
  int n = 0;
  int max_u = 1;
  Priority priority = Priority::Lex;
  std::map<std::string, std::string> atom_map;
};

/// Emit the logic program: facts for the hypothesis (and SCC structure when
/// configured), the rate and edge choice rules, walk-composition rules, the
/// SCC membership integrity constraint, and weak constraints carrying the
/// disagreement weights at the configured priority levels.
/// Same inputs always produce identical bytes.
AspProgram emit_program(const WeightedHypothesis& hyp, const SolverConfig& cfg);

/// Parse the external solver's witness output (one atom line per "Answer:"
/// header, optionally followed by an "Optimization:" line) back into
/// solutions. Atoms other than edge1/2 and u/1 are rejected.
SolutionSet parse_answer_sets(const AspProgram& program, std::istream& in);
SolutionSet parse_answer_sets(const AspProgram& program, const std::string& text);

/// Keep only the minimum-cost models and drop duplicate (graph, u) pairs;
/// used to compare an external optN run against the native solver.
SolutionSet filter_optimal(const SolutionSet& parsed, Priority priority);

}  // namespace retime
