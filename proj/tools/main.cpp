#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "retime/asp.hpp"
#include "retime/graph_io.hpp"
#include "retime/meta.hpp"
#include "retime/simbench.hpp"
#include "retime/solver.hpp"

namespace {

using namespace retime;

constexpr const char* kVersion = "retime 0.1.0";

int g_log_level = 1;  // 0 quiet, 1 info, 2 debug

void set_log_level(const std::string& level) {
  if (level == "quiet") g_log_level = 0;
  else if (level == "info") g_log_level = 1;
  else if (level == "debug") g_log_level = 2;
  else throw CLI::ValidationError("--log", "expected quiet|info|debug");
}

void log_info(const std::string& msg) {
  if (g_log_level >= 1) std::cerr << msg << "\n";
}

void emit(const std::string& output_path, const std::string& text) {
  if (output_path.empty()) {
    std::cout << text;
  } else {
    write_graph_file(output_path, text);
  }
}

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Flags shared by solve-like subcommands; names mirror the external
// solver's vocabulary so its recipes translate directly.
struct SolverFlags {
  int max_u = 20;
  std::string opt_mode = "optN";
  long long cap = 0;
  std::string scc = "none";
  std::string density_band;
  std::string density_preset;
  std::string priority = "lex";
  bool strict_density = false;
  int workers = 1;
  long long node_limit = 0;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--max-u", f.max_u, "largest undersampling rate searched")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--opt-mode", f.opt_mode, "opt | optN[,b] | enum,b");
  cmd->add_option("-n,--cap", f.cap, "solution cap, 0 = unlimited")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--scc", f.scc, "none | auto | <graph file> supplying the SCC constraint");
  cmd->add_option("--density-band", f.density_band, "min:max directed-edge band");
  cmd->add_option("--density-preset", f.density_preset, "matched = +/-25% of the hypothesis");
  cmd->add_option("--priority", f.priority, "lex | flat")
      ->check(CLI::IsMember({"lex", "flat"}));
  cmd->add_flag("--strict-density", f.strict_density, "treat band violations as infeasible");
  cmd->add_option("--workers", f.workers, "solver worker count")->check(CLI::PositiveNumber);
  cmd->add_option("--node-limit", f.node_limit, "per-subproblem node budget, 0 = unlimited")
      ->check(CLI::NonNegativeNumber);
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

OptMode parse_opt_mode(const std::string& text, long long cap) {
  const std::string s = lowercase(text);
  auto bound_after = [&](std::size_t pos) {
    try {
      std::size_t used = 0;
      const long long b = std::stoll(s.substr(pos), &used);
      if (used != s.size() - pos || b < 0) throw std::invalid_argument("");
      return b;
    } catch (const std::exception&) {
      throw UsageError("bad --opt-mode bound in '" + text + "'");
    }
  };
  if (s == "opt") return OptMode::opt();
  if (s == "optn") return OptMode::optn(std::nullopt, cap);
  if (s.rfind("optn,", 0) == 0) return OptMode::optn(bound_after(5), cap);
  if (s.rfind("enum,", 0) == 0) return OptMode::enumerate(bound_after(5), cap);
  throw UsageError("unknown --opt-mode '" + text + "' (expected opt|optN[,b]|enum,b)");
}

DensityBand parse_band(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--density-band expects min:max");
  try {
    std::size_t a = 0, b = 0;
    const long long lo = std::stoll(text.substr(0, colon), &a);
    const long long hi = std::stoll(text.substr(colon + 1), &b);
    if (a != colon || b != text.size() - colon - 1 || lo < 0 || lo > hi)
      throw std::invalid_argument("");
    return DensityBand{lo, hi};
  } catch (const std::exception&) {
    throw UsageError("bad --density-band '" + text + "'");
  }
}

SolverConfig build_config(const SolverFlags& f, const WeightedHypothesis& hyp) {
  SolverConfig cfg;
  cfg.max_u = f.max_u;
  cfg.mode = parse_opt_mode(f.opt_mode, f.cap);
  cfg.priority = f.priority == "flat" ? Priority::Flat : Priority::Lex;
  cfg.strict_density = f.strict_density;
  cfg.workers = f.workers;
  cfg.node_limit = f.node_limit;

  if (!f.density_band.empty() && !f.density_preset.empty())
    throw UsageError("--density-band and --density-preset are mutually exclusive");
  if (!f.density_band.empty()) {
    cfg.band = parse_band(f.density_band);
  } else if (!f.density_preset.empty()) {
    if (f.density_preset != "matched")
      throw UsageError("unknown --density-preset '" + f.density_preset + "'");
    cfg.band = DensityBand::matched(hyp.graph);
  }

  if (f.scc == "auto") {
    DirectedGraph skeleton(hyp.graph.n);
    skeleton.adj = hyp.graph.directed;
    cfg.scc_constraint = scc_decompose(skeleton);
  } else if (f.scc != "none") {
    const auto parsed = parse_graph_file(f.scc);
    DirectedGraph skeleton(parsed.hyp.graph.n);
    skeleton.adj = parsed.hyp.graph.directed;
    cfg.scc_constraint = scc_decompose(skeleton);
  }
  return cfg;
}

EnrichmentPolicy parse_policy(const std::string& text) {
  EnrichmentPolicy p;
  long long values[4];
  std::istringstream ss(text);
  std::string piece;
  int k = 0;
  while (std::getline(ss, piece, ':')) {
    if (k >= 4) throw UsageError("--policy expects wb:wt:wd:wa");
    try {
      values[k++] = std::stoll(piece);
    } catch (const std::exception&) {
      throw UsageError("bad --policy '" + text + "'");
    }
  }
  if (k != 4) throw UsageError("--policy expects wb:wt:wd:wa");
  p.w_bidirected = values[0];
  p.w_twocycle_directed = values[1];
  p.w_directed = values[2];
  p.w_absent = values[3];
  return p;
}

int run(const std::vector<std::string>& args, bool in_batch);

int run_batch(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open batch file: " + path);

  std::vector<std::vector<std::pair<std::string, std::string>>> stanzas(1);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) {
      if (!stanzas.back().empty()) stanzas.emplace_back();
      continue;
    }
    if (line[first] == '#') continue;
    const auto space = line.find_first_of(" \t", first);
    std::string key = line.substr(first, space - first);
    std::string value;
    if (space != std::string::npos) {
      const auto vstart = line.find_first_not_of(" \t", space);
      if (vstart != std::string::npos) value = line.substr(vstart);
    }
    stanzas.back().emplace_back(std::move(key), std::move(value));
  }

  int stanza_no = 0;
  for (const auto& stanza : stanzas) {
    if (stanza.empty()) continue;
    ++stanza_no;
    std::vector<std::string> args{"retime"};
    std::string cmd;
    for (const auto& [key, value] : stanza) {
      if (key == "cmd") {
        cmd = value;
        continue;
      }
      args.push_back((key.size() == 1 ? "-" : "--") + key);
      if (!value.empty() && value != "true") args.push_back(value);
    }
    if (cmd.empty())
      throw std::runtime_error("batch stanza " + std::to_string(stanza_no) + " has no cmd");
    args.insert(args.begin() + 1, cmd);
    log_info("batch: running stanza " + std::to_string(stanza_no) + " (" + cmd + ")");
    const int rc = run(args, true);
    if (rc != 0) return rc;
  }
  return 0;
}

int run(const std::vector<std::string>& args, bool in_batch) {
  CLI::App app{"Recover causal-timescale graphs from undersampled observations"};
  app.set_version_flag("--version", std::string(kVersion));
  std::string log_level = "info";
  app.add_option("--log", log_level, "quiet | info | debug")->expected(1);
  app.require_subcommand(0, 1);

  // undersample
  auto* cmd_under = app.add_subcommand("undersample", "apply the forward operator");
  std::string under_input, under_output;
  int under_u = 1;
  cmd_under->add_option("--input", under_input, "directed graph file")->required();
  cmd_under->add_option("-u,--u", under_u, "undersampling rate")->required()
      ->check(CLI::PositiveNumber);
  cmd_under->add_option("--output", under_output, "output file (default stdout)");

  // solve
  auto* cmd_solve = app.add_subcommand("solve", "search for optimal (graph, u) pairs");
  std::string solve_input, solve_output;
  SolverFlags solve_flags;
  cmd_solve->add_option("--input", solve_input, "hypothesis file")->required();
  cmd_solve->add_option("--output", solve_output, "output file (default stdout)");
  add_solver_flags(cmd_solve, solve_flags);

  // emit-asp
  auto* cmd_asp = app.add_subcommand("emit-asp", "write the equivalent ASP program");
  std::string asp_input, asp_output;
  SolverFlags asp_flags;
  cmd_asp->add_option("--input", asp_input, "hypothesis file")->required();
  cmd_asp->add_option("--output", asp_output, "output .lp file (default stdout)");
  add_solver_flags(cmd_asp, asp_flags);

  // meta-solve
  auto* cmd_meta = app.add_subcommand("meta-solve", "enrich a first-order output and solve");
  std::string meta_input, meta_output, meta_policy = "10:2:5:10";
  SolverFlags meta_flags;
  cmd_meta->add_option("--input", meta_input, "directed graph file")->required();
  cmd_meta->add_option("--policy", meta_policy, "weights wb:wt:wd:wa");
  cmd_meta->add_option("--output", meta_output, "output file (default stdout)");
  add_solver_flags(cmd_meta, meta_flags);

  // bench-edgebreak
  auto* cmd_break = app.add_subcommand("bench-edgebreak", "edge-breaking benchmark");
  int break_n = 5, break_u = 2, break_trials = 50, break_workers = 1, break_max_u = 0;
  double break_density = 0.25;
  std::uint64_t break_seed = 0;
  std::string break_out;
  long long break_node_limit = 0, break_cap = 0;
  cmd_break->add_option("--n", break_n)->check(CLI::PositiveNumber);
  cmd_break->add_option("--density", break_density)->check(CLI::Range(0.0, 1.0));
  cmd_break->add_option("--u", break_u)->check(CLI::PositiveNumber);
  cmd_break->add_option("--trials", break_trials)->check(CLI::PositiveNumber);
  cmd_break->add_option("--seed", break_seed);
  cmd_break->add_option("--out", break_out, "CSV path (default stdout)");
  cmd_break->add_option("--workers", break_workers, "parallel trials")
      ->check(CLI::PositiveNumber);
  cmd_break->add_option("--max-u", break_max_u, "0 = max(4, u)")->check(CLI::NonNegativeNumber);
  cmd_break->add_option("--node-limit", break_node_limit)->check(CLI::NonNegativeNumber);
  cmd_break->add_option("--cap", break_cap)->check(CLI::NonNegativeNumber);

  // bench-var
  auto* cmd_var = app.add_subcommand("bench-var", "VAR simulation benchmark");
  int var_n = 8, var_u = 2, var_trials = 20, var_workers = 1, var_max_u = 0, var_length = 2000;
  double var_density = 0.25, var_noise = 0.1, var_th_d = 0.1, var_th_b = 0.2;
  std::uint64_t var_seed = 0;
  std::string var_out;
  bool var_noiseless = false, var_scc_auto = false;
  long long var_node_limit = 0, var_cap = 0;
  cmd_var->add_option("--n", var_n)->check(CLI::PositiveNumber);
  cmd_var->add_option("--density", var_density)->check(CLI::Range(0.0, 1.0));
  cmd_var->add_option("--u", var_u)->check(CLI::PositiveNumber);
  cmd_var->add_option("--trials", var_trials)->check(CLI::PositiveNumber);
  cmd_var->add_option("--seed", var_seed);
  cmd_var->add_option("--noise", var_noise)->check(CLI::NonNegativeNumber);
  cmd_var->add_option("--length", var_length)->check(CLI::PositiveNumber);
  cmd_var->add_option("--out", var_out, "CSV path (default stdout)");
  cmd_var->add_option("--workers", var_workers, "parallel trials")->check(CLI::PositiveNumber);
  cmd_var->add_option("--max-u", var_max_u, "0 = max(4, u)")->check(CLI::NonNegativeNumber);
  cmd_var->add_option("--threshold-d", var_th_d)->check(CLI::NonNegativeNumber);
  cmd_var->add_option("--threshold-b", var_th_b)->check(CLI::NonNegativeNumber);
  cmd_var->add_flag("--noiseless", var_noiseless, "skip simulation and estimation");
  cmd_var->add_flag("--scc-auto", var_scc_auto, "derive SCC constraint from each estimate");
  cmd_var->add_option("--node-limit", var_node_limit)->check(CLI::NonNegativeNumber);
  cmd_var->add_option("--cap", var_cap)->check(CLI::NonNegativeNumber);

  // batch
  auto* cmd_batch = app.add_subcommand("batch", "run stanzas from a key-value file");
  std::string batch_file;
  cmd_batch->add_option("file", batch_file, "batch description file")->required();

  // Let global flags like --log appear after the subcommand.
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  set_log_level(log_level);

  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 1;
  }

  try {
    if (cmd_under->parsed()) {
      const auto g = parse_graph_file(under_input).require_directed();
      emit(under_output, write_graph(undersample(g, Rate(under_u))));
    } else if (cmd_solve->parsed()) {
      const auto hyp = parse_graph_file(solve_input).hyp;
      const auto cfg = build_config(solve_flags, hyp);
      const auto s = solve(hyp, cfg);
      log_info("solve: " + std::to_string(s.solutions.size()) + " solutions, optimum " +
               (s.optimum ? s.optimum->str() : "none") + ", " +
               std::to_string(s.nodes_visited) + " nodes");
      emit(solve_output, format_solution_set(s));
    } else if (cmd_asp->parsed()) {
      const auto hyp = parse_graph_file(asp_input).hyp;
      const auto cfg = build_config(asp_flags, hyp);
      emit(asp_output, emit_program(hyp, cfg).text);
    } else if (cmd_meta->parsed()) {
      const auto g = parse_graph_file(meta_input).require_directed();
      const auto policy = parse_policy(meta_policy);
      const auto hyp = enrich(g, policy);
      const auto cfg = build_config(meta_flags, hyp);
      const auto s = solve(hyp, cfg);
      log_info("meta-solve: " + std::to_string(s.solutions.size()) + " solutions, optimum " +
               (s.optimum ? s.optimum->str() : "none"));
      emit(meta_output, format_solution_set(s));
    } else if (cmd_break->parsed()) {
      SolverConfig cfg;
      cfg.max_u = break_max_u > 0 ? break_max_u : std::max(4, break_u);
      cfg.node_limit = break_node_limit;
      cfg.mode = OptMode::optn(std::nullopt, break_cap);
      const auto csv = edge_break_csv(break_n, break_density, break_u, break_trials,
                                      break_seed, cfg, break_workers);
      emit(break_out, csv);
    } else if (cmd_var->parsed()) {
      SolverConfig cfg;
      cfg.max_u = var_max_u > 0 ? var_max_u : std::max(4, var_u);
      cfg.node_limit = var_node_limit;
      cfg.mode = OptMode::optn(std::nullopt, var_cap);
      VarBenchOptions opt;
      opt.noise_std = var_noise;
      opt.length = var_length;
      opt.threshold_d = var_th_d;
      opt.threshold_b = var_th_b;
      opt.noiseless = var_noiseless;
      opt.scc_auto = var_scc_auto;
      const auto csv =
          var_bench_csv(var_n, var_density, var_u, var_trials, var_seed, opt, cfg, var_workers);
      emit(var_out, csv);
    } else if (cmd_batch->parsed()) {
      if (in_batch) throw UsageError("nested batch files are not supported");
      return run_batch(batch_file);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, false);
}
