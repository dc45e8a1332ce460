#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "aep/chain_solver.hpp"
#include "aep/instance.hpp"
#include "aep/network.hpp"
#include "aep/oracle.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw aep::ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw aep::ParseError("cannot open " + path);
  out << text;
}

aep::Format format_of(const std::string& name) {
  if (name == "json") return aep::Format::Json;
  if (name == "text") return aep::Format::Text;
  throw CLI::ValidationError("format", "expected json or text");
}

aep::Instance load_instance(const std::string& path, const std::string& format) {
  aep::Instance inst = aep::parse_instance(read_input(path), format_of(format));
  aep::ValidationResult vr = aep::validate(inst);
  if (!vr.ok()) {
    std::cerr << "invalid instance:\n";
    for (const std::string& v : vr.violations) std::cerr << "  " << v << "\n";
    throw std::invalid_argument("instance failed validation");
  }
  return inst;
}

struct SolverFlags {
  std::string mode = "forward";
  std::string policy = "fifo";
  std::string phase2_policy;
  std::string phases = "1";
  bool generalized = false;
  double epsilon = 1e-9;
  std::uint64_t seed = 0;
  double smooth_self = 1.0;
  double smooth_neighbor = 0.0;
  int smooth_rounds = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--mode", mode, "scan mode: forward or reverse_forward");
    cmd->add_option("--policy", policy, "root/scan policy: fifo, priority or random");
    cmd->add_option("--phase2-policy", phase2_policy,
                    "policy for the second phase (defaults to --policy)");
    cmd->add_option("--phases", phases,
                    "one = single pass, two = lower-bound pass first");
    cmd->add_flag("--generalized", generalized, "apply arc multipliers to transfers");
    cmd->add_option("--epsilon", epsilon, "saturation tolerance in generalized mode");
    cmd->add_option("--seed", seed, "seed for the random policy");
    cmd->add_option("--smooth-self", smooth_self, "priority smoothing self weight");
    cmd->add_option("--smooth-neighbor", smooth_neighbor,
                    "priority smoothing neighbor weight");
    cmd->add_option("--smooth-rounds", smooth_rounds, "priority smoothing rounds");
  }

  aep::SolveConfig to_config() const {
    aep::SolveConfig config;
    if (mode == "forward")
      config.mode = aep::ScanMode::ForwardOnly;
    else if (mode == "reverse_forward" || mode == "reverse-forward")
      config.mode = aep::ScanMode::ReverseThenForward;
    else
      throw CLI::ValidationError("--mode", "expected forward or reverse-forward");

    auto parse_policy = [](const std::string& name, const char* flag) {
      if (name == "fifo") return aep::Policy::Fifo;
      if (name == "priority") return aep::Policy::Priority;
      if (name == "random") return aep::Policy::Random;
      throw CLI::ValidationError(flag, "expected fifo, priority or random");
    };
    config.policy = parse_policy(policy, "--policy");
    if (!phase2_policy.empty())
      config.phase2_policy = parse_policy(phase2_policy, "--phase2-policy");
    if (phases == "1" || phases == "one")
      config.phases = 1;
    else if (phases == "2" || phases == "two")
      config.phases = 2;
    else
      throw CLI::ValidationError("--phases", "expected one or two");
    config.generalized = generalized;
    config.epsilon = epsilon;
    config.seed = seed;
    if (smooth_rounds > 0 || smooth_neighbor > 0.0)
      config.smoothing = aep::Smoothing{smooth_self, smooth_neighbor, smooth_rounds};
    return config;
  }
};

int cmd_generate(const aep::GeneratorParams& params, const std::string& format,
                 const std::string& output) {
  aep::Instance inst = aep::generate_random(params);
  write_output(output, aep::serialize_instance(inst, format_of(format)));
  auto [net_nodes, net_arcs] = aep::compute_size(inst);
  // The summary is a report, not an artifact: it must never mix into an
  // instance that is being piped onward.
  std::ostream& summary = output.empty() || output == "-" ? std::cerr : std::cout;
  summary << "generated " << inst.node_count << " nodes, " << inst.assets.size()
          << " assets; network " << net_nodes << " nodes / " << net_arcs << " arcs\n";
  return kOk;
}

void print_report(const aep::Solution& sol, const aep::Instance& inst) {
  std::cout << aep::render_report(sol, inst);
  std::cout << "stats: breakthroughs " << sol.stats.breakthroughs << ", failed scans "
            << sol.stats.failed_scans << ", scanned nodes " << sol.stats.scanned_nodes
            << ", iterations " << sol.stats.iterations << ", phase-1 cycles "
            << sol.stats.phase1_cycles << "\n";
}

int cmd_solve(const std::string& input, const std::string& format, const SolverFlags& flags,
              const std::string& output, bool report) {
  aep::Instance inst = load_instance(input, format);
  aep::Solution sol = aep::solve(inst, flags.to_config());
  const bool to_file = !output.empty() && output != "-";
  if (to_file) {
    write_output(output, aep::solution_to_json(sol, inst));
    print_report(sol, inst);
  } else if (report) {
    print_report(sol, inst);
  } else {
    write_output(output, aep::solution_to_json(sol, inst));
  }
  return kOk;
}

int cmd_verify(const std::string& instance_path, const std::string& solution_path,
               const std::string& format, bool generalized) {
  aep::Instance inst = load_instance(instance_path, format);
  aep::Solution sol = aep::parse_solution(read_input(solution_path), inst);
  aep::VerificationReport report = aep::verify_solution(
      inst, sol, generalized ? aep::VerifyMode::Generalized : aep::VerifyMode::Basic);
  for (const aep::FamilyResult& f : report.families) {
    if (f.pass)
      std::cout << f.family << ": pass\n";
    else
      std::cout << f.family << ": fail - " << f.witness << "\n";
  }
  for (const std::string& note : report.notes) std::cout << "note: " << note << "\n";
  if (report.pass()) {
    std::cout << "verification passed\n";
    return kOk;
  }
  std::cout << "verification failed\n";
  return kDomainError;
}

double run_comparison(const aep::Instance& inst, const SolverFlags& flags,
                      aep::Objective objective, const char* label) {
  aep::Solution sol = aep::solve(inst, flags.to_config());
  aep::ExchangeNetwork net = aep::build_network(inst, true);
  aep::ExactResult exact = aep::solve_exact(inst, net, objective);

  double heuristic = objective == aep::Objective::Unit
                         ? sol.objective_units
                         : sol.objective_weighted.value_or(sol.objective_units);
  if (heuristic > exact.value + 1e-9)
    throw std::invalid_argument("heuristic value " + std::to_string(heuristic) +
                                " exceeds the exact optimum " +
                                std::to_string(exact.value));
  double ratio = exact.value > 0.0 ? heuristic / exact.value : 1.0;
  std::printf("%sheuristic %g / optimum %g / ratio %.3f\n", label, heuristic, exact.value,
              ratio);
  return ratio;
}

int cmd_compare(const std::string& input, const std::string& format,
                const SolverFlags& flags, const std::string& objective_name, int trials,
                aep::GeneratorParams params, int max_nodes) {
  aep::Objective objective =
      objective_name == "weighted" ? aep::Objective::Weighted : aep::Objective::Unit;

  if (trials <= 0) {
    aep::Instance inst = load_instance(input, format);
    if (inst.node_count > max_nodes) {
      std::cerr << "instance too large for the exact oracle (" << max_nodes
                << "-node limit; raise with --max-nodes)\n";
      return kUsageError;
    }
    run_comparison(inst, flags, objective, "");
    return kOk;
  }

  if (params.node_count > max_nodes) {
    std::cerr << "instance too large for the exact oracle (" << max_nodes
              << "-node limit; raise with --max-nodes)\n";
    return kUsageError;
  }
  std::mt19937_64 meta(params.seed);
  double sum = 0.0, worst = 1.0;
  for (int t = 1; t <= trials; ++t) {
    aep::GeneratorParams trial_params = params;
    trial_params.seed = meta();
    aep::Instance inst = aep::generate_random(trial_params);
    char label[32];
    std::snprintf(label, sizeof label, "trial %d: ", t);
    double ratio = run_comparison(inst, flags, objective, label);
    sum += ratio;
    worst = std::min(worst, ratio);
  }
  std::printf("mean ratio %.3f, min ratio %.3f\n", sum / trials, worst);
  return kOk;
}

int cmd_export(const std::string& input, const std::string& format,
               const std::string& objective_name, bool keep_all, bool edges,
               const std::string& output) {
  aep::Instance inst = load_instance(input, format);
  aep::ExchangeNetwork net = aep::build_network(inst, !keep_all);
  if (edges) {
    write_output(output, aep::dump_edge_list(net, inst));
    return kOk;
  }
  aep::Objective objective =
      objective_name == "weighted" ? aep::Objective::Weighted : aep::Objective::Unit;
  write_output(output, aep::export_dimacs(net, objective));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asset exchange toolkit: generate, solve, verify, compare, export"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "emit a random instance");
  aep::GeneratorParams gen_params;
  std::string gen_format = "json", gen_output;
  double lower_prob = 0.0;
  generate->add_option("--nodes", gen_params.node_count, "participant count");
  generate->add_option("--assets", gen_params.asset_count, "asset count");
  generate->add_option("--density", gen_params.edge_density, "edge probability (0,1]");
  generate->add_option("--min-side", gen_params.min_assets_per_side,
                       "min assets offered/desired per node");
  generate->add_option("--max-side", gen_params.max_assets_per_side,
                       "max assets offered/desired per node");
  generate->add_option("--recv-max", gen_params.recv_upper_max, "max receive cap");
  generate->add_option("--send-max", gen_params.send_upper_max, "max send cap");
  generate->add_option("--cap-max", gen_params.node_cap_max, "max node cap");
  generate->add_option("--lower-prob", lower_prob,
                       "chance a receive spec gets a lower bound");
  generate->add_option("--seed", gen_params.seed, "generator seed");
  generate->add_option("--format", gen_format, "json or text");
  generate->add_option("-o,--output", gen_output, "output file (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "run the chaining solver");
  std::string solve_input = "-", solve_format = "json", solve_output;
  bool solve_report = false;
  SolverFlags solve_flags;
  solve->add_option("-i,--input", solve_input, "instance file (default stdin)");
  solve->add_option("--format", solve_format, "json or text");
  solve_flags.attach(solve);
  solve->add_flag("--report", solve_report, "print a cycle report instead of JSON");
  solve->add_option("-o,--output", solve_output, "output file (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "check a solution against an instance");
  std::string verify_instance, verify_solution, verify_format = "json";
  bool verify_generalized = false;
  verify->add_option("-i,--instance", verify_instance, "instance file")->required();
  verify->add_option("-s,--solution", verify_solution, "solution file")->required();
  verify->add_option("--format", verify_format, "instance format: json or text");
  verify->add_flag("--generalized", verify_generalized, "verify with arc multipliers");

  // compare
  auto* compare = app.add_subcommand("compare", "heuristic vs exact optimum");
  std::string compare_input, compare_format = "json", compare_objective = "unit";
  int compare_trials = 0, compare_max_nodes = 50;
  SolverFlags compare_flags;
  aep::GeneratorParams compare_params;
  compare->add_option("-i,--input", compare_input, "instance file");
  compare->add_option("--format", compare_format, "json or text");
  compare->add_option("--objective", compare_objective, "unit or weighted");
  compare_flags.attach(compare);
  compare->add_option("--trials", compare_trials,
                      "compare on this many random instances instead of --input");
  compare->add_option("--nodes", compare_params.node_count, "trial participant count");
  compare->add_option("--assets", compare_params.asset_count, "trial asset count");
  compare->add_option("--density", compare_params.edge_density, "trial edge probability");
  compare->add_option("--max-nodes", compare_max_nodes, "exact-oracle size guard");

  // export
  auto* export_cmd = app.add_subcommand("export", "write the network in DIMACS form");
  std::string export_input, export_format = "json", export_objective = "unit",
              export_output;
  bool export_keep_all = false, export_edges = false;
  export_cmd->add_option("-i,--input", export_input, "instance file")->required();
  export_cmd->add_option("--format", export_format, "json or text");
  export_cmd->add_option("--objective", export_objective, "unit or weighted");
  export_cmd->add_flag("--keep-all", export_keep_all, "skip admissibility pruning");
  export_cmd->add_flag("--edges", export_edges, "annotated edge list instead of DIMACS");
  export_cmd->add_option("-o,--output", export_output, "output file (default stdout)");

  try {
    app.parse(argc, argv);

    if (generate->parsed()) {
      if (gen_params.node_count < 1) {
        std::cerr << "error: nodes must be >= 1\n";
        return kUsageError;
      }
      gen_params.lower_bound_probability = lower_prob;
      return cmd_generate(gen_params, gen_format, gen_output);
    }
    if (solve->parsed())
      return cmd_solve(solve_input, solve_format, solve_flags, solve_output, solve_report);
    if (verify->parsed())
      return cmd_verify(verify_instance, verify_solution, verify_format,
                        verify_generalized);
    if (compare->parsed()) {
      compare_params.seed = compare_flags.seed;  // one --seed drives trials and solver
      return cmd_compare(compare_input, compare_format, compare_flags, compare_objective,
                         compare_trials, compare_params, compare_max_nodes);
    }
    if (export_cmd->parsed())
      return cmd_export(export_input, export_format, export_objective, export_keep_all,
                        export_edges, export_output);
    return kUsageError;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  } catch (const aep::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kDomainError;
  }
}
