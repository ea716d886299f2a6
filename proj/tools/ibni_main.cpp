#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ibni/harness.hpp"
#include "ibni/parser.hpp"
#include "ibni/solver.hpp"

namespace {

using namespace ibni;

void print_error(const std::exception& e, int level = 0) {
  std::cerr << (level == 0 ? "error: " : "  caused by: ") << e.what() << "\n";
  try {
    std::rethrow_if_nested(e);
  } catch (const std::exception& inner) {
    print_error(inner, level + 1);
  }
}

struct SolverFlags {
  unsigned width = 8;
  std::string backend = "internal";
  std::string command;

  void add(CLI::App* app) {
    app->add_option("--width", width, "Initial bit width of symbolic variables")
        ->check(CLI::Range(1u, 32u));
    app->add_option("--solver", backend, "Satisfiability backend")
        ->check(CLI::IsMember({"internal", "external"}));
    app->add_option("--solver-cmd", command, "External solver command (default: IBNI_SMT_SOLVER or 'z3 -in')");
  }

  smt::SolverOptions options() const {
    smt::SolverOptions o;
    o.initial_width = width;
    if (backend == "external") {
      o.backend = smt::Backend::External;
      if (!command.empty()) {
        o.external_command = command;
      } else if (auto env = smt::external_solver_from_env()) {
        o.external_command = *env;
      } else {
        o.external_command = "z3 -in";
      }
    }
    return o;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interaction-based noninterference checker"};
  app.require_subcommand(1);

  std::string prog_path, script_path, driver_path, policy_path;
  int depth = -1;
  bool no_prune = false;
  std::string corpus = harness::default_corpus_dir().string();
  SolverFlags solver_flags;

  auto* run = app.add_subcommand("run", "Run a program concretely on an input script");
  run->add_option("program", prog_path)->required()->check(CLI::ExistingFile);
  run->add_option("--script", script_path, "Input script")->required()->check(CLI::ExistingFile);

  auto* symexec = app.add_subcommand("symexec", "Enumerate symbolic paths");
  symexec->add_option("program", prog_path)->required()->check(CLI::ExistingFile);
  symexec->add_option("--driver", driver_path)->required()->check(CLI::ExistingFile);
  symexec->add_option("--depth", depth, "Input depth (default: from the driver)");
  solver_flags.add(symexec);

  auto* check = app.add_subcommand("check", "Check a program against a policy");
  check->add_option("program", prog_path)->required()->check(CLI::ExistingFile);
  check->add_option("--driver", driver_path)->required()->check(CLI::ExistingFile);
  check->add_option("--policy", policy_path)->required()->check(CLI::ExistingFile);
  check->add_option("--depth", depth, "Input depth (default: from the driver)");
  check->add_flag("--no-prune", no_prune, "Disable trace-tree pruning");
  solver_flags.add(check);

  auto* matrix = app.add_subcommand("matrix", "Run all bundled cases at their minimum depths");
  matrix->add_option("--corpus", corpus, "Corpus directory")->check(CLI::ExistingDirectory);
  matrix->add_flag("--no-prune", no_prune, "Disable trace-tree pruning");
  int depth_offset = 0;
  matrix->add_option("--depth-offset", depth_offset, "Added to every case's minimum depth");
  solver_flags.add(matrix);

  std::string scaling_app, scaling_variant = "secure";
  int max_depth = 5;
  double budget = 60.0;
  auto* scaling = app.add_subcommand("scaling", "Depth against paths and time for one app");
  scaling->add_option("app", scaling_app)->required()->check(
      CLI::IsMember({"bump", "loctoggle", "contacts", "whereru"}));
  scaling->add_option("--variant", scaling_variant)->check(CLI::IsMember({"secure", "insecure1", "insecure2"}));
  scaling->add_option("--max-depth", max_depth)->required()->check(CLI::NonNegativeNumber);
  scaling->add_option("--budget", budget, "Wall-clock budget in seconds");
  scaling->add_option("--corpus", corpus, "Corpus directory")->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto program = lang::parse_program(harness::read_file(prog_path));
      auto script = interp::InputScript::parse(harness::read_file(script_path));
      auto res = interp::run_program(program, script);
      for (const auto& e : res.trace) std::cout << "event=" << e.to_string() << "\n";
      std::cout << "steps=" << res.steps << " truncated=" << (res.truncated ? "yes" : "no") << "\n";
      return 0;
    }

    if (*symexec) {
      auto program = lang::parse_program(harness::read_file(prog_path));
      auto cfg = sym::DriverConfig::parse(harness::read_file(driver_path));
      if (depth >= 0) cfg.depth = depth;
      cfg.validate();
      sym::ExecOptions options;
      options.solver = solver_flags.options();
      auto res = sym::sym_exec(program, cfg, options);
      std::size_t k = 0;
      for (std::size_t i : res.leaves()) {
        const auto& n = res.nodes[i];
        std::cout << "path=" << k++ << " trace=\"" << sym::to_string(n.trace) << "\" pc=\""
                  << n.condition().to_string() << "\"\n";
      }
      std::cout << "depth=" << res.depth << " paths=" << res.paths() << " nodes=" << res.nodes.size()
                << " feasibility_queries=" << res.feasibility_queries << " time_ms=" << res.seconds * 1e3 << "\n";
      return 0;
    }

    if (*check) {
      harness::LoadedCase loaded;
      loaded.program = lang::parse_program(harness::read_file(prog_path));
      loaded.policy = policy::Policy::parse(harness::read_file(policy_path));
      loaded.driver = sym::DriverConfig::parse(harness::read_file(driver_path));
      harness::PipelineOptions options;
      options.prune = !no_prune;
      options.solver = solver_flags.options();
      auto res = harness::run_pipeline(loaded, depth >= 0 ? depth : loaded.driver.depth, options);
      std::cout << res.verdict.to_text();
      const auto& st = res.stats;
      std::cout << "paths=" << st.paths << " traces=" << st.nodes << " pairs=" << st.check.pairs
                << " levels=" << st.check.levels << " queries_issued=" << st.check.queries_issued
                << " queries_pruned=" << st.check.queries_pruned
                << " pruning=" << (st.check.pruning ? "on" : (st.check.pruning_disabled ? "disabled" : "off"))
                << " exploration_ms=" << st.exploration_seconds * 1e3 << " analysis_ms=" << st.analysis_seconds * 1e3
                << "\n";
      return res.verdict.secure ? 0 : 2;
    }

    if (*matrix) {
      harness::PipelineOptions options;
      options.prune = !no_prune;
      options.solver = solver_flags.options();
      auto results = harness::run_matrix(options, corpus, depth_offset);
      int mismatches = 0;
      for (const auto& r : results) {
        std::cout << harness::to_text(r) << "\n";
        if (!r.matches()) ++mismatches;
      }
      std::cout << "summary cases=" << results.size() << " mismatches=" << mismatches << "\n";
      return mismatches == 0 ? 0 : 1;
    }

    if (*scaling) {
      harness::ScalingOptions options;
      options.budget_seconds = budget;
      auto series = harness::run_scaling(harness::find_case(scaling_app, scaling_variant), max_depth, options,
                                         corpus, true);
      std::cout << harness::to_text(series);
      return 0;
    }
  } catch (const std::exception& e) {
    print_error(e);
    return 1;
  }
  return 0;
}
