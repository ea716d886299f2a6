#include "ibni/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <sstream>

#include "ibni/parser.hpp"

#ifndef IBNI_DEFAULT_CORPUS_DIR
#define IBNI_DEFAULT_CORPUS_DIR "corpus"
#endif

namespace ibni::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::set<std::string> gui_channels(const sym::DriverConfig& d) {
  std::set<std::string> out;
  for (const auto& g : d.gui) out.insert(g.name);
  return out;
}

[[noreturn]] void rethrow_in_stage(const std::string& stage) {
  try {
    throw;
  } catch (const std::exception& e) {
    std::throw_with_nested(PipelineError(stage, e.what()));
  }
}

}  // namespace

const std::vector<BenchmarkCase>& benchmark_cases() {
  static const std::vector<BenchmarkCase> cases = {
      {"bump", "secure", 3, true},       {"bump", "insecure1", 5, false},
      {"bump", "insecure2", 4, false},   {"loctoggle", "secure", 2, true},
      {"loctoggle", "insecure1", 2, false}, {"loctoggle", "insecure2", 3, false},
      {"contacts", "secure", 2, true},   {"contacts", "insecure1", 2, false},
      {"contacts", "insecure2", 2, false}, {"whereru", "secure", 3, true},
      {"whereru", "insecure1", 3, false}, {"whereru", "insecure2", 2, false},
  };
  return cases;
}

const BenchmarkCase& find_case(const std::string& app, const std::string& variant) {
  for (const auto& c : benchmark_cases()) {
    if (c.app == app && c.variant == variant) return c;
  }
  throw Error("unknown benchmark case '" + app + "/" + variant + "'");
}

std::filesystem::path default_corpus_dir() {
  if (const char* env = std::getenv("IBNI_CORPUS_DIR"); env && *env) return env;
  return IBNI_DEFAULT_CORPUS_DIR;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

LoadedCase load_case(const BenchmarkCase& c, const std::filesystem::path& corpus) {
  auto dir = corpus / c.app;
  LoadedCase out;
  try {
    out.program = lang::parse_program(read_file(dir / (c.variant + ".ibl")));
    out.policy = policy::Policy::parse(read_file(dir / "policy.pol"));
    out.driver = sym::DriverConfig::parse(read_file(dir / "driver.drv"));
    out.driver.validate();
  } catch (...) {
    rethrow_in_stage("load " + c.id());
  }
  return out;
}

PipelineResult run_pipeline(const LoadedCase& loaded, int depth, const PipelineOptions& options) {
  PipelineResult out;
  sym::DriverConfig cfg = loaded.driver;
  cfg.depth = depth;

  sym::ExecOptions exec_options;
  exec_options.path_budget = options.path_budget;
  exec_options.solver = options.solver;
  sym::ExecResult exec;
  auto start = Clock::now();
  try {
    cfg.validate();
    exec = sym::sym_exec(loaded.program, cfg, exec_options);
  } catch (...) {
    rethrow_in_stage("exploration");
  }
  out.stats.exploration_seconds = seconds_since(start);
  out.stats.paths = exec.paths();
  out.stats.nodes = exec.nodes.size();
  out.stats.feasibility_queries = exec.feasibility_queries;

  check::CheckOptions check_options;
  check_options.prune = options.prune;
  check_options.solver = options.solver;
  start = Clock::now();
  try {
    out.verdict = check::check_ibni(exec.nodes, loaded.policy, gui_channels(cfg), check_options, &out.stats.check);
  } catch (...) {
    rethrow_in_stage("analysis");
  }
  out.stats.analysis_seconds = seconds_since(start);
  return out;
}

CaseResult run_case(const BenchmarkCase& c, int depth, const PipelineOptions& options,
                    const std::filesystem::path& corpus) {
  CaseResult r;
  r.bench = c;
  r.depth = depth;
  try {
    auto loaded = load_case(c, corpus);
    auto res = run_pipeline(loaded, depth, options);
    r.verdict = std::move(res.verdict);
    r.stats = res.stats;
  } catch (const Error& e) {
    r.error = e.what();
  }
  return r;
}

std::vector<CaseResult> run_matrix(const PipelineOptions& options, const std::filesystem::path& corpus,
                                   int depth_offset) {
  std::vector<CaseResult> out;
  for (const auto& c : benchmark_cases()) {
    out.push_back(run_case(c, std::max(0, c.min_depth + depth_offset), options, corpus));
  }
  return out;
}

ScalingSeries run_scaling(const BenchmarkCase& c, int max_depth, const ScalingOptions& options,
                          const std::filesystem::path& corpus, bool include_zero) {
  ScalingSeries series;
  series.app = c.app;
  series.variant = c.variant;
  auto loaded = load_case(c, corpus);
  auto budget_start = Clock::now();
  for (int depth = include_zero ? 0 : 1; depth <= max_depth; ++depth) {
    if (seconds_since(budget_start) > options.budget_seconds) {
      series.truncated = true;
      break;
    }
    ScalingPoint point;
    point.depth = depth;
    std::vector<double> samples;
    for (int s = 0; s < std::max(1, options.samples); ++s) {
      auto start = Clock::now();
      int reps = 0;
      do {
        auto res = run_pipeline(loaded, depth, options.pipeline);
        point.paths = res.stats.paths;
        ++reps;
      } while (seconds_since(start) < options.min_sample_seconds);
      samples.push_back(seconds_since(start) / reps);
      if (seconds_since(budget_start) > options.budget_seconds) break;
    }
    std::sort(samples.begin(), samples.end());
    point.seconds = samples[samples.size() / 2];
    series.points.push_back(point);
  }
  return series;
}

interp::InputScript script_from_trace(const lang::Trace& t, const sym::DriverConfig& driver) {
  interp::InputScript script;
  for (const auto& e : t) {
    if (driver.is_gui(e.name)) {
      script.injections.push_back(e);
    } else if (driver.is_secret(e.name)) {
      script.secrets[e.name].push_back(e.value);
    }
  }
  return script;
}

ReplayResult replay_counterexample(const LoadedCase& loaded, const check::Verdict& v) {
  ReplayResult r;
  if (v.secure) return r;
  r.replay1 = interp::run_program(loaded.program, script_from_trace(v.trace1, loaded.driver)).trace;
  r.replay2 = interp::run_program(loaded.program, script_from_trace(v.trace2, loaded.driver)).trace;
  r.reproduced1 = r.replay1 == v.trace1;
  r.reproduced2 = r.replay2 == v.trace2;
  policy::Level s = loaded.policy.lattice.find(v.level);
  r.violates = check::violates_at(loaded.policy, s, r.replay1, r.replay2);
  return r;
}

std::string to_text(const CaseResult& r) {
  std::ostringstream os;
  os << "case=" << r.bench.id() << " depth=" << r.depth
     << " expected=" << (r.bench.expect_secure ? "secure" : "violation");
  if (!r.error.empty()) {
    os << " verdict=error error=\"" << r.error << "\"";
  } else {
    os << " verdict=" << (r.verdict.secure ? "secure" : "violation");
    if (!r.verdict.secure) os << " level=" << r.verdict.level;
  }
  os << " match=" << (r.matches() ? "yes" : "no") << " paths=" << r.stats.paths << " traces=" << r.stats.nodes
     << " pairs=" << r.stats.check.pairs << " levels=" << r.stats.check.levels
     << " queries_issued=" << r.stats.check.queries_issued << " queries_pruned=" << r.stats.check.queries_pruned
     << " pruning=" << (r.stats.check.pruning ? "on" : (r.stats.check.pruning_disabled ? "disabled" : "off"))
     << " exploration_ms=" << r.stats.exploration_seconds * 1e3
     << " analysis_ms=" << r.stats.analysis_seconds * 1e3;
  return os.str();
}

std::string to_text(const ScalingSeries& s) {
  std::ostringstream os;
  for (const auto& p : s.points) {
    os << "case=" << s.app << "/" << s.variant << " depth=" << p.depth << " paths=" << p.paths
       << " time_ms=" << p.seconds * 1e3 << "\n";
  }
  if (s.truncated) os << "case=" << s.app << "/" << s.variant << " truncated=budget\n";
  return os.str();
}

}  // namespace ibni::harness
