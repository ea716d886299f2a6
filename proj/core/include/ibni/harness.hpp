#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ibni/ast.hpp"
#include "ibni/checker.hpp"
#include "ibni/driver_config.hpp"
#include "ibni/errors.hpp"
#include "ibni/interpreter.hpp"
#include "ibni/policy.hpp"
#include "ibni/symbolic.hpp"

namespace ibni::harness {

/// One row of the verdict matrix.
struct BenchmarkCase {
  std::string app;      // bump | loctoggle | contacts | whereru
  std::string variant;  // secure | insecure1 | insecure2
  int min_depth = 0;
  bool expect_secure = true;

  std::string id() const { return app + "/" + variant; }
};

/// The twelve cases in matrix order.
const std::vector<BenchmarkCase>& benchmark_cases();
/// Throws Error for an unknown app or variant.
const BenchmarkCase& find_case(const std::string& app, const std::string& variant);

/// IBNI_CORPUS_DIR when set, otherwise the corpus the library was built with.
std::filesystem::path default_corpus_dir();

/// Program, policy and driver of one case.
struct LoadedCase {
  lang::Program program;
  policy::Policy policy;
  sym::DriverConfig driver;
};

/// Reads `<corpus>/<app>/<variant>.ibl`, `policy.pol` and `driver.drv`.
LoadedCase load_case(const BenchmarkCase& c, const std::filesystem::path& corpus);
std::string read_file(const std::filesystem::path& path);

/// A pipeline failure tagged with the stage that raised it. The original
/// exception is nested.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const std::string& message)
      : Error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct PipelineOptions {
  bool prune = true;
  smt::SolverOptions solver;
  std::size_t path_budget = 1'000'000;
};

struct ExperimentStats {
  std::size_t paths = 0;  // traces at full depth
  std::size_t nodes = 0;  // traces checked, all prefixes included
  std::uint64_t feasibility_queries = 0;
  check::CheckStats check;
  double exploration_seconds = 0.0;
  double analysis_seconds = 0.0;
};

struct PipelineResult {
  check::Verdict verdict;
  ExperimentStats stats;
};

/// sym_exec followed by check_ibni. Errors are rethrown as PipelineError
/// with stage "exploration" or "analysis".
PipelineResult run_pipeline(const LoadedCase& loaded, int depth, const PipelineOptions& options = {});

struct CaseResult {
  BenchmarkCase bench;
  int depth = 0;
  check::Verdict verdict;
  ExperimentStats stats;
  /// Empty on success; otherwise the pipeline error.
  std::string error;

  bool matches() const { return error.empty() && verdict.secure == bench.expect_secure; }
};

CaseResult run_case(const BenchmarkCase& c, int depth, const PipelineOptions& options = {},
                    const std::filesystem::path& corpus = default_corpus_dir());

/// Every case at its minimum depth (or at min_depth + depth_offset).
std::vector<CaseResult> run_matrix(const PipelineOptions& options = {},
                                   const std::filesystem::path& corpus = default_corpus_dir(),
                                   int depth_offset = 0);

struct ScalingPoint {
  int depth = 0;
  std::size_t paths = 0;
  double seconds = 0.0;  // median over samples
};

struct ScalingSeries {
  std::string app;
  std::string variant;
  std::vector<ScalingPoint> points;
  /// The wall-clock budget ran out before max_depth.
  bool truncated = false;
};

struct ScalingOptions {
  int samples = 5;
  /// Each sample repeats the pipeline until at least this much time passed.
  double min_sample_seconds = 0.005;
  /// Total budget; the series stops at the first depth that exceeds it.
  double budget_seconds = 60.0;
  PipelineOptions pipeline;
};

/// Depth 1..max_depth (depth 0 first when include_zero).
ScalingSeries run_scaling(const BenchmarkCase& c, int max_depth, const ScalingOptions& options = {},
                          const std::filesystem::path& corpus = default_corpus_dir(), bool include_zero = false);

/// Input script that drives the interpreter along a concrete trace: GUI
/// events become injections and other secret events become secret answers.
interp::InputScript script_from_trace(const lang::Trace& t, const sym::DriverConfig& driver);

struct ReplayResult {
  lang::Trace replay1;
  lang::Trace replay2;
  bool reproduced1 = false;
  bool reproduced2 = false;
  /// Literal re-check of the definition on the replayed traces.
  bool violates = false;

  bool ok() const { return reproduced1 && reproduced2 && violates; }
};

/// Runs both traces of a violation in the interpreter.
ReplayResult replay_counterexample(const LoadedCase& loaded, const check::Verdict& v);

/// key=value records.
std::string to_text(const CaseResult& r);
std::string to_text(const ScalingSeries& s);

}  // namespace ibni::harness
