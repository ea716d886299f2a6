#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ibni/ast.hpp"
#include "ibni/driver_config.hpp"
#include "ibni/solver.hpp"
#include "ibni/sym_value.hpp"

namespace ibni::sym {

/// Name of the k-th secret variable on a path (k starts at 1).
std::string secret_var_name(int k);

/// Per-path supply of fresh secret variables.
class SecretSource {
 public:
  explicit SecretSource(const DriverConfig& cfg) : cfg_(&cfg) {}
  /// A never-before-used variable for `channel` and the event channel!var.
  /// Throws EvalError when `channel` is not declared secret.
  std::pair<SymValue, SymEvent> fresh(const std::string& channel);
  int used() const { return used_; }

 private:
  const DriverConfig* cfg_;
  int used_ = 0;
};

struct BranchResult {
  bool then_feasible = false;
  bool else_feasible = false;
};

/// Feasibility of Phi && cond and Phi && !cond.
BranchResult branch(const smt::Term& cond, const std::vector<smt::Term>& phi, smt::Solver& solver);

/// A trace at a round boundary: depth 0 is the state after onCreate, depth r
/// after r injected events. `parent` indexes the node one round earlier.
struct PathNode {
  SymTrace trace;
  std::vector<smt::Term> pc;
  int depth = 0;
  int parent = -1;

  /// Conjunction of `pc` (true when empty).
  smt::Term condition() const;
};

struct ExecOptions {
  /// Maximum number of live paths at any time; exceeding it aborts the run.
  std::size_t path_budget = 1'000'000;
  /// Handler dispatches allowed while draining the queue after one event.
  std::size_t max_drain_steps = 10'000;
  smt::SolverOptions solver;
};

struct ExecResult {
  std::vector<PathNode> nodes;  // parents precede children
  int depth = 0;
  std::uint64_t feasibility_queries = 0;
  double seconds = 0.0;

  /// Indices of the nodes at the full input depth.
  std::vector<std::size_t> leaves() const;
  std::size_t paths() const { return leaves().size(); }
};

/// Bounded exhaustive symbolic execution of `program` under the driver.
/// Throws PathBudgetError, StuckError, EvalError or solver errors.
ExecResult sym_exec(const lang::Program& program, const DriverConfig& cfg, const ExecOptions& options = {});

}  // namespace ibni::sym
