#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ibni/term.hpp"

namespace ibni::smt {

/// Outcome of one satisfiability query. `model` assigns every free variable
/// of the query when `sat` holds.
struct CheckResult {
  bool sat = false;
  Model model;
  unsigned width = 32;  // width at which the answer was obtained
};

inline constexpr std::uint64_t kDefaultConflictBudget = 200000;

/// Decides `c` with every integer variable restricted to its low `width`
/// bits (higher bits zero) while all arithmetic stays 32-bit. A Sat model is
/// therefore a genuine 32-bit model; Unsat is relative to the width.
/// Throws SolverResourceError when the conflict budget is exhausted.
CheckResult check_sat(const Term& c, unsigned width,
                      std::uint64_t max_conflicts = kDefaultConflictBudget);

enum class Backend { Internal, External };

struct SolverOptions {
  Backend backend = Backend::Internal;
  unsigned initial_width = 8;
  /// Re-check an Unsat answer at the wider widths up to 32.
  bool escalate = true;
  std::uint64_t max_conflicts = kDefaultConflictBudget;
  /// Command line of an SMT-LIB v2 solver reading the script on stdin.
  /// Empty means the value of the IBNI_SMT_SOLVER environment variable.
  std::string external_command;
};

/// Widths tried for one query, in order.
std::vector<unsigned> escalation_widths(unsigned initial_width, bool escalate);

/// Query front end: internal search with width escalation, or an external
/// process. Counts the queries it answers.
class Solver {
 public:
  explicit Solver(SolverOptions options = {});

  CheckResult check(const Term& c);
  const SolverOptions& options() const { return options_; }
  std::uint64_t queries() const { return queries_.load(); }

 private:
  SolverOptions options_;
  std::atomic<std::uint64_t> queries_{0};
};

/// The command named by IBNI_SMT_SOLVER, if set and non-empty.
std::optional<std::string> external_solver_from_env();

/// Runs `command` with the SMT-LIB script of `c` on stdin and parses the
/// reply. Throws SolverProcessError on failure or an unparseable reply.
CheckResult check_sat_external(const Term& c, const std::string& command);

}  // namespace ibni::smt
