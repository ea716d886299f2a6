#pragma once

#include <cstdint>
#include <vector>

namespace ibni::smt {

/// Conflict-driven clause-learning SAT solver over CNF: two watched
/// literals, first-UIP learning, activity-based branching with phase saving
/// and Luby restarts.
class SatSolver {
 public:
  /// Literal encoding: 2 * var for the positive literal, 2 * var + 1 for its
  /// negation.
  using Lit = std::uint32_t;
  static Lit pos(std::uint32_t var) { return var << 1; }
  static Lit neg(std::uint32_t var) { return (var << 1) | 1U; }
  static Lit negate(Lit l) { return l ^ 1U; }
  static std::uint32_t var_of(Lit l) { return l >> 1; }

  enum class Result { Sat, Unsat, Unknown };

  std::uint32_t new_var();
  std::uint32_t num_vars() const { return static_cast<std::uint32_t>(assign_.size()); }
  std::size_t num_clauses() const { return clauses_.size(); }

  /// Adds a clause; duplicate literals and tautologies are handled.
  void add_clause(std::vector<Lit> lits);

  /// Unknown when `max_conflicts` is reached.
  Result solve(std::uint64_t max_conflicts);

  bool model_value(std::uint32_t var) const { return model_[var]; }
  std::uint64_t conflicts() const { return conflicts_; }

 private:
  enum : std::int8_t { kFalse = 0, kTrue = 1, kUndef = 2 };

  std::int8_t lit_value(Lit l) const {
    std::int8_t v = assign_[var_of(l)];
    if (v == kUndef) return kUndef;
    return static_cast<std::int8_t>(v ^ static_cast<std::int8_t>(l & 1U));
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void enqueue(Lit l, int reason);
  int propagate();  // returns conflicting clause index or -1
  void analyze(int conflict, std::vector<Lit>& learnt, int& backjump);
  void backtrack(int level);
  void bump(std::uint32_t var);
  bool pick_branch(Lit& out);
  void attach(int clause_index);

  std::vector<std::vector<Lit>> clauses_;
  std::vector<std::vector<int>> watches_;  // per literal: clauses watching it
  std::vector<std::int8_t> assign_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<bool> phase_;
  std::vector<double> activity_;
  std::vector<bool> seen_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  double var_inc_ = 1.0;
  bool inconsistent_ = false;
  std::uint64_t conflicts_ = 0;
  std::vector<std::pair<double, std::uint32_t>> heap_;
  std::vector<bool> model_;
};

}  // namespace ibni::smt
