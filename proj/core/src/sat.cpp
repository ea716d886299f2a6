#include "ibni/sat.hpp"

#include <algorithm>

namespace ibni::smt {

namespace {

// Luby sequence: 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
std::uint64_t luby(std::uint64_t i) {
  std::uint64_t size = 1;
  int seq = 0;
  while (size < i + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != i) {
    size = (size - 1) >> 1;
    --seq;
    i = i % size;
  }
  return std::uint64_t{1} << seq;
}

}  // namespace

std::uint32_t SatSolver::new_var() {
  auto v = static_cast<std::uint32_t>(assign_.size());
  assign_.push_back(kUndef);
  level_.push_back(0);
  reason_.push_back(-1);
  phase_.push_back(false);
  activity_.push_back(0.0);
  seen_.push_back(false);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_.emplace_back(0.0, v);
  std::push_heap(heap_.begin(), heap_.end());
  return v;
}

void SatSolver::attach(int ci) {
  const auto& c = clauses_[static_cast<std::size_t>(ci)];
  watches_[c[0]].push_back(ci);
  watches_[c[1]].push_back(ci);
}

void SatSolver::add_clause(std::vector<Lit> lits) {
  if (inconsistent_) return;
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  std::vector<Lit> kept;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i + 1 < lits.size() && lits[i + 1] == negate(lits[i])) return;  // tautology
    // Clauses are only added at level 0, so assigned literals are final.
    std::int8_t v = lit_value(lits[i]);
    if (v == kTrue) return;
    if (v == kFalse) continue;
    kept.push_back(lits[i]);
  }
  if (kept.empty()) {
    inconsistent_ = true;
    return;
  }
  if (kept.size() == 1) {
    enqueue(kept[0], -1);
    if (propagate() >= 0) inconsistent_ = true;
    return;
  }
  clauses_.push_back(std::move(kept));
  attach(static_cast<int>(clauses_.size()) - 1);
}

void SatSolver::enqueue(Lit l, int reason) {
  std::uint32_t v = var_of(l);
  assign_[v] = static_cast<std::int8_t>((l & 1U) ? kFalse : kTrue);
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(l);
}

int SatSolver::propagate() {
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    Lit false_lit = negate(p);
    auto& ws = watches_[false_lit];
    std::size_t keep = 0;
    for (std::size_t wi = 0; wi < ws.size(); ++wi) {
      int ci = ws[wi];
      auto& c = clauses_[static_cast<std::size_t>(ci)];
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      if (lit_value(c[0]) == kTrue) {
        ws[keep++] = ci;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (lit_value(c[k]) != kFalse) {
          std::swap(c[1], c[k]);
          watches_[c[1]].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[keep++] = ci;
      if (lit_value(c[0]) == kFalse) {
        for (std::size_t rest = wi + 1; rest < ws.size(); ++rest) ws[keep++] = ws[rest];
        ws.resize(keep);
        return ci;
      }
      enqueue(c[0], ci);
    }
    ws.resize(keep);
  }
  return -1;
}

void SatSolver::bump(std::uint32_t v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
    heap_.clear();
    for (std::uint32_t u = 0; u < num_vars(); ++u) heap_.emplace_back(activity_[u], u);
    std::make_heap(heap_.begin(), heap_.end());
    return;
  }
  heap_.emplace_back(activity_[v], v);
  std::push_heap(heap_.begin(), heap_.end());
}

void SatSolver::analyze(int conflict, std::vector<Lit>& learnt, int& backjump) {
  learnt.clear();
  learnt.push_back(0);  // placeholder for the asserting literal
  int pending = 0;
  Lit p = 0;
  bool have_p = false;
  std::size_t idx = trail_.size();
  int ci = conflict;
  std::vector<std::uint32_t> touched;
  do {
    const auto& c = clauses_[static_cast<std::size_t>(ci)];
    for (std::size_t k = have_p ? 1 : 0; k < c.size(); ++k) {
      Lit q = c[k];
      std::uint32_t v = var_of(q);
      if (seen_[v] || level_[v] == 0) continue;
      seen_[v] = true;
      touched.push_back(v);
      bump(v);
      if (level_[v] >= decision_level()) {
        ++pending;
      } else {
        learnt.push_back(q);
      }
    }
    do {
      p = trail_[--idx];
    } while (!seen_[var_of(p)]);
    have_p = true;
    ci = reason_[var_of(p)];
    seen_[var_of(p)] = false;
    --pending;
    // Reason clauses keep their implied literal at position 0, since a
    // clause whose first literal is true is never rewatched.
  } while (pending > 0);
  learnt[0] = negate(p);
  for (auto v : touched) seen_[v] = false;

  backjump = 0;
  if (learnt.size() > 1) {
    std::size_t max_i = 1;
    for (std::size_t i = 2; i < learnt.size(); ++i) {
      if (level_[var_of(learnt[i])] > level_[var_of(learnt[max_i])]) max_i = i;
    }
    std::swap(learnt[1], learnt[max_i]);
    backjump = level_[var_of(learnt[1])];
  }
  var_inc_ *= 1.0 / 0.95;
}

void SatSolver::backtrack(int level) {
  if (decision_level() <= level) return;
  for (std::size_t i = trail_.size(); i > trail_lim_[static_cast<std::size_t>(level)]; --i) {
    std::uint32_t v = var_of(trail_[i - 1]);
    phase_[v] = assign_[v] == kTrue;
    assign_[v] = kUndef;
    reason_[v] = -1;
    heap_.emplace_back(activity_[v], v);
    std::push_heap(heap_.begin(), heap_.end());
  }
  trail_.resize(trail_lim_[static_cast<std::size_t>(level)]);
  trail_lim_.resize(static_cast<std::size_t>(level));
  qhead_ = trail_.size();
}

bool SatSolver::pick_branch(Lit& out) {
  while (!heap_.empty()) {
    std::pop_heap(heap_.begin(), heap_.end());
    auto [act, v] = heap_.back();
    heap_.pop_back();
    if (assign_[v] != kUndef) continue;
    out = phase_[v] ? pos(v) : neg(v);
    return true;
  }
  for (std::uint32_t v = 0; v < num_vars(); ++v) {
    if (assign_[v] == kUndef) {
      out = phase_[v] ? pos(v) : neg(v);
      return true;
    }
  }
  return false;
}

SatSolver::Result SatSolver::solve(std::uint64_t max_conflicts) {
  if (inconsistent_) return Result::Unsat;
  if (propagate() >= 0) {
    inconsistent_ = true;
    return Result::Unsat;
  }
  std::uint64_t restart_index = 0;
  std::uint64_t budget_start = conflicts_;
  std::uint64_t next_restart = conflicts_ + 64 * luby(restart_index);
  std::vector<Lit> learnt;
  for (;;) {
    int conflict = propagate();
    if (conflict >= 0) {
      ++conflicts_;
      if (decision_level() == 0) {
        inconsistent_ = true;
        return Result::Unsat;
      }
      int backjump = 0;
      analyze(conflict, learnt, backjump);
      backtrack(backjump);
      if (learnt.size() == 1) {
        enqueue(learnt[0], -1);
      } else {
        clauses_.push_back(learnt);
        int ci = static_cast<int>(clauses_.size()) - 1;
        attach(ci);
        enqueue(learnt[0], ci);
      }
      if (conflicts_ - budget_start >= max_conflicts) {
        backtrack(0);
        return Result::Unknown;
      }
      continue;
    }
    if (conflicts_ >= next_restart) {
      ++restart_index;
      next_restart = conflicts_ + 64 * luby(restart_index);
      backtrack(0);
    }
    Lit decision = 0;
    if (!pick_branch(decision)) {
      model_.assign(num_vars(), false);
      for (std::uint32_t v = 0; v < num_vars(); ++v) model_[v] = assign_[v] == kTrue;
      backtrack(0);
      return Result::Sat;
    }
    trail_lim_.push_back(trail_.size());
    enqueue(decision, -1);
  }
}

}  // namespace ibni::smt
