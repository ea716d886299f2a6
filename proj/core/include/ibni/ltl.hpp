#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ibni/formula.hpp"
#include "ibni/sym_value.hpp"
#include "ibni/trace.hpp"

namespace ibni::policy {

/// An event value as seen by the policy: concrete, or an opaque symbolic
/// value identified by its printed term. Identical keys denote equal values;
/// anything else involving a symbolic value is undetermined.
struct ObsValue {
  std::optional<lang::Primitive> concrete;
  std::string symbolic;

  static ObsValue of(const lang::Primitive& p) { return {p, {}}; }
  static ObsValue of(const sym::SymValue& v);
  bool is_concrete() const { return concrete.has_value(); }
  std::string to_string() const { return concrete ? concrete->to_string() : symbolic; }
  friend bool operator==(const ObsValue&, const ObsValue&) = default;
};

struct ObsEvent {
  std::string name;
  ObsValue value;
};

using ObsTrace = std::vector<ObsEvent>;

ObsTrace observe(const lang::Trace& t);
ObsTrace observe(const sym::SymTrace& t);

/// Kleene truth values.
enum class Tri { False, True, Unknown };

/// Values the quantifiers range over: those occurring in the trace plus the
/// constants of the formula, in first-occurrence order.
std::vector<ObsValue> quantifier_domain(const ObsTrace& t, const FormulaPtr& f);

/// Truth of `f` at every position of `t` (closed formulas only).
std::vector<Tri> evaluate_all(const ObsTrace& t, const FormulaPtr& f);

/// t, i |= f. Throws SymbolicTruthError when the answer depends on symbolic
/// values, and std::out_of_range when i is not a position of t.
bool models(const ObsTrace& t, std::size_t i, const FormulaPtr& f);

}  // namespace ibni::policy
