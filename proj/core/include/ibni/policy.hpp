#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ibni/formula.hpp"
#include "ibni/lattice.hpp"
#include "ibni/ltl.hpp"

namespace ibni::policy {

/// phi |> S
struct Condition {
  FormulaPtr formula;
  Level level = 0;
};

struct Policy {
  Lattice lattice;
  std::vector<LevelEquiv> equivs;  // indexed by Level
  std::vector<Condition> conditions;

  /// Statements end with ';': `lattice A <= B <= ...`, `equiv L = eq|any|mask N`
  /// and `FORMULA |> LEVEL`. Without an equiv statement Low and intermediate
  /// levels use equality and High relates everything.
  static Policy parse(std::string_view text);
  std::string to_text() const;

  const LevelEquiv& equiv(Level l) const { return equivs[static_cast<std::size_t>(l)]; }
};

/// Output channels are always declassified.
bool is_output(const std::string& channel);

/// Level of every position of `t`. Throws SymbolicTruthError when a
/// condition's truth at an input position depends on a symbolic value.
std::vector<Level> levels(const ObsTrace& t, const Policy& p);
Level level(const ObsTrace& t, const Policy& p, std::size_t i);

/// The S-view of a trace with empty events dropped. `positions` are indices
/// into the original trace.
struct FilteredTrace {
  std::vector<std::size_t> positions;
  ObsTrace events;
};

FilteredTrace filter(const ObsTrace& t, const Policy& p, Level s, bool inputs_only);
/// Same, reusing precomputed levels.
FilteredTrace filter_with_levels(const ObsTrace& t, const std::vector<Level>& lv, const Lattice& lattice,
                                 Level s, bool inputs_only);

/// a =_S b
bool equiv(const Policy& p, Level s, const lang::Primitive& a, const lang::Primitive& b);

/// Concrete view comparison: equal length, pointwise equal names and values
/// related by =_S.
bool views_equivalent(const Policy& p, Level s, const FilteredTrace& a, const FilteredTrace& b);

}  // namespace ibni::policy
