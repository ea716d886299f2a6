#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ibni/primitive.hpp"
#include "ibni/sym_value.hpp"
#include "ibni/term.hpp"

namespace ibni::policy {

/// Index of a lattice element.
using Level = int;

inline constexpr const char* kLow = "Low";
inline constexpr const char* kHigh = "High";

/// Finite security lattice with Low as bottom and High as top.
class Lattice {
 public:
  /// The two-point lattice Low <= High.
  Lattice();

  /// Builds the lattice from declared covering edges (a <= b). Low and High
  /// are always present. Throws PolicyError when the order is cyclic, Low is
  /// not the bottom, High is not the top, or some pair lacks a unique meet
  /// or join.
  static Lattice from_edges(const std::vector<std::pair<std::string, std::string>>& edges);

  std::size_t size() const { return names_.size(); }
  Level low() const { return 0; }
  Level high() const { return 1; }
  const std::string& name(Level l) const { return names_[static_cast<std::size_t>(l)]; }
  /// Throws PolicyError for unknown names.
  Level find(const std::string& name) const;
  bool contains(const std::string& name) const;

  bool leq(Level a, Level b) const { return leq_[idx(a, b)]; }
  Level meet(Level a, Level b) const { return meet_[idx(a, b)]; }
  Level join(Level a, Level b) const { return join_[idx(a, b)]; }

  /// Every element, ordered so that each element follows all elements below
  /// it (Low first, High last).
  const std::vector<Level>& ordered() const { return order_; }

 private:
  struct Empty {};
  explicit Lattice(Empty) {}

  std::size_t idx(Level a, Level b) const {
    return static_cast<std::size_t>(a) * names_.size() + static_cast<std::size_t>(b);
  }

  std::vector<std::string> names_;
  std::vector<bool> leq_;
  std::vector<Level> meet_;
  std::vector<Level> join_;
  std::vector<Level> order_;
};

/// The per-level equivalence on observed values.
struct LevelEquiv {
  enum class Kind { Equal, Mask, Any };
  Kind kind = Kind::Equal;
  std::uint32_t mask = 0xffffffffU;

  /// Integers compare after masking; constructors compare tag and arity and
  /// then arguments pointwise; other values compare for equality.
  bool holds(const lang::Primitive& a, const lang::Primitive& b) const;
  /// The same relation as a solver constraint over symbolic values.
  smt::Term constraint(const sym::SymValue& a, const sym::SymValue& b) const;
  /// Representative of the class of `v`: related values share it.
  std::string canonical(const lang::Primitive& v) const;
  std::string to_string() const;
};

}  // namespace ibni::policy
