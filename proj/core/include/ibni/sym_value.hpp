#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ibni/primitive.hpp"
#include "ibni/term.hpp"

namespace ibni::sym {

using lang::BinOp;
using lang::Primitive;

/// A data value during symbolic execution: a concrete primitive, a term over
/// secret variables, or a constructor applied to such values. Constructors
/// whose arguments are all concrete collapse into concrete primitives, and
/// constant terms collapse into concrete values.
class SymValue {
 public:
  enum class Kind { Concrete, Symbolic, Ctor };

  SymValue() : SymValue(Primitive::unit()) {}
  SymValue(Primitive p);  // NOLINT(google-explicit-constructor)
  static SymValue symbolic(smt::Term t);
  static SymValue ctor(std::string tag, std::vector<SymValue> args);

  Kind kind() const { return kind_; }
  bool is_concrete() const { return kind_ == Kind::Concrete; }
  const Primitive& concrete() const { return concrete_; }
  const smt::Term& term() const { return term_; }
  const std::string& tag() const { return tag_; }
  const std::vector<SymValue>& args() const { return args_; }

  /// Integer/boolean view as a solver term; throws EvalError for unit and
  /// constructors.
  smt::Term to_term() const;
  /// Substitutes `model` (missing variables read as 0 / false).
  Primitive concretize(const smt::Model& model) const;
  SymValue rename(const std::function<std::string(const std::string&)>& fn) const;
  void collect_vars(smt::VarSorts& out) const;

  std::string to_string() const;
  friend bool operator==(const SymValue& a, const SymValue& b);

 private:
  Kind kind_ = Kind::Concrete;
  Primitive concrete_;
  smt::Term term_;
  std::string tag_;
  std::vector<SymValue> args_;
};

std::ostream& operator<<(std::ostream& os, const SymValue& v);

/// The language's binary operators lifted to symbolic values. Mirrors the
/// concrete kind checks and throws EvalError on mismatches that are visible
/// without solving.
SymValue sym_binop(BinOp op, const SymValue& a, const SymValue& b);

/// Boolean term for `a == b` (structural on constructors).
smt::Term sym_equal(const SymValue& a, const SymValue& b);

struct SymEvent {
  std::string name;
  SymValue value;
  std::string to_string() const;
  friend bool operator==(const SymEvent&, const SymEvent&) = default;
};

using SymTrace = std::vector<SymEvent>;

std::string to_string(const SymTrace& t);

}  // namespace ibni::sym
