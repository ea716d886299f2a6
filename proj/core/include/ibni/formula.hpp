#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ibni/primitive.hpp"

namespace ibni::policy {

/// s ::= x | p | *
struct Operand {
  enum class Kind { Var, Const, Star };
  Kind kind = Kind::Star;
  std::string var;
  lang::Primitive value;

  static Operand variable(std::string name) { return {Kind::Var, std::move(name), {}}; }
  static Operand constant(lang::Primitive p) { return {Kind::Const, {}, std::move(p)}; }
  static Operand star() { return {}; }
  std::string to_string() const;
  friend bool operator==(const Operand&, const Operand&) = default;
};

enum class CmpOp { Lt, Le, Eq, Ne, Gt, Ge };
std::string_view to_string(CmpOp op);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind {
    True,
    False,
    Event,    // channel!lhs
    Compare,  // lhs cmp rhs
    Not,
    And,
    Or,
    Implies,
    Exists,
    Forall,
    Next,
    Until,
    Globally,
    Finally,
    Since,
    Past,
  };
  Kind kind = Kind::True;
  std::string channel;
  Operand lhs;
  Operand rhs;
  CmpOp cmp = CmpOp::Eq;
  std::string var;  // bound variable of Exists/Forall
  FormulaPtr a;
  FormulaPtr b;
};

namespace fm {
FormulaPtr truth(bool b);
FormulaPtr event(std::string channel, Operand value);
FormulaPtr compare(CmpOp op, Operand lhs, Operand rhs);
FormulaPtr not_(FormulaPtr a);
FormulaPtr and_(FormulaPtr a, FormulaPtr b);
FormulaPtr or_(FormulaPtr a, FormulaPtr b);
FormulaPtr implies(FormulaPtr a, FormulaPtr b);
FormulaPtr exists(std::string var, FormulaPtr body);
FormulaPtr forall(std::string var, FormulaPtr body);
FormulaPtr next(FormulaPtr a);
FormulaPtr until(FormulaPtr a, FormulaPtr b);
FormulaPtr globally(FormulaPtr a);
FormulaPtr finally(FormulaPtr a);
FormulaPtr since(FormulaPtr a, FormulaPtr b);
FormulaPtr past(FormulaPtr a);
/// last(channel, v) = not channel!* S channel!v
FormulaPtr last(const std::string& channel, Operand value);
}  // namespace fm

/// Concrete syntax accepted by parse_formula.
std::string to_string(const FormulaPtr& f);
/// Connective nesting depth; atoms have depth 0.
int depth(const FormulaPtr& f);
/// Primitive constants occurring in `f`.
std::vector<lang::Primitive> constants(const FormulaPtr& f);
/// Variables occurring free in `f`.
std::vector<std::string> free_variables(const FormulaPtr& f);

/// Parses one formula. Bound variables are renamed apart; a free variable is
/// a PolicyError. Throws SyntaxError on malformed text.
FormulaPtr parse_formula(std::string_view text);

}  // namespace ibni::policy
