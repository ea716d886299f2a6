#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ibni/primitive.hpp"

namespace ibni::smt {

enum class Sort { Int, Bool };

enum class TermOp {
  IntConst,
  BoolConst,
  Var,
  Not,
  And,  // n-ary
  Or,   // n-ary
  Add,
  Sub,
  Mul,
  BitAnd,
  BitOr,
  Eq,
  Ne,
  Lt,  // signed
  Le,  // signed
};

/// Immutable, shared term over 32-bit integers and booleans.
class Term {
 public:
  struct Node {
    TermOp op;
    Sort sort;
    std::int32_t value = 0;  // IntConst / BoolConst
    std::string name;        // Var
    std::vector<Term> kids;
  };

  Term() = default;

  TermOp op() const { return node_->op; }
  Sort sort() const { return node_->sort; }
  std::int32_t int_value() const { return node_->value; }
  bool bool_value() const { return node_->value != 0; }
  const std::string& name() const { return node_->name; }
  const std::vector<Term>& kids() const { return node_->kids; }
  const Node* node() const { return node_.get(); }
  bool valid() const { return node_ != nullptr; }

  bool is_const() const { return op() == TermOp::IntConst || op() == TermOp::BoolConst; }
  bool is_true() const { return op() == TermOp::BoolConst && node_->value != 0; }
  bool is_false() const { return op() == TermOp::BoolConst && node_->value == 0; }

  std::string to_string() const;

  static Term make(Node n);

 private:
  std::shared_ptr<const Node> node_;
};

bool operator==(const Term& a, const Term& b);  // structural
std::ostream& operator<<(std::ostream& os, const Term& t);

Term int_const(std::int32_t v);
Term bool_const(bool b);
Term int_var(std::string name);
Term bool_var(std::string name);
Term var(std::string name, Sort sort);

Term mk_not(Term a);
/// n-ary conjunction/disjunction; no simplification, zero operands give the
/// neutral constant.
Term mk_and(std::vector<Term> kids);
Term mk_or(std::vector<Term> kids);
Term mk_binary(TermOp op, Term a, Term b);
Term add(Term a, Term b);
Term sub(Term a, Term b);
Term mul(Term a, Term b);
Term bit_and(Term a, Term b);
Term bit_or(Term a, Term b);
Term eq(Term a, Term b);
Term ne(Term a, Term b);
Term lt(Term a, Term b);
Term le(Term a, Term b);

/// Variable name -> sort, for every variable occurring in `t`.
using VarSorts = std::map<std::string, Sort>;
void collect_vars(const Term& t, VarSorts& out);
VarSorts free_vars(const Term& t);

/// Total assignment from variable names to integer or boolean primitives.
using Model = std::map<std::string, lang::Primitive>;

/// Evaluates `t` with 32-bit wrapping semantics. Variables missing from
/// `model` evaluate to 0 / false.
lang::Primitive evaluate(const Term& t, const Model& model);

/// Replaces variables (by name) and folds constants where possible.
Term rename(const Term& t, const std::function<std::string(const std::string&)>& fn);
Term substitute(const Term& t, const Model& model);
/// Constant folding plus neutral-element removal in and/or.
Term simplify(const Term& t);

}  // namespace ibni::smt
