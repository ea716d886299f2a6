#include "ibni/sym_value.hpp"

#include <ostream>

#include "ibni/errors.hpp"

namespace ibni::sym {

namespace {

SymValue from_term(const smt::Term& t) {
  smt::Term s = smt::simplify(t);
  if (s.op() == smt::TermOp::IntConst) return Primitive::integer(s.int_value());
  if (s.op() == smt::TermOp::BoolConst) return Primitive::boolean(s.bool_value());
  return SymValue::symbolic(s);
}

std::string kind_name(const SymValue& v) {
  switch (v.kind()) {
    case SymValue::Kind::Concrete:
      switch (v.concrete().kind()) {
        case Primitive::Kind::Int: return "int";
        case Primitive::Kind::Bool: return "bool";
        case Primitive::Kind::Unit: return "unit";
        case Primitive::Kind::Ctor: return "constructor";
      }
      break;
    case SymValue::Kind::Symbolic:
      return v.term().sort() == smt::Sort::Int ? "int" : "bool";
    case SymValue::Kind::Ctor:
      return "constructor";
  }
  return "?";
}

[[noreturn]] void mismatch(BinOp op, const SymValue& a, const SymValue& b) {
  throw EvalError("operator " + std::string(lang::to_string(op)) + " applied to " + kind_name(a) +
                  " and " + kind_name(b));
}

bool is_ctor_like(const SymValue& v) {
  return v.kind() == SymValue::Kind::Ctor ||
         (v.is_concrete() && v.concrete().is_ctor());
}

// Constructor view of a value known to be constructor-like.
std::pair<std::string, std::vector<SymValue>> ctor_view(const SymValue& v) {
  if (v.kind() == SymValue::Kind::Ctor) return {v.tag(), v.args()};
  std::vector<SymValue> args(v.concrete().args().begin(), v.concrete().args().end());
  return {v.concrete().tag(), args};
}

}  // namespace

SymValue::SymValue(Primitive p) : kind_(Kind::Concrete), concrete_(std::move(p)) {}

SymValue SymValue::symbolic(smt::Term t) {
  SymValue v;
  v.kind_ = Kind::Symbolic;
  v.term_ = std::move(t);
  return v;
}

SymValue SymValue::ctor(std::string tag, std::vector<SymValue> args) {
  bool all_concrete = true;
  for (const auto& a : args) all_concrete = all_concrete && a.is_concrete();
  if (all_concrete) {
    std::vector<Primitive> prims;
    for (const auto& a : args) prims.push_back(a.concrete());
    return Primitive::ctor(std::move(tag), std::move(prims));
  }
  SymValue v;
  v.kind_ = Kind::Ctor;
  v.tag_ = std::move(tag);
  v.args_ = std::move(args);
  return v;
}

smt::Term SymValue::to_term() const {
  switch (kind_) {
    case Kind::Symbolic:
      return term_;
    case Kind::Concrete:
      if (concrete_.is_int()) return smt::int_const(concrete_.as_int());
      if (concrete_.is_bool()) return smt::bool_const(concrete_.as_bool());
      break;
    case Kind::Ctor:
      break;
  }
  throw EvalError("value " + to_string() + " has no integer or boolean view");
}

Primitive SymValue::concretize(const smt::Model& model) const {
  switch (kind_) {
    case Kind::Concrete:
      return concrete_;
    case Kind::Symbolic:
      return smt::evaluate(term_, model);
    case Kind::Ctor: {
      std::vector<Primitive> args;
      for (const auto& a : args_) args.push_back(a.concretize(model));
      return Primitive::ctor(tag_, std::move(args));
    }
  }
  return concrete_;
}

SymValue SymValue::rename(const std::function<std::string(const std::string&)>& fn) const {
  switch (kind_) {
    case Kind::Concrete:
      return *this;
    case Kind::Symbolic:
      return symbolic(smt::rename(term_, fn));
    case Kind::Ctor: {
      std::vector<SymValue> args;
      for (const auto& a : args_) args.push_back(a.rename(fn));
      return ctor(tag_, std::move(args));
    }
  }
  return *this;
}

void SymValue::collect_vars(smt::VarSorts& out) const {
  if (kind_ == Kind::Symbolic) smt::collect_vars(term_, out);
  for (const auto& a : args_) a.collect_vars(out);
}

std::string SymValue::to_string() const {
  switch (kind_) {
    case Kind::Concrete:
      return concrete_.to_string();
    case Kind::Symbolic:
      return term_.to_string();
    case Kind::Ctor: {
      std::string s = tag_ + "(";
      for (std::size_t i = 0; i < args_.size(); ++i) {
        if (i) s += ", ";
        s += args_[i].to_string();
      }
      return s + ")";
    }
  }
  return "?";
}

bool operator==(const SymValue& a, const SymValue& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case SymValue::Kind::Concrete: return a.concrete_ == b.concrete_;
    case SymValue::Kind::Symbolic: return a.term_ == b.term_;
    case SymValue::Kind::Ctor: return a.tag_ == b.tag_ && a.args_ == b.args_;
  }
  return false;
}

std::ostream& operator<<(std::ostream& os, const SymValue& v) { return os << v.to_string(); }

smt::Term sym_equal(const SymValue& a, const SymValue& b) {
  if (a.is_concrete() && b.is_concrete()) {
    if (a.concrete().kind() != b.concrete().kind()) mismatch(BinOp::Eq, a, b);
    return smt::bool_const(a.concrete() == b.concrete());
  }
  if (is_ctor_like(a) || is_ctor_like(b)) {
    if (!is_ctor_like(a) || !is_ctor_like(b)) mismatch(BinOp::Eq, a, b);
    auto [ta, xs] = ctor_view(a);
    auto [tb, ys] = ctor_view(b);
    if (ta != tb || xs.size() != ys.size()) return smt::bool_const(false);
    std::vector<smt::Term> parts;
    for (std::size_t i = 0; i < xs.size(); ++i) parts.push_back(sym_equal(xs[i], ys[i]));
    return smt::simplify(smt::mk_and(std::move(parts)));
  }
  if (a.is_concrete() && a.concrete().is_unit()) mismatch(BinOp::Eq, a, b);
  if (b.is_concrete() && b.concrete().is_unit()) mismatch(BinOp::Eq, a, b);
  smt::Term x = a.to_term();
  smt::Term y = b.to_term();
  if (x.sort() != y.sort()) mismatch(BinOp::Eq, a, b);
  return smt::eq(x, y);
}

SymValue sym_binop(BinOp op, const SymValue& a, const SymValue& b) {
  if (a.is_concrete() && b.is_concrete()) {
    return lang::apply_binop(op, a.concrete(), b.concrete());
  }
  switch (op) {
    case BinOp::Eq:
      return from_term(sym_equal(a, b));
    case BinOp::Ne:
      return from_term(smt::mk_not(sym_equal(a, b)));
    case BinOp::And:
    case BinOp::Or: {
      if (kind_name(a) != "bool" || kind_name(b) != "bool") mismatch(op, a, b);
      std::vector<smt::Term> kids{a.to_term(), b.to_term()};
      return from_term(op == BinOp::And ? smt::mk_and(std::move(kids)) : smt::mk_or(std::move(kids)));
    }
    default: {
      if (kind_name(a) != "int" || kind_name(b) != "int") mismatch(op, a, b);
      smt::Term x = a.to_term();
      smt::Term y = b.to_term();
      switch (op) {
        case BinOp::Add: return from_term(smt::add(x, y));
        case BinOp::Sub: return from_term(smt::sub(x, y));
        case BinOp::Mul: return from_term(smt::mul(x, y));
        case BinOp::BitAnd: return from_term(smt::bit_and(x, y));
        case BinOp::BitOr: return from_term(smt::bit_or(x, y));
        case BinOp::Lt: return from_term(smt::lt(x, y));
        default: return from_term(smt::le(x, y));
      }
    }
  }
}

std::string SymEvent::to_string() const { return name + "!" + value.to_string(); }

std::string to_string(const SymTrace& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ", ";
    s += t[i].to_string();
  }
  return s;
}

}  // namespace ibni::sym
