#include "ibni/term.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ibni/errors.hpp"

namespace ibni::smt {

using lang::Primitive;

Term Term::make(Node n) {
  Term t;
  t.node_ = std::make_shared<const Node>(std::move(n));
  return t;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node() == b.node()) return true;
  if (!a.valid() || !b.valid()) return false;
  if (a.op() != b.op() || a.sort() != b.sort()) return false;
  switch (a.op()) {
    case TermOp::IntConst:
    case TermOp::BoolConst:
      return a.int_value() == b.int_value();
    case TermOp::Var:
      return a.name() == b.name();
    default:
      return a.kids() == b.kids();
  }
}

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw EvalError(msg);
}

std::string_view op_symbol(TermOp op) {
  switch (op) {
    case TermOp::Add: return "+";
    case TermOp::Sub: return "-";
    case TermOp::Mul: return "*";
    case TermOp::BitAnd: return "&";
    case TermOp::BitOr: return "|";
    case TermOp::Eq: return "=";
    case TermOp::Ne: return "!=";
    case TermOp::Lt: return "<";
    case TermOp::Le: return "<=";
    case TermOp::And: return "&&";
    case TermOp::Or: return "||";
    default: return "?";
  }
}

bool is_leaf(const Term& t) { return t.is_const() || t.op() == TermOp::Var; }

void print(std::ostream& os, const Term& t) {
  switch (t.op()) {
    case TermOp::IntConst:
      os << t.int_value();
      return;
    case TermOp::BoolConst:
      os << (t.bool_value() ? "true" : "false");
      return;
    case TermOp::Var:
      os << t.name();
      return;
    case TermOp::Not:
      os << "!";
      if (is_leaf(t.kids()[0])) {
        print(os, t.kids()[0]);
      } else {
        os << "(";
        print(os, t.kids()[0]);
        os << ")";
      }
      return;
    case TermOp::And:
    case TermOp::Or:
      if (t.kids().empty()) {
        os << (t.op() == TermOp::And ? "true" : "false");
        return;
      }
      [[fallthrough]];
    default: {
      const auto& ks = t.kids();
      for (std::size_t i = 0; i < ks.size(); ++i) {
        if (i) os << " " << op_symbol(t.op()) << " ";
        if (is_leaf(ks[i])) {
          print(os, ks[i]);
        } else {
          os << "(";
          print(os, ks[i]);
          os << ")";
        }
      }
    }
  }
}

}  // namespace

std::string Term::to_string() const {
  std::ostringstream os;
  print(os, *this);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Term& t) {
  print(os, t);
  return os;
}

Term int_const(std::int32_t v) { return Term::make({TermOp::IntConst, Sort::Int, v, {}, {}}); }
Term bool_const(bool b) { return Term::make({TermOp::BoolConst, Sort::Bool, b ? 1 : 0, {}, {}}); }
Term int_var(std::string name) { return Term::make({TermOp::Var, Sort::Int, 0, std::move(name), {}}); }
Term bool_var(std::string name) { return Term::make({TermOp::Var, Sort::Bool, 0, std::move(name), {}}); }
Term var(std::string name, Sort sort) { return Term::make({TermOp::Var, sort, 0, std::move(name), {}}); }

Term mk_not(Term a) {
  require(a.sort() == Sort::Bool, "negation of a non-boolean term");
  return Term::make({TermOp::Not, Sort::Bool, 0, {}, {std::move(a)}});
}

Term mk_and(std::vector<Term> kids) {
  for (const auto& k : kids) require(k.sort() == Sort::Bool, "conjunction of a non-boolean term");
  if (kids.empty()) return bool_const(true);
  if (kids.size() == 1) return kids.front();
  return Term::make({TermOp::And, Sort::Bool, 0, {}, std::move(kids)});
}

Term mk_or(std::vector<Term> kids) {
  for (const auto& k : kids) require(k.sort() == Sort::Bool, "disjunction of a non-boolean term");
  if (kids.empty()) return bool_const(false);
  if (kids.size() == 1) return kids.front();
  return Term::make({TermOp::Or, Sort::Bool, 0, {}, std::move(kids)});
}

Term mk_binary(TermOp op, Term a, Term b) {
  switch (op) {
    case TermOp::Add:
    case TermOp::Sub:
    case TermOp::Mul:
    case TermOp::BitAnd:
    case TermOp::BitOr:
      require(a.sort() == Sort::Int && b.sort() == Sort::Int, "arithmetic on non-integer terms");
      return Term::make({op, Sort::Int, 0, {}, {std::move(a), std::move(b)}});
    case TermOp::Lt:
    case TermOp::Le:
      require(a.sort() == Sort::Int && b.sort() == Sort::Int, "ordering on non-integer terms");
      return Term::make({op, Sort::Bool, 0, {}, {std::move(a), std::move(b)}});
    case TermOp::Eq:
    case TermOp::Ne:
      require(a.sort() == b.sort(), "equality between terms of different sorts");
      return Term::make({op, Sort::Bool, 0, {}, {std::move(a), std::move(b)}});
    case TermOp::And:
      return mk_and({std::move(a), std::move(b)});
    case TermOp::Or:
      return mk_or({std::move(a), std::move(b)});
    default:
      throw std::invalid_argument("mk_binary: not a binary operator");
  }
}

Term add(Term a, Term b) { return mk_binary(TermOp::Add, std::move(a), std::move(b)); }
Term sub(Term a, Term b) { return mk_binary(TermOp::Sub, std::move(a), std::move(b)); }
Term mul(Term a, Term b) { return mk_binary(TermOp::Mul, std::move(a), std::move(b)); }
Term bit_and(Term a, Term b) { return mk_binary(TermOp::BitAnd, std::move(a), std::move(b)); }
Term bit_or(Term a, Term b) { return mk_binary(TermOp::BitOr, std::move(a), std::move(b)); }
Term eq(Term a, Term b) { return mk_binary(TermOp::Eq, std::move(a), std::move(b)); }
Term ne(Term a, Term b) { return mk_binary(TermOp::Ne, std::move(a), std::move(b)); }
Term lt(Term a, Term b) { return mk_binary(TermOp::Lt, std::move(a), std::move(b)); }
Term le(Term a, Term b) { return mk_binary(TermOp::Le, std::move(a), std::move(b)); }

void collect_vars(const Term& t, VarSorts& out) {
  if (t.op() == TermOp::Var) {
    out.emplace(t.name(), t.sort());
    return;
  }
  for (const auto& k : t.kids()) collect_vars(k, out);
}

VarSorts free_vars(const Term& t) {
  VarSorts out;
  collect_vars(t, out);
  return out;
}

Primitive evaluate(const Term& t, const Model& model) {
  switch (t.op()) {
    case TermOp::IntConst:
      return Primitive::integer(t.int_value());
    case TermOp::BoolConst:
      return Primitive::boolean(t.bool_value());
    case TermOp::Var: {
      auto it = model.find(t.name());
      if (it == model.end()) return t.sort() == Sort::Int ? Primitive::integer(0) : Primitive::boolean(false);
      return it->second;
    }
    case TermOp::Not:
      return Primitive::boolean(!evaluate(t.kids()[0], model).as_bool());
    case TermOp::And:
      for (const auto& k : t.kids()) {
        if (!evaluate(k, model).as_bool()) return Primitive::boolean(false);
      }
      return Primitive::boolean(true);
    case TermOp::Or:
      for (const auto& k : t.kids()) {
        if (evaluate(k, model).as_bool()) return Primitive::boolean(true);
      }
      return Primitive::boolean(false);
    default:
      break;
  }
  Primitive a = evaluate(t.kids()[0], model);
  Primitive b = evaluate(t.kids()[1], model);
  switch (t.op()) {
    case TermOp::Add: return Primitive::integer(lang::wrap_add(a.as_int(), b.as_int()));
    case TermOp::Sub: return Primitive::integer(lang::wrap_sub(a.as_int(), b.as_int()));
    case TermOp::Mul: return Primitive::integer(lang::wrap_mul(a.as_int(), b.as_int()));
    case TermOp::BitAnd: return Primitive::integer(a.as_int() & b.as_int());
    case TermOp::BitOr: return Primitive::integer(a.as_int() | b.as_int());
    case TermOp::Eq: return Primitive::boolean(a == b);
    case TermOp::Ne: return Primitive::boolean(!(a == b));
    case TermOp::Lt: return Primitive::boolean(a.as_int() < b.as_int());
    case TermOp::Le: return Primitive::boolean(a.as_int() <= b.as_int());
    default: throw std::logic_error("evaluate: unexpected operator");
  }
}

namespace {

Term rebuild(const Term& t, std::vector<Term> kids) {
  switch (t.op()) {
    case TermOp::Not: return mk_not(std::move(kids[0]));
    case TermOp::And: return mk_and(std::move(kids));
    case TermOp::Or: return mk_or(std::move(kids));
    default: return mk_binary(t.op(), std::move(kids[0]), std::move(kids[1]));
  }
}

Term from_primitive(const Primitive& p) {
  return p.is_bool() ? bool_const(p.as_bool()) : int_const(p.as_int());
}

}  // namespace

Term rename(const Term& t, const std::function<std::string(const std::string&)>& fn) {
  if (t.op() == TermOp::Var) return var(fn(t.name()), t.sort());
  if (t.kids().empty()) return t;
  std::vector<Term> kids;
  kids.reserve(t.kids().size());
  for (const auto& k : t.kids()) kids.push_back(rename(k, fn));
  return rebuild(t, std::move(kids));
}

Term substitute(const Term& t, const Model& model) {
  if (t.op() == TermOp::Var) {
    auto it = model.find(t.name());
    return it == model.end() ? t : from_primitive(it->second);
  }
  if (t.kids().empty()) return t;
  std::vector<Term> kids;
  kids.reserve(t.kids().size());
  for (const auto& k : t.kids()) kids.push_back(substitute(k, model));
  return simplify(rebuild(t, std::move(kids)));
}

Term simplify(const Term& t) {
  if (t.kids().empty()) return t;
  std::vector<Term> kids;
  kids.reserve(t.kids().size());
  bool all_const = true;
  for (const auto& k : t.kids()) {
    kids.push_back(simplify(k));
    all_const = all_const && kids.back().is_const();
  }
  if (t.op() == TermOp::And || t.op() == TermOp::Or) {
    bool is_and = t.op() == TermOp::And;
    std::vector<Term> kept;
    for (auto& k : kids) {
      if (k.op() == TermOp::BoolConst) {
        if (k.bool_value() != is_and) return bool_const(!is_and);  // absorbing element
        continue;
      }
      kept.push_back(std::move(k));
    }
    return is_and ? mk_and(std::move(kept)) : mk_or(std::move(kept));
  }
  Term rebuilt = rebuild(t, std::move(kids));
  if (all_const) return from_primitive(evaluate(rebuilt, {}));
  return rebuilt;
}

}  // namespace ibni::smt
