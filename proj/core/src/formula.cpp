#include "ibni/formula.hpp"

#include <algorithm>
#include <set>

namespace ibni::policy {

std::string Operand::to_string() const {
  switch (kind) {
    case Kind::Var: return var;
    case Kind::Const: return value.to_string();
    case Kind::Star: return "*";
  }
  return "?";
}

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

namespace fm {

namespace {
FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }
FormulaPtr unary(Formula::Kind k, FormulaPtr a) {
  Formula f;
  f.kind = k;
  f.a = std::move(a);
  return make(std::move(f));
}
FormulaPtr binary(Formula::Kind k, FormulaPtr a, FormulaPtr b) {
  Formula f;
  f.kind = k;
  f.a = std::move(a);
  f.b = std::move(b);
  return make(std::move(f));
}
FormulaPtr quant(Formula::Kind k, std::string var, FormulaPtr body) {
  Formula f;
  f.kind = k;
  f.var = std::move(var);
  f.a = std::move(body);
  return make(std::move(f));
}
}  // namespace

FormulaPtr truth(bool b) {
  Formula f;
  f.kind = b ? Formula::Kind::True : Formula::Kind::False;
  return make(std::move(f));
}
FormulaPtr event(std::string channel, Operand value) {
  Formula f;
  f.kind = Formula::Kind::Event;
  f.channel = std::move(channel);
  f.lhs = std::move(value);
  return make(std::move(f));
}
FormulaPtr compare(CmpOp op, Operand lhs, Operand rhs) {
  Formula f;
  f.kind = Formula::Kind::Compare;
  f.cmp = op;
  f.lhs = std::move(lhs);
  f.rhs = std::move(rhs);
  return make(std::move(f));
}
FormulaPtr not_(FormulaPtr a) { return unary(Formula::Kind::Not, std::move(a)); }
FormulaPtr and_(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::And, std::move(a), std::move(b)); }
FormulaPtr or_(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::Or, std::move(a), std::move(b)); }
FormulaPtr implies(FormulaPtr a, FormulaPtr b) {
  return binary(Formula::Kind::Implies, std::move(a), std::move(b));
}
FormulaPtr exists(std::string var, FormulaPtr body) {
  return quant(Formula::Kind::Exists, std::move(var), std::move(body));
}
FormulaPtr forall(std::string var, FormulaPtr body) {
  return quant(Formula::Kind::Forall, std::move(var), std::move(body));
}
FormulaPtr next(FormulaPtr a) { return unary(Formula::Kind::Next, std::move(a)); }
FormulaPtr until(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::Until, std::move(a), std::move(b)); }
FormulaPtr globally(FormulaPtr a) { return unary(Formula::Kind::Globally, std::move(a)); }
FormulaPtr finally(FormulaPtr a) { return unary(Formula::Kind::Finally, std::move(a)); }
FormulaPtr since(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::Since, std::move(a), std::move(b)); }
FormulaPtr past(FormulaPtr a) { return unary(Formula::Kind::Past, std::move(a)); }
FormulaPtr last(const std::string& channel, Operand value) {
  return since(not_(event(channel, Operand::star())), event(channel, std::move(value)));
}

}  // namespace fm

std::string to_string(const FormulaPtr& f) {
  using K = Formula::Kind;
  auto paren = [](const FormulaPtr& g) {
    switch (g->kind) {
      case K::True:
      case K::False:
      case K::Event:
      case K::Compare:
        return to_string(g);
      default:
        return "(" + to_string(g) + ")";
    }
  };
  switch (f->kind) {
    case K::True: return "true";
    case K::False: return "false";
    case K::Event: return f->channel + "!" + f->lhs.to_string();
    case K::Compare:
      return f->lhs.to_string() + " " + std::string(to_string(f->cmp)) + " " + f->rhs.to_string();
    case K::Not: return "not " + paren(f->a);
    case K::And: return paren(f->a) + " and " + paren(f->b);
    case K::Or: return paren(f->a) + " or " + paren(f->b);
    case K::Implies: return paren(f->a) + " -> " + paren(f->b);
    case K::Exists: return "exists " + f->var + ". " + paren(f->a);
    case K::Forall: return "forall " + f->var + ". " + paren(f->a);
    case K::Next: return "X " + paren(f->a);
    case K::Until: return paren(f->a) + " U " + paren(f->b);
    case K::Globally: return "G " + paren(f->a);
    case K::Finally: return "F " + paren(f->a);
    case K::Since: return paren(f->a) + " S " + paren(f->b);
    case K::Past: return "P " + paren(f->a);
  }
  return "?";
}

int depth(const FormulaPtr& f) {
  int d = 0;
  if (f->a) d = std::max(d, depth(f->a) + 1);
  if (f->b) d = std::max(d, depth(f->b) + 1);
  return d;
}

namespace {

void collect_constants(const FormulaPtr& f, std::vector<lang::Primitive>& out) {
  for (const Operand* o : {&f->lhs, &f->rhs}) {
    if ((f->kind == Formula::Kind::Event || f->kind == Formula::Kind::Compare) && o->kind == Operand::Kind::Const &&
        std::find(out.begin(), out.end(), o->value) == out.end()) {
      out.push_back(o->value);
    }
  }
  if (f->a) collect_constants(f->a, out);
  if (f->b) collect_constants(f->b, out);
}

void collect_free(const FormulaPtr& f, std::set<std::string>& bound, std::vector<std::string>& out) {
  auto use = [&](const Operand& o) {
    if (o.kind == Operand::Kind::Var && !bound.count(o.var) &&
        std::find(out.begin(), out.end(), o.var) == out.end()) {
      out.push_back(o.var);
    }
  };
  if (f->kind == Formula::Kind::Event) use(f->lhs);
  if (f->kind == Formula::Kind::Compare) {
    use(f->lhs);
    use(f->rhs);
  }
  if (f->kind == Formula::Kind::Exists || f->kind == Formula::Kind::Forall) {
    bool fresh = bound.insert(f->var).second;
    collect_free(f->a, bound, out);
    if (fresh) bound.erase(f->var);
    return;
  }
  if (f->a) collect_free(f->a, bound, out);
  if (f->b) collect_free(f->b, bound, out);
}

}  // namespace

std::vector<lang::Primitive> constants(const FormulaPtr& f) {
  std::vector<lang::Primitive> out;
  collect_constants(f, out);
  return out;
}

std::vector<std::string> free_variables(const FormulaPtr& f) {
  std::set<std::string> bound;
  std::vector<std::string> out;
  collect_free(f, bound, out);
  return out;
}

}  // namespace ibni::policy
