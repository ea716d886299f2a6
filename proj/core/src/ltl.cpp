#include "ibni/ltl.hpp"

#include <algorithm>
#include <stdexcept>

#include "ibni/errors.hpp"

namespace ibni::policy {

ObsValue ObsValue::of(const sym::SymValue& v) {
  if (v.is_concrete()) return {v.concrete(), {}};
  return {std::nullopt, v.to_string()};
}

ObsTrace observe(const lang::Trace& t) {
  ObsTrace out;
  for (const auto& e : t) out.push_back(ObsEvent{e.name, ObsValue::of(e.value)});
  return out;
}

ObsTrace observe(const sym::SymTrace& t) {
  ObsTrace out;
  for (const auto& e : t) out.push_back(ObsEvent{e.name, ObsValue::of(e.value)});
  return out;
}

namespace {

Tri tnot(Tri a) {
  if (a == Tri::Unknown) return a;
  return a == Tri::True ? Tri::False : Tri::True;
}
Tri tand(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::True;
}
Tri tor(Tri a, Tri b) { return tnot(tand(tnot(a), tnot(b))); }
Tri tri(bool b) { return b ? Tri::True : Tri::False; }

// Equality of two observed values.
Tri same(const ObsValue& a, const ObsValue& b) {
  if (a.is_concrete() && b.is_concrete()) return tri(*a.concrete == *b.concrete);
  if (!a.is_concrete() && !b.is_concrete() && a.symbolic == b.symbolic) return Tri::True;
  return Tri::Unknown;
}

Tri compare(CmpOp op, const ObsValue& a, const ObsValue& b) {
  if (op == CmpOp::Eq) return same(a, b);
  if (op == CmpOp::Ne) return tnot(same(a, b));
  if (!a.is_concrete() || !b.is_concrete()) return Tri::Unknown;
  const auto& x = *a.concrete;
  const auto& y = *b.concrete;
  if (!x.is_int() || !y.is_int()) return Tri::False;
  switch (op) {
    case CmpOp::Lt: return tri(x.as_int() < y.as_int());
    case CmpOp::Le: return tri(x.as_int() <= y.as_int());
    case CmpOp::Gt: return tri(x.as_int() > y.as_int());
    case CmpOp::Ge: return tri(x.as_int() >= y.as_int());
    default: return Tri::False;
  }
}

using Env = std::map<std::string, ObsValue>;

class Evaluator {
 public:
  Evaluator(const ObsTrace& t, std::vector<ObsValue> domain) : t_(t), domain_(std::move(domain)) {}

  std::vector<Tri> eval(const FormulaPtr& f, Env& env) {
    using K = Formula::Kind;
    const std::size_t n = t_.size();
    std::vector<Tri> r(n, Tri::False);
    switch (f->kind) {
      case K::True:
      case K::False:
        std::fill(r.begin(), r.end(), tri(f->kind == K::True));
        return r;
      case K::Event:
        for (std::size_t i = 0; i < n; ++i) {
          if (t_[i].name != f->channel) continue;
          r[i] = f->lhs.kind == Operand::Kind::Star ? Tri::True : same(resolve(f->lhs, env), t_[i].value);
        }
        return r;
      case K::Compare: {
        Tri v = compare(f->cmp, resolve(f->lhs, env), resolve(f->rhs, env));
        std::fill(r.begin(), r.end(), v);
        return r;
      }
      case K::Not: {
        auto a = eval(f->a, env);
        for (std::size_t i = 0; i < n; ++i) r[i] = tnot(a[i]);
        return r;
      }
      case K::And:
      case K::Or:
      case K::Implies: {
        auto a = eval(f->a, env);
        auto b = eval(f->b, env);
        for (std::size_t i = 0; i < n; ++i) {
          if (f->kind == K::And) r[i] = tand(a[i], b[i]);
          else if (f->kind == K::Or) r[i] = tor(a[i], b[i]);
          else r[i] = tor(tnot(a[i]), b[i]);
        }
        return r;
      }
      case K::Exists:
      case K::Forall: {
        bool ex = f->kind == K::Exists;
        std::fill(r.begin(), r.end(), tri(!ex));
        auto saved = env.find(f->var) != env.end() ? std::optional<ObsValue>(env[f->var]) : std::nullopt;
        for (const auto& d : domain_) {
          env[f->var] = d;
          auto a = eval(f->a, env);
          for (std::size_t i = 0; i < n; ++i) r[i] = ex ? tor(r[i], a[i]) : tand(r[i], a[i]);
        }
        if (saved) env[f->var] = *saved;
        else env.erase(f->var);
        return r;
      }
      case K::Next: {
        auto a = eval(f->a, env);
        for (std::size_t i = 0; i + 1 < n; ++i) r[i] = a[i + 1];
        return r;
      }
      case K::Finally:
      case K::Globally: {
        auto a = eval(f->a, env);
        bool fin = f->kind == K::Finally;
        for (std::size_t i = n; i-- > 0;) {
          if (i + 1 == n) r[i] = a[i];
          else r[i] = fin ? tor(a[i], r[i + 1]) : tand(a[i], r[i + 1]);
        }
        return r;
      }
      case K::Until: {
        auto a = eval(f->a, env);
        auto b = eval(f->b, env);
        for (std::size_t i = n; i-- > 0;) {
          r[i] = i + 1 == n ? b[i] : tor(b[i], tand(a[i], r[i + 1]));
        }
        return r;
      }
      case K::Past: {
        auto a = eval(f->a, env);
        for (std::size_t i = 0; i < n; ++i) r[i] = i == 0 ? a[i] : tor(a[i], r[i - 1]);
        return r;
      }
      case K::Since: {
        auto a = eval(f->a, env);
        auto b = eval(f->b, env);
        for (std::size_t i = 0; i < n; ++i) r[i] = i == 0 ? b[i] : tor(b[i], tand(a[i], r[i - 1]));
        return r;
      }
    }
    return r;
  }

 private:
  static ObsValue resolve(const Operand& o, const Env& env) {
    if (o.kind == Operand::Kind::Const) return ObsValue::of(o.value);
    if (o.kind == Operand::Kind::Var) {
      auto it = env.find(o.var);
      if (it == env.end()) throw PolicyError("unbound formula variable '" + o.var + "'");
      return it->second;
    }
    throw PolicyError("'*' is only allowed in event atoms");
  }

  const ObsTrace& t_;
  std::vector<ObsValue> domain_;
};

}  // namespace

std::vector<ObsValue> quantifier_domain(const ObsTrace& t, const FormulaPtr& f) {
  std::vector<ObsValue> out;
  auto add = [&](ObsValue v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
  };
  for (const auto& e : t) add(e.value);
  for (const auto& c : constants(f)) add(ObsValue::of(c));
  return out;
}

std::vector<Tri> evaluate_all(const ObsTrace& t, const FormulaPtr& f) {
  Evaluator ev(t, quantifier_domain(t, f));
  Env env;
  return ev.eval(f, env);
}

bool models(const ObsTrace& t, std::size_t i, const FormulaPtr& f) {
  if (i >= t.size()) throw std::out_of_range("position " + std::to_string(i) + " outside the trace");
  Tri v = evaluate_all(t, f)[i];
  if (v == Tri::Unknown) {
    throw SymbolicTruthError("truth of '" + to_string(f) + "' at position " + std::to_string(i) +
                             " depends on symbolic values");
  }
  return v == Tri::True;
}

}  // namespace ibni::policy
