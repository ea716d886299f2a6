#pragma once

// Direct-recursion evaluator of the finite-trace models relation over
// concrete traces. Written from the semantic definition only and shares no
// code with the vectorized evaluator in the library.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ibni/formula.hpp"
#include "ibni/trace.hpp"

namespace oracle {

using ibni::lang::Primitive;
using ibni::lang::Trace;
using ibni::policy::CmpOp;
using ibni::policy::Formula;
using ibni::policy::FormulaPtr;
using ibni::policy::Operand;

class LtlOracle {
 public:
  LtlOracle(const Trace& t, const FormulaPtr& root) : t_(t) {
    for (const auto& e : t_) add_value(e.value);
    collect_constants(root);
  }

  bool holds(std::size_t i, const FormulaPtr& f) {
    std::map<std::string, Primitive> env;
    return eval(i, *f, env);
  }

 private:
  void add_value(const Primitive& p) {
    for (const auto& d : domain_) {
      if (d == p) return;
    }
    domain_.push_back(p);
  }

  void collect_constants(const FormulaPtr& f) {
    if (!f) return;
    if (f->lhs.kind == Operand::Kind::Const) add_value(f->lhs.value);
    if (f->rhs.kind == Operand::Kind::Const) add_value(f->rhs.value);
    collect_constants(f->a);
    collect_constants(f->b);
  }

  static Primitive value_of(const Operand& o, const std::map<std::string, Primitive>& env) {
    if (o.kind == Operand::Kind::Const) return o.value;
    return env.at(o.var);
  }

  static bool compare(CmpOp op, const Primitive& a, const Primitive& b) {
    if (a.is_int() && b.is_int()) {
      std::int32_t x = a.as_int(), y = b.as_int();
      switch (op) {
        case CmpOp::Lt: return x < y;
        case CmpOp::Le: return x <= y;
        case CmpOp::Eq: return x == y;
        case CmpOp::Ne: return x != y;
        case CmpOp::Gt: return x > y;
        case CmpOp::Ge: return x >= y;
      }
    }
    if (op == CmpOp::Eq) return a == b;
    if (op == CmpOp::Ne) return !(a == b);
    return false;
  }

  bool eval(std::size_t i, const Formula& f, std::map<std::string, Primitive>& env) {
    const std::size_t n = t_.size();
    switch (f.kind) {
      case Formula::Kind::True:
        return true;
      case Formula::Kind::False:
        return false;
      case Formula::Kind::Event: {
        const auto& e = t_[i];
        if (e.name != f.channel) return false;
        if (f.lhs.kind == Operand::Kind::Star) return true;
        return e.value == value_of(f.lhs, env);
      }
      case Formula::Kind::Compare:
        return compare(f.cmp, value_of(f.lhs, env), value_of(f.rhs, env));
      case Formula::Kind::Not:
        return !eval(i, *f.a, env);
      case Formula::Kind::And:
        return eval(i, *f.a, env) && eval(i, *f.b, env);
      case Formula::Kind::Or:
        return eval(i, *f.a, env) || eval(i, *f.b, env);
      case Formula::Kind::Implies:
        return !eval(i, *f.a, env) || eval(i, *f.b, env);
      case Formula::Kind::Exists:
      case Formula::Kind::Forall: {
        bool want = f.kind == Formula::Kind::Exists;
        auto saved = env.find(f.var) != env.end() ? std::optional<Primitive>(env.at(f.var)) : std::nullopt;
        bool result = !want;
        for (const auto& p : domain_) {
          env[f.var] = p;
          if (eval(i, *f.a, env) == want) {
            result = want;
            break;
          }
        }
        if (saved) {
          env[f.var] = *saved;
        } else {
          env.erase(f.var);
        }
        return result;
      }
      case Formula::Kind::Next:
        return i + 1 < n && eval(i + 1, *f.a, env);
      case Formula::Kind::Until:
        for (std::size_t j = i; j < n; ++j) {
          if (eval(j, *f.b, env)) {
            bool all = true;
            for (std::size_t k = i; k < j && all; ++k) all = eval(k, *f.a, env);
            if (all) return true;
          }
        }
        return false;
      case Formula::Kind::Globally:
        for (std::size_t j = i; j < n; ++j) {
          if (!eval(j, *f.a, env)) return false;
        }
        return true;
      case Formula::Kind::Finally:
        for (std::size_t j = i; j < n; ++j) {
          if (eval(j, *f.a, env)) return true;
        }
        return false;
      case Formula::Kind::Since:
        for (std::size_t j = 0; j <= i; ++j) {
          if (eval(j, *f.b, env)) {
            bool all = true;
            for (std::size_t k = j + 1; k <= i && all; ++k) all = eval(k, *f.a, env);
            if (all) return true;
          }
        }
        return false;
      case Formula::Kind::Past:
        for (std::size_t j = 0; j <= i; ++j) {
          if (eval(j, *f.a, env)) return true;
        }
        return false;
    }
    return false;
  }

  const Trace& t_;
  std::vector<Primitive> domain_;
};

}  // namespace oracle
