#include "ibni/symbolic.hpp"

#include <chrono>
#include <deque>
#include <map>
#include <memory>
#include <variant>

#include "ibni/errors.hpp"
#include "ibni/trace.hpp"

namespace ibni::sym {

using namespace ibni::lang;

std::string secret_var_name(int k) { return "a" + std::to_string(k); }

std::pair<SymValue, SymEvent> SecretSource::fresh(const std::string& channel) {
  if (!cfg_->is_secret(channel)) throw EvalError("channel '" + channel + "' is not declared secret");
  SymValue v = SymValue::symbolic(smt::int_var(secret_var_name(++used_)));
  return {v, SymEvent{channel, v}};
}

BranchResult branch(const smt::Term& cond, const std::vector<smt::Term>& phi, smt::Solver& solver) {
  auto feasible = [&](const smt::Term& c) {
    smt::Term s = smt::simplify(c);
    if (s.is_true()) return true;
    if (s.is_false()) return false;
    std::vector<smt::Term> parts = phi;
    parts.push_back(s);
    return solver.check(smt::mk_and(std::move(parts))).sat;
  };
  return {feasible(cond), feasible(smt::mk_not(cond))};
}

smt::Term PathNode::condition() const { return smt::mk_and(pc); }

std::vector<std::size_t> ExecResult::leaves() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].depth == depth) out.push_back(i);
  }
  return out;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct Closure;
struct LocRef {
  Location loc;
};
using RVal = std::variant<SymValue, std::shared_ptr<const Closure>, LocRef>;

struct EnvNode;
using Env = std::shared_ptr<const EnvNode>;
struct EnvNode {
  std::string name;
  RVal value;
  Env next;
};

struct Closure {
  std::string param;
  ExprPtr body;
  Env env;
};

const RVal& lookup(const Env& env, const std::string& name) {
  for (const EnvNode* n = env.get(); n; n = n->next.get()) {
    if (n->name == name) return n->value;
  }
  throw EvalError("unbound variable '" + name + "'");
}

Env extend(Env env, std::string name, RVal v) {
  return std::make_shared<const EnvNode>(EnvNode{std::move(name), std::move(v), std::move(env)});
}

struct PathState {
  std::deque<std::pair<std::string, SymValue>> queue;
  std::map<Location, RVal> heap;
  std::map<std::string, std::shared_ptr<const Closure>> handlers;
  SymTrace trace;
  std::vector<smt::Term> pc;
  int secrets_used = 0;
};

struct Outcome {
  RVal value;
  PathState state;
};
using Outcomes = std::vector<Outcome>;

std::string describe(const RVal& v) {
  return std::visit(overloaded{[](const SymValue& s) { return s.to_string(); },
                               [](const std::shared_ptr<const Closure>&) { return std::string("<fun>"); },
                               [](const LocRef& l) { return "<loc " + std::to_string(l.loc) + ">"; }},
                    v);
}

const SymValue& expect_data(const RVal& v, std::string_view what) {
  if (const auto* s = std::get_if<SymValue>(&v)) return *s;
  throw EvalError(std::string(what) + " must be a primitive, got " + describe(v));
}

class Executor {
 public:
  Executor(const Program& program, const DriverConfig& cfg, const ExecOptions& options)
      : program_(program), cfg_(cfg), options_(options), solver_(options.solver) {}

  ExecResult run() {
    auto start = std::chrono::steady_clock::now();
    ExecResult result;
    result.depth = cfg_.depth;
    PathState init;
    auto body = std::make_shared<const Closure>(Closure{"__oncreate_arg", program_.body, nullptr});
    init.handlers[std::string(kOnCreate)] = body;
    init.queue.emplace_back(std::string(kOnCreate), SymValue(Primitive::unit()));

    std::vector<std::pair<std::size_t, PathState>> frontier;
    for (auto& s : drain(std::move(init))) {
      result.nodes.push_back(PathNode{s.trace, s.pc, 0, -1});
      frontier.emplace_back(result.nodes.size() - 1, std::move(s));
    }
    auto choices = cfg_.choices();
    for (int round = 1; round <= cfg_.depth; ++round) {
      std::vector<std::pair<std::size_t, PathState>> next;
      for (auto& [idx, st] : frontier) {
        for (const auto& choice : choices) {
          PathState s = st;
          SymValue payload;
          if (choice.value) {
            payload = *choice.value;
          } else {
            payload = fresh(s, choice.channel);
          }
          s.trace.push_back(SymEvent{choice.channel, payload});
          s.queue.emplace_back(choice.channel, payload);
          for (auto& d : drain(std::move(s))) {
            result.nodes.push_back(PathNode{d.trace, d.pc, round, static_cast<int>(idx)});
            next.emplace_back(result.nodes.size() - 1, std::move(d));
            if (next.size() > options_.path_budget) {
              throw PathBudgetError("symbolic execution exceeded the path budget of " +
                                    std::to_string(options_.path_budget) + " at depth " +
                                    std::to_string(round));
            }
          }
        }
      }
      frontier = std::move(next);
    }
    result.feasibility_queries = solver_.queries();
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  }

 private:
  SymValue fresh(PathState& s, const std::string& channel) {
    if (!cfg_.is_secret(channel)) throw EvalError("channel '" + channel + "' is not declared secret");
    return SymValue::symbolic(smt::int_var(secret_var_name(++s.secrets_used)));
  }

  // Runs handlers and outputs until the queue is empty.
  std::vector<PathState> drain(PathState init) {
    std::vector<PathState> done;
    std::vector<std::pair<PathState, std::size_t>> work;
    work.emplace_back(std::move(init), 0);
    while (!work.empty()) {
      auto [s, steps] = std::move(work.back());
      work.pop_back();
      while (!s.queue.empty() && s.queue.front().first == kNetOut) {
        s.trace.push_back(SymEvent{std::string(kNetOut), s.queue.front().second});
        s.queue.pop_front();
      }
      if (s.queue.empty()) {
        done.push_back(std::move(s));
        continue;
      }
      if (steps >= options_.max_drain_steps) {
        throw EvalError("handler chain did not quiesce within " + std::to_string(options_.max_drain_steps) +
                        " steps");
      }
      auto [channel, payload] = s.queue.front();
      s.queue.pop_front();
      auto h = s.handlers.find(channel);
      if (h == s.handlers.end()) throw StuckError(channel);
      auto closure = h->second;
      for (auto& o : eval(closure->body, extend(closure->env, closure->param, payload), std::move(s))) {
        work.emplace_back(std::move(o.state), steps + 1);
      }
      if (work.size() + done.size() > options_.path_budget) {
        throw PathBudgetError("symbolic execution exceeded the path budget of " +
                              std::to_string(options_.path_budget));
      }
    }
    return done;
  }

  // Evaluates `e` in every outcome of `prev`, threading each outcome's state.
  template <typename F>
  Outcomes then(Outcomes prev, F&& f) {
    Outcomes out;
    for (auto& o : prev) {
      for (auto& r : f(std::move(o.value), std::move(o.state))) out.push_back(std::move(r));
    }
    return out;
  }

  Outcomes single(RVal v, PathState s) {
    Outcomes out;
    out.push_back(Outcome{std::move(v), std::move(s)});
    return out;
  }

  Outcomes eval(const ExprPtr& e, const Env& env, PathState s) {
    return std::visit(
        overloaded{
            [&](const Lit& n) { return single(SymValue(n.value), std::move(s)); },
            [&](const Var& n) { return single(lookup(env, n.name), std::move(s)); },
            [&](const Lam& n) {
              return single(std::make_shared<const Closure>(Closure{n.param, n.body, env}), std::move(s));
            },
            [&](const LocValue& n) { return single(LocRef{n.loc}, std::move(s)); },
            [&](const App& n) {
              return then(eval(n.fn, env, std::move(s)), [&](RVal fn, PathState s2) {
                const auto* cl = std::get_if<std::shared_ptr<const Closure>>(&fn);
                if (!cl) throw EvalError("application of a non-function: " + describe(fn));
                auto closure = *cl;
                return then(eval(n.arg, env, std::move(s2)), [&](RVal arg, PathState s3) {
                  return eval(closure->body, extend(closure->env, closure->param, std::move(arg)), std::move(s3));
                });
              });
            },
            [&](const Ref& n) {
              return then(eval(n.init, env, std::move(s)), [&](RVal v, PathState s2) {
                Location l = s2.heap.empty() ? 0 : s2.heap.rbegin()->first + 1;
                s2.heap[l] = std::move(v);
                return single(LocRef{l}, std::move(s2));
              });
            },
            [&](const Deref& n) {
              return then(eval(n.ref, env, std::move(s)), [&](RVal r, PathState s2) {
                const auto* l = std::get_if<LocRef>(&r);
                if (!l) throw EvalError("dereference of a non-location: " + describe(r));
                auto it = s2.heap.find(l->loc);
                if (it == s2.heap.end()) throw EvalError("dereference of unallocated location");
                RVal v = it->second;
                return single(std::move(v), std::move(s2));
              });
            },
            [&](const Assign& n) {
              return then(eval(n.target, env, std::move(s)), [&](RVal r, PathState s2) {
                const auto* lp = std::get_if<LocRef>(&r);
                if (!lp) throw EvalError("assignment to a non-location: " + describe(r));
                Location l = lp->loc;
                if (!s2.heap.count(l)) throw EvalError("assignment to unallocated location");
                return then(eval(n.value, env, std::move(s2)), [&](RVal v, PathState s3) {
                  s3.heap[l] = v;
                  return single(std::move(v), std::move(s3));
                });
              });
            },
            [&](const If& n) {
              return then(eval(n.cond, env, std::move(s)), [&](RVal c, PathState s2) {
                const SymValue& cv = expect_data(c, "if condition");
                if (cv.is_concrete()) {
                  if (!cv.concrete().is_bool()) {
                    throw EvalError("if condition must be a boolean, got " + cv.to_string());
                  }
                  return eval(cv.concrete().as_bool() ? n.then_branch : n.else_branch, env, std::move(s2));
                }
                if (cv.kind() != SymValue::Kind::Symbolic || cv.term().sort() != smt::Sort::Bool) {
                  throw EvalError("if condition must be a boolean, got " + cv.to_string());
                }
                smt::Term cond = cv.term();
                BranchResult br = branch(cond, s2.pc, solver_);
                Outcomes out;
                if (br.then_feasible && br.else_feasible) {
                  PathState st = s2;
                  st.pc.push_back(cond);
                  for (auto& o : eval(n.then_branch, env, std::move(st))) out.push_back(std::move(o));
                  s2.pc.push_back(smt::mk_not(cond));
                  for (auto& o : eval(n.else_branch, env, std::move(s2))) out.push_back(std::move(o));
                } else if (br.then_feasible) {
                  s2.pc.push_back(cond);
                  out = eval(n.then_branch, env, std::move(s2));
                } else if (br.else_feasible) {
                  s2.pc.push_back(smt::mk_not(cond));
                  out = eval(n.else_branch, env, std::move(s2));
                }
                return out;
              });
            },
            [&](const BinaryOp& n) {
              return then(eval(n.lhs, env, std::move(s)), [&](RVal a, PathState s2) {
                return then(eval(n.rhs, env, std::move(s2)), [&](RVal b, PathState s3) {
                  SymValue r = sym_binop(n.op, expect_data(a, "operand"), expect_data(b, "operand"));
                  return single(std::move(r), std::move(s3));
                });
              });
            },
            [&](const Construct& n) {
              auto it = program_.arities.find(n.tag);
              if (it != program_.arities.end() && it->second != n.args.size()) {
                throw EvalError("constructor " + n.tag + " used with " + std::to_string(n.args.size()) +
                                " arguments, expected " + std::to_string(it->second));
              }
              return construct(n, 0, {}, env, std::move(s));
            },
            [&](const Project& n) {
              return then(eval(n.target, env, std::move(s)), [&](RVal v, PathState s2) {
                const SymValue& sv = expect_data(v, "projection target");
                std::vector<SymValue> args;
                std::string tag;
                if (sv.kind() == SymValue::Kind::Ctor) {
                  tag = sv.tag();
                  args = sv.args();
                } else if (sv.is_concrete() && sv.concrete().is_ctor()) {
                  tag = sv.concrete().tag();
                  args.assign(sv.concrete().args().begin(), sv.concrete().args().end());
                } else {
                  throw EvalError("projection proj " + n.tag + " applied to " + sv.to_string());
                }
                if (tag != n.tag) throw EvalError("projection proj " + n.tag + " applied to " + sv.to_string());
                if (static_cast<std::size_t>(n.index) > args.size()) {
                  throw EvalError("projection index " + std::to_string(n.index) + " out of range for " +
                                  sv.to_string());
                }
                return single(args[static_cast<std::size_t>(n.index) - 1], std::move(s2));
              });
            },
            [&](const Install& n) {
              return then(eval(n.handler, env, std::move(s)), [&](RVal h, PathState s2) {
                const auto* cl = std::get_if<std::shared_ptr<const Closure>>(&h);
                if (!cl) throw EvalError("install expects a function, got " + describe(h));
                s2.handlers[n.channel] = *cl;
                return single(SymValue(Primitive::unit()), std::move(s2));
              });
            },
            [&](const Send& n) {
              return then(eval(n.payload, env, std::move(s)), [&](RVal v, PathState s2) {
                s2.queue.emplace_back(n.channel, expect_data(v, "sent value"));
                return single(SymValue(Primitive::unit()), std::move(s2));
              });
            },
            [&](const Secret& n) {
              SymValue v = fresh(s, n.channel);
              s.trace.push_back(SymEvent{n.channel, v});
              return single(std::move(v), std::move(s));
            },
        },
        e->node);
  }

  Outcomes construct(const Construct& n, std::size_t i, std::vector<SymValue> done, const Env& env,
                     PathState s) {
    if (i == n.args.size()) return single(SymValue::ctor(n.tag, std::move(done)), std::move(s));
    return then(eval(n.args[i], env, std::move(s)), [&](RVal v, PathState s2) {
      std::vector<SymValue> acc = done;
      acc.push_back(expect_data(v, "constructor argument"));
      return construct(n, i + 1, std::move(acc), env, std::move(s2));
    });
  }

  const Program& program_;
  const DriverConfig& cfg_;
  const ExecOptions& options_;
  smt::Solver solver_;
};

}  // namespace

ExecResult sym_exec(const Program& program, const DriverConfig& cfg, const ExecOptions& options) {
  cfg.validate();
  Executor ex(program, cfg, options);
  return ex.run();
}

}  // namespace ibni::sym
