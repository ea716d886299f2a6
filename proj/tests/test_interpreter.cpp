#include <map>
#include <memory>
#include <random>
#include <variant>

#include "doctest.h"
#include "ibni/errors.hpp"
#include "ibni/harness.hpp"
#include "ibni/interpreter.hpp"
#include "ibni/parser.hpp"

using namespace ibni;
using namespace ibni::lang;
using namespace ibni::interp;

namespace {

Primitive prim_of(const EvalResult& r) {
  auto p = as_primitive(*r.value);
  REQUIRE(p.has_value());
  return *p;
}

Trace trace_of(std::initializer_list<std::pair<const char*, Primitive>> events) {
  Trace t;
  for (const auto& [n, v] : events) t.append(Event{n, v});
  return t;
}

// Environment-passing evaluator for the pure fragment (literals, variables,
// lambdas, application, if, operators). Independent of substitution.
struct Closure;
using NaiveValue = std::variant<Primitive, std::shared_ptr<Closure>>;
using NaiveEnv = std::map<std::string, NaiveValue>;
struct Closure {
  std::string param;
  ExprPtr body;
  NaiveEnv env;
};

NaiveValue naive_eval(const ExprPtr& e, const NaiveEnv& env) {
  if (auto* n = e->as<Lit>()) return n->value;
  if (auto* n = e->as<Var>()) return env.at(n->name);
  if (auto* n = e->as<Lam>()) return std::make_shared<Closure>(Closure{n->param, n->body, env});
  if (auto* n = e->as<App>()) {
    NaiveValue f = naive_eval(n->fn, env);
    NaiveValue a = naive_eval(n->arg, env);
    auto* c = std::get_if<std::shared_ptr<Closure>>(&f);
    if (!c) throw EvalError("apply non-function");
    NaiveEnv inner = (*c)->env;
    inner[(*c)->param] = a;
    return naive_eval((*c)->body, inner);
  }
  if (auto* n = e->as<If>()) {
    NaiveValue c = naive_eval(n->cond, env);
    auto* p = std::get_if<Primitive>(&c);
    if (!p || !p->is_bool()) throw EvalError("if on non-boolean");
    return naive_eval(p->as_bool() ? n->then_branch : n->else_branch, env);
  }
  if (auto* n = e->as<BinaryOp>()) {
    NaiveValue a = naive_eval(n->lhs, env);
    NaiveValue b = naive_eval(n->rhs, env);
    auto* pa = std::get_if<Primitive>(&a);
    auto* pb = std::get_if<Primitive>(&b);
    if (!pa || !pb) throw EvalError("operator on function");
    return apply_binop(n->op, *pa, *pb);
  }
  throw EvalError("outside the pure fragment");
}

// Random closed terms in which only lambda literals are applied, so every
// term terminates.
class PureGen {
 public:
  explicit PureGen(std::mt19937_64& rng) : rng_(rng) {}

  ExprPtr make(int depth, std::vector<std::string>& scope) {
    if (depth == 0) return leaf(scope);
    int d = depth - 1;
    switch (pick(6)) {
      case 0: {
        std::string x = fresh_name();
        scope.push_back(x);
        ExprPtr body = make(d, scope);
        scope.pop_back();
        ExprPtr arg = make(d, scope);
        return build::app(build::lam(x, body), arg);
      }
      case 1: {
        std::string x = fresh_name();
        scope.push_back(x);
        ExprPtr body = make(d, scope);
        scope.pop_back();
        return build::lam(x, body);
      }
      case 2: return build::if_(build::binop(BinOp::Lt, make(d, scope), make(d, scope)), make(d, scope), make(d, scope));
      case 3: return build::binop(BinOp::Add, make(d, scope), make(d, scope));
      case 4: return build::binop(BinOp::Sub, make(d, scope), make(d, scope));
      default: return leaf(scope);
    }
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  // Reusing a small name pool exercises shadowing.
  std::string fresh_name() {
    static const char* names[] = {"x", "y", "z"};
    return names[pick(3)];
  }
  ExprPtr leaf(const std::vector<std::string>& scope) {
    if (!scope.empty() && pick(2)) return build::var(scope[static_cast<std::size_t>(pick(static_cast<int>(scope.size())))]);
    return build::integer(pick(10));
  }
  std::mt19937_64& rng_;
};

}  // namespace

TEST_CASE("big-step rules") {
  auto r = eval_big(parse_expr("!(ref 7)"), MachineState{});
  CHECK(prim_of(r) == Primitive::integer(7));
  CHECK(r.state.heap.size() == 1);

  r = eval_big(parse_expr("if false then 1 else 2"), MachineState{});
  CHECK(prim_of(r) == Primitive::integer(2));
  CHECK(r.state.heap.empty());
  CHECK(r.state.queue.empty());

  r = eval_big(parse_expr("send netout 5"), MachineState{});
  CHECK(prim_of(r) == Primitive::unit());
  REQUIRE(r.state.queue.size() == 1);
  CHECK(r.state.queue.front().first == "netout");
  CHECK(r.state.queue.front().second == Primitive::integer(5));

  r = eval_big(parse_expr("send a 1; send b 2"), MachineState{});
  REQUIRE(r.state.queue.size() == 2);
  CHECK(r.state.queue.back().first == "b");

  r = eval_big(parse_expr("install c (fun x -> x); install c (fun y -> 1)"), MachineState{});
  REQUIRE(r.state.handlers.count("c") == 1);
  CHECK(structurally_equal(r.state.handlers.at("c"), parse_expr("fun y -> 1")));

  r = eval_big(parse_expr("let r = ref 1 in r := !r + 41; !r"), MachineState{});
  CHECK(prim_of(r) == Primitive::integer(42));

  r = eval_big(parse_expr("proj Pair 2 (Pair(1, Box(3)))"), MachineState{});
  CHECK(prim_of(r) == Primitive::ctor("Box", {Primitive::integer(3)}));
}

TEST_CASE("big-step errors") {
  CHECK_THROWS_AS(eval_big(parse_expr("proj Pair 1 (Box(1))"), MachineState{}), EvalError);
  CHECK_THROWS_AS(eval_big(parse_expr("!3"), MachineState{}), EvalError);
  CHECK_THROWS_AS(eval_big(parse_expr("3 4"), MachineState{}), EvalError);
  CHECK_THROWS_AS(eval_big(parse_expr("1 + true"), MachineState{}), EvalError);
  CHECK_THROWS_AS(eval_big(parse_expr("secret id"), MachineState{}), EvalError);
}

TEST_CASE("small steps: output first, then handler, then input") {
  InputScript empty;
  ScriptCursor cursor(empty);

  MachineState s;
  s.queue.emplace_back("netout", Primitive::integer(0));
  auto st = step_small(s, cursor);
  REQUIRE(st);
  CHECK(st->rule == StepRule::Output);
  CHECK(st->events == std::vector<Event>{Event{"netout", Primitive::integer(0)}});
  CHECK(st->state.queue.empty());

  MachineState h;
  h.handlers["c"] = parse_expr("fun x -> send netout x");
  h.queue.emplace_back("c", Primitive::integer(3));
  auto s1 = step_small(h, cursor);
  REQUIRE(s1);
  CHECK(s1->rule == StepRule::Handle);
  CHECK(s1->events.empty());
  auto s2 = step_small(s1->state, cursor);
  REQUIRE(s2);
  CHECK(s2->rule == StepRule::Output);
  CHECK(s2->events == std::vector<Event>{Event{"netout", Primitive::integer(3)}});

  InputScript script;
  script.injections.push_back(Event{"idBox", Primitive::boolean(true)});
  ScriptCursor c2(script);
  auto s3 = step_small(MachineState{}, c2);
  REQUIRE(s3);
  CHECK(s3->rule == StepRule::Input);
  CHECK(s3->events == std::vector<Event>{Event{"idBox", Primitive::boolean(true)}});
  REQUIRE(s3->state.queue.size() == 1);
  CHECK(s3->state.queue.front().first == "idBox");
  CHECK_FALSE(step_small(MachineState{}, cursor).has_value());

  MachineState stuck;
  stuck.queue.emplace_back("nobody", Primitive::unit());
  CHECK_THROWS_AS(step_small(stuck, cursor), StuckError);
}

TEST_CASE("run_program produces the bump traces") {
  auto corpus = harness::default_corpus_dir();
  auto secure = parse_program(harness::read_file(corpus / "bump" / "secure.ibl"));
  auto insecure = parse_program(harness::read_file(corpus / "bump" / "insecure2.ibl"));
  auto script = InputScript::parse("secret id 0\nsecret ph 1\nidBox true\nsendBtn unit\n");

  auto r = run_program(secure, script);
  CHECK_FALSE(r.truncated);
  CHECK(r.trace == trace_of({{"id", Primitive::integer(0)},
                             {"ph", Primitive::integer(1)},
                             {"idBox", Primitive::boolean(true)},
                             {"sendBtn", Primitive::unit()},
                             {"netout", Primitive::integer(0)}}));

  r = run_program(insecure, script);
  CHECK(r.trace == trace_of({{"id", Primitive::integer(0)},
                             {"ph", Primitive::integer(1)},
                             {"idBox", Primitive::boolean(true)},
                             {"sendBtn", Primitive::unit()},
                             {"netout", Primitive::integer(1)}}));
}

TEST_CASE("run_program reports truncation and stuck states") {
  auto loop = parse_program("install c (fun x -> send c x); send c 0");
  auto r = run_program(loop, InputScript{}, 50);
  CHECK(r.truncated);
  CHECK(r.steps == 50);

  auto stuck = parse_program("send nowhere 1");
  CHECK_THROWS_AS(run_program(stuck, InputScript{}), StuckError);
}

TEST_CASE("input scripts round-trip") {
  auto s = InputScript::parse("-- comment\nsecret id 7\nmRadio false\nspinner Pick(2)\n");
  CHECK(s.injections.size() == 2);
  CHECK(s.secrets.at("id").front() == Primitive::integer(7));
  auto again = InputScript::parse(s.to_text());
  CHECK(again.injections == s.injections);
  CHECK(again.secrets == s.secrets);
}

TEST_CASE("substitution semantics agree with an environment evaluator") {
  std::mt19937_64 rng(11);
  PureGen gen(rng);
  int compared = 0;
  for (int i = 0; i < 3000; ++i) {
    std::vector<std::string> scope;
    ExprPtr e = gen.make(1 + i % 5, scope);
    bool naive_ok = true;
    NaiveValue nv;
    try {
      nv = naive_eval(e, {});
    } catch (const EvalError&) {
      naive_ok = false;
    }
    bool subst_ok = true;
    std::optional<Primitive> sv;
    try {
      auto r = eval_big(e, MachineState{});
      sv = as_primitive(*r.value);
    } catch (const EvalError&) {
      subst_ok = false;
    }
    REQUIRE_MESSAGE(naive_ok == subst_ok, print_expr(e));
    if (!naive_ok) continue;
    auto* np = std::get_if<Primitive>(&nv);
    REQUIRE(sv.has_value() == (np != nullptr));
    if (np) {
      CHECK_MESSAGE(*np == *sv, print_expr(e));
      ++compared;
    }
  }
  CHECK(compared > 1000);
}
