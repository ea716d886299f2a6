#include "ibni/interpreter.hpp"

#include <sstream>

#include "ibni/errors.hpp"
#include "ibni/parser.hpp"

namespace ibni::interp {

using namespace ibni::lang;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Primitive expect_primitive(const ExprPtr& v, std::string_view what) {
  if (auto p = as_primitive(*v)) return *p;
  throw EvalError(std::string(what) + " must be a primitive, got " + print_expr(v));
}

void check_arity(const EvalContext& ctx, const std::string& tag, std::size_t n) {
  if (!ctx.arities) return;
  auto it = ctx.arities->find(tag);
  if (it != ctx.arities->end() && it->second != n) {
    throw EvalError("constructor " + tag + " used with " + std::to_string(n) + " arguments, expected " +
                    std::to_string(it->second));
  }
}

EvalResult eval(const ExprPtr& e, MachineState s, EvalContext& ctx);

EvalResult eval(const ExprPtr& e, MachineState s, EvalContext& ctx) {
  if (is_value(*e)) return {e, std::move(s)};  // RVal
  return std::visit(
      overloaded{
          [&](const Var& n) -> EvalResult { throw EvalError("unbound variable '" + n.name + "'"); },
          [&](const App& n) -> EvalResult {  // RApp
            auto [fn, s2] = eval(n.fn, std::move(s), ctx);
            const auto* lam = fn->as<Lam>();
            if (!lam) throw EvalError("application of a non-function: " + print_expr(fn));
            auto [arg, s3] = eval(n.arg, std::move(s2), ctx);
            return eval(subst(lam->body, lam->param, arg), std::move(s3), ctx);
          },
          [&](const Ref& n) -> EvalResult {  // RRef
            auto [v, s2] = eval(n.init, std::move(s), ctx);
            Location l = s2.heap.empty() ? 0 : s2.heap.rbegin()->first + 1;
            s2.heap[l] = v;
            return {build::loc(l), std::move(s2)};
          },
          [&](const Deref& n) -> EvalResult {  // RDeref
            auto [r, s2] = eval(n.ref, std::move(s), ctx);
            const auto* l = r->as<LocValue>();
            if (!l) throw EvalError("dereference of a non-location: " + print_expr(r));
            auto it = s2.heap.find(l->loc);
            if (it == s2.heap.end()) throw EvalError("dereference of unallocated location");
            ExprPtr v = it->second;
            return {v, std::move(s2)};
          },
          [&](const Assign& n) -> EvalResult {  // RAssign
            auto [r, s2] = eval(n.target, std::move(s), ctx);
            const auto* l = r->as<LocValue>();
            if (!l) throw EvalError("assignment to a non-location: " + print_expr(r));
            if (!s2.heap.count(l->loc)) throw EvalError("assignment to unallocated location");
            auto [v, s3] = eval(n.value, std::move(s2), ctx);
            s3.heap[l->loc] = v;
            return {v, std::move(s3)};
          },
          [&](const If& n) -> EvalResult {  // RIfTrue / RIfFalse
            auto [c, s2] = eval(n.cond, std::move(s), ctx);
            Primitive p = expect_primitive(c, "if condition");
            if (!p.is_bool()) throw EvalError("if condition must be a boolean, got " + p.to_string());
            return eval(p.as_bool() ? n.then_branch : n.else_branch, std::move(s2), ctx);
          },
          [&](const BinaryOp& n) -> EvalResult {  // ROp
            auto [a, s2] = eval(n.lhs, std::move(s), ctx);
            auto [b, s3] = eval(n.rhs, std::move(s2), ctx);
            Primitive r = apply_binop(n.op, expect_primitive(a, "operand"), expect_primitive(b, "operand"));
            return {build::lit(std::move(r)), std::move(s3)};
          },
          [&](const Construct& n) -> EvalResult {  // RCstr
            check_arity(ctx, n.tag, n.args.size());
            std::vector<Primitive> args;
            for (const auto& a : n.args) {
              auto [v, s2] = eval(a, std::move(s), ctx);
              s = std::move(s2);
              args.push_back(expect_primitive(v, "constructor argument"));
            }
            return {build::lit(Primitive::ctor(n.tag, std::move(args))), std::move(s)};
          },
          [&](const Project& n) -> EvalResult {  // RProj
            auto [v, s2] = eval(n.target, std::move(s), ctx);
            Primitive p = expect_primitive(v, "projection target");
            if (!p.is_ctor() || p.tag() != n.tag) {
              throw EvalError("projection proj " + n.tag + " applied to " + p.to_string());
            }
            if (static_cast<std::size_t>(n.index) > p.args().size()) {
              throw EvalError("projection index " + std::to_string(n.index) + " out of range for " +
                              p.to_string());
            }
            return {build::lit(p.args()[static_cast<std::size_t>(n.index) - 1]), std::move(s2)};
          },
          [&](const Install& n) -> EvalResult {  // RInst
            auto [h, s2] = eval(n.handler, std::move(s), ctx);
            if (!h->is<Lam>()) throw EvalError("install expects a function, got " + print_expr(h));
            s2.handlers[n.channel] = h;
            return {build::unit(), std::move(s2)};
          },
          [&](const Send& n) -> EvalResult {  // RSend
            auto [v, s2] = eval(n.payload, std::move(s), ctx);
            s2.queue.emplace_back(n.channel, expect_primitive(v, "sent value"));
            return {build::unit(), std::move(s2)};
          },
          [&](const Secret& n) -> EvalResult {
            if (!ctx.cursor) throw EvalError("secret read of '" + n.channel + "' with no input script");
            const auto& answers = ctx.cursor->script->secrets;
            auto it = answers.find(n.channel);
            std::size_t& idx = ctx.cursor->secrets_read[n.channel];
            if (it == answers.end() || idx >= it->second.size()) {
              throw EvalError("no scripted value left for secret channel '" + n.channel + "'");
            }
            Primitive p = it->second[idx++];
            ctx.emitted.push_back(Event{n.channel, p});
            return {build::lit(std::move(p)), std::move(s)};
          },
          [&](const auto&) -> EvalResult { throw EvalError("unexpected expression form"); },
      },
      e->node);
}

}  // namespace

std::optional<Primitive> as_primitive(const Expr& v) {
  if (const auto* l = v.as<Lit>()) return l->value;
  return std::nullopt;
}

EvalResult eval_big(const ExprPtr& e, MachineState state, EvalContext& ctx) {
  return eval(e, std::move(state), ctx);
}

EvalResult eval_big(const ExprPtr& e, MachineState state) {
  EvalContext ctx;
  return eval(e, std::move(state), ctx);
}

std::optional<StepResult> step_small(const MachineState& state, ScriptCursor& cursor,
                                     const CtorArities* arities) {
  if (!state.queue.empty()) {
    const auto& [channel, payload] = state.queue.front();
    if (channel == kNetOut) {  // TOutput
      StepResult r{state, StepRule::Output, {Event{channel, payload}}};
      r.state.queue.pop_front();
      return r;
    }
    auto h = state.handlers.find(channel);  // THandle
    if (h == state.handlers.end()) throw StuckError(channel);
    const auto& lam = std::get<Lam>(h->second->node);
    MachineState next = state;
    next.queue.pop_front();
    EvalContext ctx{&cursor, arities, {}};
    auto result = eval(subst(lam.body, lam.param, build::lit(payload)), std::move(next), ctx);
    return StepResult{std::move(result.state), StepRule::Handle, std::move(ctx.emitted)};
  }
  if (cursor.injections_left()) {  // TInput
    const Event& inj = cursor.script->injections[cursor.next_injection++];
    StepResult r{state, StepRule::Input, {inj}};
    r.state.queue.emplace_back(inj.name, inj.value);
    return r;
  }
  return std::nullopt;
}

RunResult run_program(const Program& program, const InputScript& script, std::size_t max_steps) {
  RunResult out;
  // TProg: onCreate runs the body; the handler parameter is fresh for it.
  out.final_state.handlers[std::string(kOnCreate)] = build::lam("__oncreate_arg", program.body);
  out.final_state.queue.emplace_back(std::string(kOnCreate), Primitive::unit());
  ScriptCursor cursor(script);
  while (out.steps < max_steps) {
    auto r = step_small(out.final_state, cursor, &program.arities);
    if (!r) return out;
    ++out.steps;
    for (auto& ev : r->events) out.trace.append(std::move(ev));
    out.final_state = std::move(r->state);
  }
  out.truncated = !out.final_state.queue.empty() || cursor.injections_left();
  return out;
}

InputScript InputScript::parse(std::string_view text) {
  InputScript script;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto c = line.find("--"); c != std::string::npos) line.resize(c);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    bool is_secret = first == "secret";
    std::string channel = first;
    if (is_secret && !(ls >> channel)) throw SyntaxError("expected channel after 'secret'", lineno, 1);
    std::string rest;
    std::getline(ls, rest);
    if (rest.find_first_not_of(" \t\r") == std::string::npos) {
      throw SyntaxError("expected a value for channel '" + channel + "'", lineno, 1);
    }
    Primitive value;
    try {
      value = parse_primitive(rest);
    } catch (const SyntaxError& e) {
      throw SyntaxError(e.what(), lineno, 1);
    }
    if (is_secret) {
      script.secrets[channel].push_back(std::move(value));
    } else {
      script.injections.push_back(Event{channel, std::move(value)});
    }
  }
  return script;
}

std::string InputScript::to_text() const {
  std::string out;
  for (const auto& [channel, values] : secrets) {
    for (const auto& v : values) out += "secret " + channel + " " + v.to_string() + "\n";
  }
  for (const auto& e : injections) out += e.name + " " + e.value.to_string() + "\n";
  return out;
}

}  // namespace ibni::interp
