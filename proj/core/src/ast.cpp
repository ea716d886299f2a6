#include "ibni/ast.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace ibni::lang {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

ExprPtr make(Expr::Node node) { return std::make_shared<const Expr>(Expr{std::move(node)}); }

}  // namespace

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  auto eq = structurally_equal;
  return std::visit(
      overloaded{
          [&](const Lit& x) { return x.value == std::get<Lit>(b.node).value; },
          [&](const Var& x) { return x.name == std::get<Var>(b.node).name; },
          [&](const Lam& x) {
            const auto& y = std::get<Lam>(b.node);
            return x.param == y.param && eq(x.body, y.body);
          },
          [&](const App& x) {
            const auto& y = std::get<App>(b.node);
            return eq(x.fn, y.fn) && eq(x.arg, y.arg);
          },
          [&](const Ref& x) { return eq(x.init, std::get<Ref>(b.node).init); },
          [&](const Deref& x) { return eq(x.ref, std::get<Deref>(b.node).ref); },
          [&](const Assign& x) {
            const auto& y = std::get<Assign>(b.node);
            return eq(x.target, y.target) && eq(x.value, y.value);
          },
          [&](const If& x) {
            const auto& y = std::get<If>(b.node);
            return eq(x.cond, y.cond) && eq(x.then_branch, y.then_branch) &&
                   eq(x.else_branch, y.else_branch);
          },
          [&](const BinaryOp& x) {
            const auto& y = std::get<BinaryOp>(b.node);
            return x.op == y.op && eq(x.lhs, y.lhs) && eq(x.rhs, y.rhs);
          },
          [&](const Construct& x) {
            const auto& y = std::get<Construct>(b.node);
            return x.tag == y.tag &&
                   std::equal(x.args.begin(), x.args.end(), y.args.begin(), y.args.end(), eq);
          },
          [&](const Project& x) {
            const auto& y = std::get<Project>(b.node);
            return x.tag == y.tag && x.index == y.index && eq(x.target, y.target);
          },
          [&](const Install& x) {
            const auto& y = std::get<Install>(b.node);
            return x.channel == y.channel && eq(x.handler, y.handler);
          },
          [&](const Send& x) {
            const auto& y = std::get<Send>(b.node);
            return x.channel == y.channel && eq(x.payload, y.payload);
          },
          [&](const Secret& x) { return x.channel == std::get<Secret>(b.node).channel; },
          [&](const LocValue& x) { return x.loc == std::get<LocValue>(b.node).loc; },
      },
      a.node);
}

namespace build {
ExprPtr lit(Primitive p) { return make(Lit{std::move(p)}); }
ExprPtr integer(std::int32_t n) { return lit(Primitive::integer(n)); }
ExprPtr boolean(bool b) { return lit(Primitive::boolean(b)); }
ExprPtr unit() { return lit(Primitive::unit()); }
ExprPtr var(std::string name) { return make(Var{std::move(name)}); }
ExprPtr lam(std::string param, ExprPtr body) { return make(Lam{std::move(param), std::move(body)}); }
ExprPtr app(ExprPtr fn, ExprPtr arg) { return make(App{std::move(fn), std::move(arg)}); }
ExprPtr ref(ExprPtr init) { return make(Ref{std::move(init)}); }
ExprPtr deref(ExprPtr r) { return make(Deref{std::move(r)}); }
ExprPtr assign(ExprPtr target, ExprPtr value) { return make(Assign{std::move(target), std::move(value)}); }
ExprPtr if_(ExprPtr c, ExprPtr t, ExprPtr e) { return make(If{std::move(c), std::move(t), std::move(e)}); }
ExprPtr binop(BinOp op, ExprPtr lhs, ExprPtr rhs) { return make(BinaryOp{op, std::move(lhs), std::move(rhs)}); }
ExprPtr construct(std::string tag, std::vector<ExprPtr> args) {
  return make(Construct{std::move(tag), std::move(args)});
}
ExprPtr project(std::string tag, int index, ExprPtr target) {
  return make(Project{std::move(tag), index, std::move(target)});
}
ExprPtr install(std::string channel, ExprPtr handler) {
  return make(Install{std::move(channel), std::move(handler)});
}
ExprPtr send(std::string channel, ExprPtr payload) { return make(Send{std::move(channel), std::move(payload)}); }
ExprPtr secret(std::string channel) { return make(Secret{std::move(channel)}); }
ExprPtr loc(Location l) { return make(LocValue{l}); }
}  // namespace build

bool is_value(const Expr& e) { return e.is<Lit>() || e.is<Lam>() || e.is<LocValue>(); }

ExprPtr subst(const ExprPtr& e, const std::string& x, const ExprPtr& v) {
  auto s = [&](const ExprPtr& sub) { return subst(sub, x, v); };
  return std::visit(
      overloaded{
          [&](const Lit&) { return e; },
          [&](const LocValue&) { return e; },
          [&](const Secret&) { return e; },
          [&](const Var& n) { return n.name == x ? v : e; },
          // `v` is closed, so stopping at a shadowing binder is enough.
          [&](const Lam& n) { return n.param == x ? e : build::lam(n.param, s(n.body)); },
          [&](const App& n) { return build::app(s(n.fn), s(n.arg)); },
          [&](const Ref& n) { return build::ref(s(n.init)); },
          [&](const Deref& n) { return build::deref(s(n.ref)); },
          [&](const Assign& n) { return build::assign(s(n.target), s(n.value)); },
          [&](const If& n) { return build::if_(s(n.cond), s(n.then_branch), s(n.else_branch)); },
          [&](const BinaryOp& n) { return build::binop(n.op, s(n.lhs), s(n.rhs)); },
          [&](const Construct& n) {
            std::vector<ExprPtr> args;
            args.reserve(n.args.size());
            for (const auto& a : n.args) args.push_back(s(a));
            return build::construct(n.tag, std::move(args));
          },
          [&](const Project& n) { return build::project(n.tag, n.index, s(n.target)); },
          [&](const Install& n) { return build::install(n.channel, s(n.handler)); },
          [&](const Send& n) { return build::send(n.channel, s(n.payload)); },
      },
      e->node);
}

namespace {

void collect_free(const ExprPtr& e, std::set<std::string>& bound, std::set<std::string>& out) {
  auto go = [&](const ExprPtr& sub) { collect_free(sub, bound, out); };
  std::visit(overloaded{
                 [&](const Var& n) {
                   if (!bound.count(n.name)) out.insert(n.name);
                 },
                 [&](const Lam& n) {
                   bool was_bound = bound.count(n.param) > 0;
                   bound.insert(n.param);
                   go(n.body);
                   if (!was_bound) bound.erase(n.param);
                 },
                 [&](const App& n) { go(n.fn), go(n.arg); },
                 [&](const Ref& n) { go(n.init); },
                 [&](const Deref& n) { go(n.ref); },
                 [&](const Assign& n) { go(n.target), go(n.value); },
                 [&](const If& n) { go(n.cond), go(n.then_branch), go(n.else_branch); },
                 [&](const BinaryOp& n) { go(n.lhs), go(n.rhs); },
                 [&](const Construct& n) {
                   for (const auto& a : n.args) go(a);
                 },
                 [&](const Project& n) { go(n.target); },
                 [&](const Install& n) { go(n.handler); },
                 [&](const Send& n) { go(n.payload); },
                 [](const auto&) {},
             },
             e->node);
}

bool is_atom(const Expr& e) {
  return e.is<Lit>() || e.is<Var>() || e.is<Construct>() || e.is<Secret>() || e.is<LocValue>();
}

std::string print_literal(const Primitive& p) {
  switch (p.kind()) {
    case Primitive::Kind::Int: {
      std::int32_t n = p.as_int();
      if (n >= 0) return std::to_string(n);
      // No unary minus in the grammar; negative numbers print as bit patterns.
      char buf[16];
      std::snprintf(buf, sizeof buf, "0x%08x", static_cast<unsigned>(static_cast<std::uint32_t>(n)));
      return buf;
    }
    case Primitive::Kind::Ctor: {
      std::string s = p.tag() + "(";
      for (std::size_t i = 0; i < p.args().size(); ++i) {
        if (i) s += ", ";
        s += print_literal(p.args()[i]);
      }
      return s + ")";
    }
    default:
      return p.to_string();
  }
}

std::string print(const ExprPtr& e);

std::string atom(const ExprPtr& e) { return is_atom(*e) ? print(e) : "(" + print(e) + ")"; }

std::string print(const ExprPtr& e) {
  return std::visit(
      overloaded{
          [](const Lit& n) { return print_literal(n.value); },
          [](const Var& n) { return n.name; },
          [](const LocValue& n) { return "<loc " + std::to_string(n.loc) + ">"; },
          [](const Secret& n) { return "secret " + n.channel; },
          [](const Lam& n) { return "fun " + n.param + " -> " + print(n.body); },
          [](const App& n) {
            std::string fn = n.fn->is<App>() ? print(n.fn) : atom(n.fn);
            return fn + " " + atom(n.arg);
          },
          [](const Ref& n) { return "ref " + atom(n.init); },
          [](const Deref& n) { return "!" + atom(n.ref); },
          [](const Assign& n) { return atom(n.target) + " := " + atom(n.value); },
          [](const If& n) {
            return "if " + print(n.cond) + " then " + print(n.then_branch) + " else " +
                   print(n.else_branch);
          },
          [](const BinaryOp& n) {
            return atom(n.lhs) + " " + std::string(to_string(n.op)) + " " + atom(n.rhs);
          },
          [](const Construct& n) {
            std::string s = n.tag + "(";
            for (std::size_t i = 0; i < n.args.size(); ++i) {
              if (i) s += ", ";
              s += print(n.args[i]);
            }
            return s + ")";
          },
          [](const Project& n) {
            return "proj " + n.tag + " " + std::to_string(n.index) + " " + atom(n.target);
          },
          [](const Install& n) { return "install " + n.channel + " " + atom(n.handler); },
          [](const Send& n) { return "send " + n.channel + " " + atom(n.payload); },
      },
      e->node);
}

}  // namespace

std::vector<std::string> free_vars(const ExprPtr& e) {
  std::set<std::string> bound;
  std::set<std::string> out;
  collect_free(e, bound, out);
  return {out.begin(), out.end()};
}

std::string print_expr(const ExprPtr& e) { return print(e); }

}  // namespace ibni::lang
