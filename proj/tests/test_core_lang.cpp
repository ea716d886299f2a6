#include <filesystem>
#include <random>

#include "doctest.h"
#include "ibni/errors.hpp"
#include "ibni/harness.hpp"
#include "ibni/parser.hpp"
#include "ibni/trace.hpp"

using namespace ibni;
using namespace ibni::lang;

namespace {

class ExprGen {
 public:
  explicit ExprGen(std::mt19937_64& rng) : rng_(rng) {}

  ExprPtr make(int depth) {
    if (depth == 0) return leaf();
    int d = depth - 1;
    switch (pick(14)) {
      case 0: return build::lam(name(), make(d));
      case 1: return build::app(make(d), make(d));
      case 2: return build::ref(make(d));
      case 3: return build::deref(make(d));
      case 4: return build::assign(make(d), make(d));
      case 5: return build::if_(make(d), make(d), make(d));
      case 6:
      case 7: {
        static const BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Lt,     BinOp::Le, BinOp::Eq,
                                    BinOp::Ne,  BinOp::BitAnd, BinOp::BitOr, BinOp::And, BinOp::Or};
        return build::binop(ops[pick(11)], make(d), make(d));
      }
      case 8: {
        std::vector<ExprPtr> args;
        for (int i = pick(3); i > 0; --i) args.push_back(make(d));
        return build::construct(pick(2) ? "Pair" : "Box", std::move(args));
      }
      case 9: return build::project("Pair", 1 + pick(2), make(d));
      case 10: return build::install(pick(2) ? "btn" : "box", make(d));
      case 11: return build::send(pick(2) ? "netout" : "btn", make(d));
      default: return leaf();
    }
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::string name() {
    static const char* names[] = {"x", "y", "z", "_"};
    return names[pick(4)];
  }

  ExprPtr leaf() {
    switch (pick(7)) {
      case 0: return build::boolean(pick(2) == 1);
      case 1: return build::unit();
      case 2: return build::secret("id");
      case 3: return build::var(name());
      case 4: return build::integer(static_cast<std::int32_t>(rng_()));
      default: return build::integer(pick(100));
    }
  }

  std::mt19937_64& rng_;
};

}  // namespace

TEST_CASE("parse maps the grammar directly onto the AST") {
  CHECK(structurally_equal(parse_expr("if true then 1 else 2"),
                           build::if_(build::boolean(true), build::integer(1), build::integer(2))));
  CHECK(structurally_equal(parse_expr("send netout (1 + 2)"),
                           build::send("netout", build::binop(BinOp::Add, build::integer(1), build::integer(2)))));
  CHECK(structurally_equal(parse_expr("let x = 1 in x"),
                           build::app(build::lam("x", build::var("x")), build::integer(1))));
  CHECK(structurally_equal(parse_expr("a; b"), build::app(build::lam("_", build::var("b")), build::var("a"))));
  CHECK(structurally_equal(parse_expr("!r := !r + 1"),
                           build::assign(build::deref(build::var("r")),
                                         build::binop(BinOp::Add, build::deref(build::var("r")), build::integer(1)))));
  CHECK(structurally_equal(parse_expr("0xffffff00"), build::integer(static_cast<std::int32_t>(0xffffff00u))));
  CHECK(structurally_equal(parse_expr("proj Pair 2 (Pair(1, true))"),
                           build::project("Pair", 2, build::construct("Pair", {build::integer(1), build::boolean(true)}))));
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_program("let x = 1 in\n  x +");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_program("send 3 1"), SyntaxError);
  CHECK_THROWS_AS(parse_program("fun x -> y"), SyntaxError);
  CHECK_THROWS_AS(parse_program("(1"), SyntaxError);
}

TEST_CASE("constructor arities are recorded at parse time") {
  auto p = parse_program("Pair(1, Box(true))");
  CHECK(p.arities.at("Pair") == 2);
  CHECK(p.arities.at("Box") == 1);
}

TEST_CASE("bundled programs round-trip through the printer") {
  auto corpus = harness::default_corpus_dir();
  int files = 0;
  for (const auto& app : {"bump", "loctoggle", "contacts", "whereru"}) {
    for (const auto& variant : {"secure", "insecure1", "insecure2"}) {
      auto path = corpus / app / (std::string(variant) + ".ibl");
      auto p = parse_program(harness::read_file(path));
      auto again = parse_expr(print_expr(p.body));
      CHECK_MESSAGE(structurally_equal(p.body, again), path.string());
      ++files;
    }
  }
  CHECK(files == 12);

  auto bump = parse_program(harness::read_file(corpus / "bump" / "secure.ibl"));
  int installs = 0;
  std::function<void(const ExprPtr&)> count = [&](const ExprPtr& e) {
    if (!e) return;
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Install>) {
            ++installs;
            count(n.handler);
          } else if constexpr (std::is_same_v<T, App>) {
            count(n.fn), count(n.arg);
          } else if constexpr (std::is_same_v<T, Lam>) {
            count(n.body);
          }
        },
        e->node);
  };
  count(bump.body);
  CHECK(installs == 3);
}

TEST_CASE("printer and parser round-trip on random ASTs") {
  std::mt19937_64 rng(7);
  ExprGen gen(rng);
  for (int i = 0; i < 2000; ++i) {
    ExprPtr e = gen.make(1 + i % 5);
    std::string text = print_expr(e);
    ExprPtr back = parse_expr(text);
    REQUIRE_MESSAGE(structurally_equal(e, back), text);
  }
}

TEST_CASE("substitution is capture-avoiding") {
  using namespace build;
  CHECK(structurally_equal(subst(binop(BinOp::Add, var("x"), integer(1)), "x", integer(2)),
                           binop(BinOp::Add, integer(2), integer(1))));
  CHECK(structurally_equal(subst(lam("x", var("x")), "x", integer(5)), lam("x", var("x"))));
  CHECK(structurally_equal(subst(lam("y", binop(BinOp::Add, var("x"), var("y"))), "x", integer(3)),
                           lam("y", binop(BinOp::Add, integer(3), var("y")))));
}

TEST_CASE("trace concatenation drops empty events") {
  Trace a({Event{"id", Primitive::integer(0)}});
  Trace empty;
  Trace tau;
  tau.append(std::optional<Event>{});
  CHECK(tau.empty());
  CHECK(trace_concat(a, tau) == a);
  CHECK(trace_concat(empty, Trace({Event{"netout", Primitive::integer(1)}})) ==
        Trace({Event{"netout", Primitive::integer(1)}}));
  CHECK(trace_concat(Trace({Event{"a", Primitive::integer(1)}}), Trace({Event{"b", Primitive::integer(2)}})) ==
        Trace({Event{"a", Primitive::integer(1)}, Event{"b", Primitive::integer(2)}}));
}

TEST_CASE("primitive operators wrap at 32 bits and reject mixed kinds") {
  CHECK(apply_binop(BinOp::Add, Primitive::integer(INT32_MAX), Primitive::integer(1)) ==
        Primitive::integer(INT32_MIN));
  CHECK(apply_binop(BinOp::Mul, Primitive::integer(65536), Primitive::integer(65536)) == Primitive::integer(0));
  CHECK(apply_binop(BinOp::BitAnd, Primitive::integer(-1), Primitive::integer(0xff)) == Primitive::integer(0xff));
  CHECK(apply_binop(BinOp::Lt, Primitive::integer(-1), Primitive::integer(0)) == Primitive::boolean(true));
  CHECK(apply_binop(BinOp::Eq, Primitive::ctor("A", {Primitive::integer(1)}),
                    Primitive::ctor("A", {Primitive::integer(1)})) == Primitive::boolean(true));
  CHECK_THROWS_AS(apply_binop(BinOp::Add, Primitive::integer(1), Primitive::boolean(true)), EvalError);

  std::mt19937_64 rng(3);
  static const BinOp int_ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::BitAnd, BinOp::BitOr};
  for (int i = 0; i < 500; ++i) {
    auto a = static_cast<std::int32_t>(rng()), b = static_cast<std::int32_t>(rng());
    for (BinOp op : int_ops) CHECK(apply_binop(op, Primitive::integer(a), Primitive::integer(b)).is_int());
  }
}

TEST_CASE("primitive literals parse") {
  CHECK(parse_primitive("-3") == Primitive::integer(-3));
  CHECK(parse_primitive("Contact(1, false)") ==
        Primitive::ctor("Contact", {Primitive::integer(1), Primitive::boolean(false)}));
  CHECK(parse_primitive("unit") == Primitive::unit());
  CHECK_THROWS_AS(parse_primitive("x"), SyntaxError);
}
