#include <random>

#include "doctest.h"
#include "ibni/checker.hpp"
#include "ibni/errors.hpp"
#include "ibni/harness.hpp"
#include "ibni/policy.hpp"
#include "ltl_oracle.hpp"
#include "random_gen.hpp"

using namespace ibni;
using namespace ibni::policy;
using lang::Event;
using lang::Primitive;
using lang::Trace;

namespace {

Policy bump_policy() { return Policy::parse(harness::read_file(harness::default_corpus_dir() / "bump" / "policy.pol")); }
Policy loc_policy() {
  return Policy::parse(harness::read_file(harness::default_corpus_dir() / "loctoggle" / "policy.pol"));
}

Trace bump_trace(int ph, int sent) {
  return Trace({Event{"id", Primitive::integer(0)}, Event{"ph", Primitive::integer(ph)},
                Event{"idBox", Primitive::boolean(true)}, Event{"sendBtn", Primitive::unit()},
                Event{"netout", Primitive::integer(sent)}});
}

std::string show(const FilteredTrace& f) {
  std::string s;
  for (const auto& e : f.events) {
    if (!s.empty()) s += ", ";
    s += e.name + "!" + e.value.to_string();
  }
  return s;
}

}  // namespace

TEST_CASE("policy parsing") {
  auto f = parse_formula("id!* and F(sendBtn!unit and last(idBox, true))");
  CHECK(to_string(f) == to_string(parse_formula(to_string(f))));
  auto p = bump_policy();
  CHECK(p.conditions.size() == 5);
  CHECK(p.conditions[0].level == p.lattice.low());

  auto lp = loc_policy();
  CHECK(lp.lattice.size() == 3);
  Level mask = lp.lattice.find("MaskLower8");
  CHECK(lp.conditions[1].level == mask);
  CHECK(to_string(lp.conditions[1].formula) ==
        to_string(parse_formula("longitude!* and (not mRadio!* S mRadio!false)")));

  auto high = Policy::parse("p!* |> High;");
  CHECK(high.conditions[0].level == high.lattice.high());

  CHECK_THROWS_AS(Policy::parse("p!* |> Medium;"), PolicyError);
  CHECK_THROWS_AS(Policy::parse("p!x |> Low;"), PolicyError);
  CHECK_THROWS_AS(Policy::parse("lattice Low <= A <= High; lattice Low <= B <= High; lattice A <= C; lattice B <= C; "
                                "lattice A <= D; lattice B <= D;"),
                  PolicyError);
  CHECK_THROWS_AS(Policy::parse("p!* and |> Low;"), SyntaxError);
}

TEST_CASE("bound variables are renamed apart") {
  auto f = parse_formula("(exists x. a!x) and (exists x. b!x)");
  CHECK(f->a->var != f->b->var);
  CHECK(free_variables(f).empty());
}

TEST_CASE("models on the worked traces") {
  auto p = bump_policy();
  auto t1 = observe(bump_trace(0, 0));
  CHECK(models(t1, 0, p.conditions[0].formula));
  CHECK(models(t1, 2, parse_formula("idBox!true")));
  CHECK_FALSE(models(t1, 1, p.conditions[1].formula));
  CHECK_THROWS_AS(models(t1, 9, parse_formula("true")), std::out_of_range);

  Trace loc({Event{"mRadio", Primitive::boolean(false)}, Event{"longitude", Primitive::integer(11)},
             Event{"mRadio", Primitive::boolean(true)}, Event{"longitude", Primitive::integer(22)}});
  auto lp = loc_policy();
  auto lt = observe(loc);
  CHECK(models(lt, 1, lp.conditions[1].formula));
  CHECK_FALSE(models(lt, 3, lp.conditions[1].formula));
  CHECK(models(lt, 3, lp.conditions[0].formula));
  CHECK_FALSE(models(lt, 1, lp.conditions[0].formula));
}

TEST_CASE("levels and filtered views of the worked example") {
  auto p = bump_policy();
  auto t1 = observe(bump_trace(0, 0));
  auto t2 = observe(bump_trace(1, 1));
  CHECK(level(t1, p, 0) == p.lattice.low());
  CHECK(level(t1, p, 1) == p.lattice.high());
  CHECK(level(t1, p, 4) == p.lattice.low());
  CHECK(level(t1, p, 2) == p.lattice.low());

  Level low = p.lattice.low();
  CHECK(show(filter(t1, p, low, false)) == "id!0, idBox!true, sendBtn!unit, netout!0");
  CHECK(show(filter(t2, p, low, false)) == "id!0, idBox!true, sendBtn!unit, netout!1");
  CHECK(show(filter(t1, p, low, true)) == "id!0, idBox!true, sendBtn!unit");
  CHECK(show(filter(t2, p, low, true)) == "id!0, idBox!true, sendBtn!unit");
  CHECK(filter(t1, p, p.lattice.high(), false).events.size() == t1.size());

  CHECK(views_equivalent(p, low, filter(t1, p, low, true), filter(t2, p, low, true)));
  CHECK_FALSE(views_equivalent(p, low, filter(t1, p, low, false), filter(t2, p, low, false)));
  CHECK(check::violates_at(p, low, bump_trace(0, 0), bump_trace(1, 1)));
}

TEST_CASE("without GUI conditions the GUI inputs are High") {
  auto p = Policy::parse(
      "id!* and F(sendBtn!unit and last(idBox, true)) |> Low;"
      "ph!* and F(sendBtn!unit and last(phBox, true)) |> Low;");
  auto t = observe(bump_trace(0, 0));
  CHECK(level(t, p, 2) == p.lattice.high());
  CHECK(level(t, p, 3) == p.lattice.high());
}

TEST_CASE("level equivalences") {
  auto lp = loc_policy();
  Level mask = lp.lattice.find("MaskLower8");
  CHECK(equiv(lp, mask, Primitive::integer(static_cast<std::int32_t>(0xffffffffu)),
              Primitive::integer(static_cast<std::int32_t>(0xffffff00u))));
  CHECK_FALSE(equiv(lp, mask, Primitive::integer(0x100), Primitive::integer(0)));
  CHECK_FALSE(equiv(lp, lp.lattice.low(), Primitive::integer(1), Primitive::integer(2)));
  CHECK(equiv(lp, lp.lattice.high(), Primitive::integer(1), Primitive::integer(2)));

  std::mt19937_64 rng(5);
  std::vector<Primitive> vals;
  for (int i = 0; i < 12; ++i) vals.push_back(Primitive::integer(static_cast<std::int32_t>(rng() % 0x300)));
  vals.push_back(Primitive::boolean(true));
  vals.push_back(Primitive::unit());
  for (Level s = 0; s < static_cast<Level>(lp.lattice.size()); ++s) {
    for (const auto& a : vals) {
      CHECK(equiv(lp, s, a, a));
      for (const auto& b : vals) {
        CHECK(equiv(lp, s, a, b) == equiv(lp, s, b, a));
        for (const auto& c : vals) {
          if (equiv(lp, s, a, b) && equiv(lp, s, b, c)) CHECK(equiv(lp, s, a, c));
        }
        CHECK((lp.equiv(s).canonical(a) == lp.equiv(s).canonical(b)) == equiv(lp, s, a, b));
      }
    }
  }
}

TEST_CASE("lattice laws") {
  auto p = Policy::parse("lattice Low <= A <= High; lattice Low <= B <= High; lattice A <= C; lattice B <= C;");
  const auto& l = p.lattice;
  auto n = static_cast<Level>(l.size());
  for (Level a = 0; a < n; ++a) {
    CHECK(l.meet(a, a) == a);
    CHECK(l.meet(a, l.high()) == a);
    CHECK(l.meet(a, l.low()) == l.low());
    CHECK(l.join(a, l.low()) == a);
    for (Level b = 0; b < n; ++b) {
      CHECK(l.meet(a, b) == l.meet(b, a));
      CHECK(l.leq(l.meet(a, b), a));
      CHECK(l.leq(a, l.join(a, b)));
      for (Level c = 0; c < n; ++c) CHECK(l.meet(a, l.meet(b, c)) == l.meet(l.meet(a, b), c));
    }
  }
  CHECK(l.meet(l.find("A"), l.find("B")) == l.low());
  CHECK(l.join(l.find("A"), l.find("B")) == l.find("C"));
  const auto& order = l.ordered();
  CHECK(order.front() == l.low());
  CHECK(order.back() == l.high());
  CHECK_THROWS_AS(Policy::parse("lattice A <= B; lattice B <= A;"), PolicyError);
}

TEST_CASE("filtering is monotone in the level") {
  auto lp = loc_policy();
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    Trace t;
    int len = 1 + static_cast<int>(rng() % 7);
    for (int k = 0; k < len; ++k) {
      switch (rng() % 3) {
        case 0: t.append(Event{"mRadio", Primitive::boolean(rng() % 2 == 0)}); break;
        case 1: t.append(Event{"longitude", Primitive::integer(static_cast<std::int32_t>(rng() % 1000))}); break;
        default: t.append(Event{"netout", Primitive::integer(1)}); break;
      }
    }
    auto obs = observe(t);
    for (Level a = 0; a < static_cast<Level>(lp.lattice.size()); ++a) {
      for (Level b = 0; b < static_cast<Level>(lp.lattice.size()); ++b) {
        if (!lp.lattice.leq(a, b)) continue;
        auto fa = filter(obs, lp, a, false).positions;
        auto fb = filter(obs, lp, b, false).positions;
        CHECK(std::includes(fb.begin(), fb.end(), fa.begin(), fa.end()));
      }
    }
  }
}

TEST_CASE("models agrees with the direct evaluator") {
  gen::Rng rng(2024);
  gen::FormulaGen fgen(rng);
  int instances = 0;
  while (instances < 1500) {
    auto f = fgen.make(4);
    if (depth(f) > 4) continue;
    auto t = gen::random_trace(rng, 8);
    oracle::LtlOracle oracle(t, f);
    auto obs = observe(t);
    for (std::size_t i = 0; i < t.size(); ++i) {
      REQUIRE_MESSAGE(models(obs, i, f) == oracle.holds(i, f), to_string(f) << " @" << i << " on " << t.to_string());
    }
    ++instances;
  }
}

TEST_CASE("dual identities on finite traces") {
  gen::Rng rng(77);
  gen::FormulaGen fgen(rng);
  for (int n = 0; n < 400; ++n) {
    auto f = fgen.make(2);
    auto t = observe(gen::random_trace(rng, 8));
    for (std::size_t i = 0; i < t.size(); ++i) {
      CHECK(models(t, i, fm::finally(f)) == models(t, i, fm::until(fm::truth(true), f)));
      CHECK(models(t, i, fm::past(f)) == models(t, i, fm::since(fm::truth(true), f)));
      CHECK(models(t, i, fm::globally(f)) == models(t, i, fm::not_(fm::finally(fm::not_(f)))));
    }
  }
}

TEST_CASE("truth that depends on a secret is an error") {
  sym::SymTrace t{{"id", sym::SymValue::symbolic(smt::int_var("a1"))},
                  {"netout", sym::SymValue::symbolic(smt::int_var("a1"))}};
  auto obs = observe(t);
  CHECK_THROWS_AS(models(obs, 0, parse_formula("F(exists x. netout!x and x > 0)")), SymbolicTruthError);
  CHECK(models(obs, 0, parse_formula("F(netout!*)")));
  CHECK(models(obs, 0, parse_formula("exists x. id!x and X(netout!x)")));
  CHECK_FALSE(models(obs, 0, parse_formula("netout!*")));

  auto p = Policy::parse("id!* and F(exists x. netout!x and x > 0) |> Low;");
  CHECK_THROWS_AS(levels(obs, p), SymbolicTruthError);
  CHECK(levels(obs, bump_policy())[1] == 0);
}

TEST_CASE("GUI events are Low in every bundled app") {
  for (const auto& bc : harness::benchmark_cases()) {
    auto c = harness::load_case(bc, harness::default_corpus_dir());
    sym::DriverConfig cfg = c.driver;
    cfg.depth = bc.min_depth;
    auto res = sym::sym_exec(c.program, cfg);
    for (const auto& node : res.nodes) {
      auto obs = observe(node.trace);
      auto lv = levels(obs, c.policy);
      for (std::size_t i = 0; i < obs.size(); ++i) {
        if (c.driver.is_gui(obs[i].name) && !c.driver.is_secret(obs[i].name)) {
          CHECK_MESSAGE(lv[i] == c.policy.lattice.low(), bc.id());
        }
      }
    }
  }
}

TEST_CASE("policy text round-trips") {
  auto lp = loc_policy();
  auto again = Policy::parse(lp.to_text());
  CHECK(again.to_text() == lp.to_text());
  CHECK(again.equiv(again.lattice.find("MaskLower8")).mask == 0xffffff00u);
}
