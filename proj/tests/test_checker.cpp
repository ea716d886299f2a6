#include "doctest.h"
#include "ibni/checker.hpp"
#include "ibni/errors.hpp"
#include "ibni/harness.hpp"
#include "ibni/parser.hpp"

using namespace ibni;
using namespace ibni::check;

namespace {

harness::LoadedCase load(const std::string& app, const std::string& variant) {
  return harness::load_case(harness::find_case(app, variant), harness::default_corpus_dir());
}

sym::ExecResult explore(const harness::LoadedCase& c, int depth) {
  sym::DriverConfig cfg = c.driver;
  cfg.depth = depth;
  return sym::sym_exec(c.program, cfg);
}

std::set<std::string> gui(const sym::DriverConfig& d) {
  std::set<std::string> out;
  for (const auto& g : d.gui) out.insert(g.name);
  return out;
}

const sym::PathNode& find_node(const sym::ExecResult& r, const std::string& trace) {
  for (const auto& n : r.nodes) {
    if (sym::to_string(n.trace) == trace) return n;
  }
  FAIL("trace not found: " << trace);
  return r.nodes.front();
}

}  // namespace

TEST_CASE("priming renames trace and path condition") {
  sym::PathNode n;
  n.trace = {{"id", sym::SymValue::symbolic(smt::int_var("a1"))}};
  auto p = prime(n);
  CHECK(sym::to_string(p.trace) == "id!a1'");
  CHECK(p.pc.empty());

  sym::PathNode m;
  m.trace = {{"netout", sym::SymValue::symbolic(smt::add(smt::int_var("a1"), smt::int_const(1)))}};
  m.pc = {smt::lt(smt::int_const(0), smt::int_var("a1"))};
  auto pm = prime(m);
  CHECK(sym::to_string(pm.trace) == "netout!a1' + 1");
  CHECK(pm.pc.front().to_string() == "0 < a1'");

  sym::PathNode c;
  c.trace = {{"idBox", sym::SymValue(lang::Primitive::boolean(true))}};
  CHECK(prime(c).trace == c.trace);
}

TEST_CASE("the worked formula for the insecure bump trace") {
  auto c = load("bump", "insecure2");
  auto res = explore(c, 2);
  const auto& node = find_node(res, "id!a1, ph!a2, idBox!true, sendBtn!unit, netout!a2");
  auto t1 = analyze(node, c.policy);
  auto t2 = analyze(prime(node), c.policy);
  auto f = build_ni_formula(t1, t2, c.policy.lattice.low(), c.policy);
  CHECK(f.inputs_match);
  CHECK(f.conjunction().to_string() == "(a1 = a1') && ((a1 != a1') || (a2 != a2')) && true && true");
  auto r = smt::check_sat(f.conjunction(), 8);
  REQUIRE(r.sat);
  CHECK(r.model.at("a1") == r.model.at("a1'"));
  CHECK_FALSE(r.model.at("a2") == r.model.at("a2'"));
}

TEST_CASE("a concrete trace against its own prime is unsatisfiable") {
  auto prog = lang::parse_program("install b (fun x -> send netout x)");
  auto drv = sym::DriverConfig::parse("gui b in {1, 2}\ndepth 2\n");
  auto pol = policy::Policy::parse("b!* |> Low;");
  auto res = sym::sym_exec(prog, drv);
  for (const auto& n : res.nodes) {
    auto t = analyze(n, pol);
    auto f = build_ni_formula(t, analyze(prime(n), pol), pol.lattice.low(), pol);
    CHECK_FALSE(smt::check_sat(f.conjunction(), 32).sat);
  }
}

TEST_CASE("MaskLower8 views compare masked values") {
  auto c = load("loctoggle", "secure");
  auto res = explore(c, 2);
  const auto& node = find_node(res, "mRadio!false, longitude!a1, netout!a1 & -256");
  Level mask = c.policy.lattice.find("MaskLower8");
  auto t1 = analyze(node, c.policy);
  CHECK(t1.levels[1] == mask);
  auto f = build_ni_formula(t1, analyze(prime(node), c.policy), mask, c.policy);
  CHECK(f.inputs_match);
  CHECK(f.inputs_equal.to_string() == "(a1 & -256) = (a1' & -256)");
  CHECK(f.outputs_differ.to_string().find("(a1 & -256) & -256") != std::string::npos);
  CHECK_FALSE(smt::check_sat(f.conjunction(), 32).sat);
}

TEST_CASE("structurally different input views make the query trivial") {
  auto c = load("bump", "secure");
  auto res = explore(c, 1);
  const auto& a = find_node(res, "id!a1, ph!a2, idBox!true");
  const auto& b = find_node(res, "id!a1, ph!a2, sendBtn!unit");
  auto f = build_ni_formula(analyze(a, c.policy), analyze(prime(b), c.policy), c.policy.lattice.low(), c.policy);
  CHECK_FALSE(f.inputs_match);
  CHECK(f.inputs_equal.is_false());
  CHECK_FALSE(smt::check_sat(f.conjunction(), 8).sat);
}

TEST_CASE("check_ibni verdicts") {
  auto c = load("bump", "secure");
  CHECK(check_ibni({}, c.policy, {}).secure);

  auto secure = explore(c, 3);
  CheckStats st;
  auto v = check_ibni(secure.nodes, c.policy, gui(c.driver), {}, &st);
  CHECK(v.secure);
  CHECK(st.queries_issued + st.queries_pruned == st.examined);
  CHECK(st.examined == st.pairs * st.levels);

  auto insecure = load("bump", "insecure2");
  auto res = explore(insecure, 4);
  auto bad = check_ibni(res.nodes, insecure.policy, gui(insecure.driver));
  CHECK_FALSE(bad.secure);
  CHECK(bad.level == "Low");
  CHECK(violates_at(insecure.policy, insecure.policy.lattice.low(), bad.trace1, bad.trace2));
  auto text = bad.to_text();
  CHECK(text.find("verdict=violation\nlevel=Low\n") == 0);
  CHECK(text.find("trace1=netout!") != std::string::npos);
}

TEST_CASE("pruning keeps verdicts and reduces queries") {
  for (const auto& bc : harness::benchmark_cases()) {
    auto c = harness::load_case(bc, harness::default_corpus_dir());
    auto res = explore(c, bc.min_depth);
    CheckStats with, without;
    CheckOptions no_prune;
    no_prune.prune = false;
    auto v1 = check_ibni(res.nodes, c.policy, gui(c.driver), {}, &with);
    auto v2 = check_ibni(res.nodes, c.policy, gui(c.driver), no_prune, &without);
    CHECK_MESSAGE(v1.secure == v2.secure, bc.id());
    CHECK(with.pruning);
    CHECK_FALSE(without.pruning);
    CHECK(with.queries_issued <= without.queries_issued);
    if (v1.secure) {
      CHECK(with.queries_issued + with.queries_pruned == with.pairs * with.levels);
      CHECK(without.queries_issued == without.pairs * without.levels);
    }
  }
}

TEST_CASE("pruned pairs share their GUI inputs") {
  auto c = load("bump", "secure");
  auto res = explore(c, 2);
  std::vector<AnalyzedTrace> traces;
  for (const auto& n : res.nodes) traces.push_back(analyze(n, c.policy));
  TraceTree tree(traces);
  CHECK(tree.preorder().size() == traces.size());
  auto pairs = prune_pairs(tree, traces, gui(c.driver), c.policy, c.policy.lattice.low());
  auto gui_seq = [&](std::size_t i) {
    std::string s;
    for (const auto& e : traces[i].trace) {
      if (c.driver.is_gui(e.name)) s += e.to_string() + ";";
    }
    return s;
  };
  std::size_t same = 0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    for (std::size_t j = i; j < traces.size(); ++j) same += gui_seq(i) == gui_seq(j);
  }
  CHECK(pairs.size() == same);
  for (auto [i, j] : pairs) {
    CHECK(i <= j);
    CHECK(gui_seq(tree.preorder()[i]) == gui_seq(tree.preorder()[j]));
  }
  CHECK(gui_inputs_low(traces, gui(c.driver), c.policy));
}

TEST_CASE("pruning is disabled when GUI inputs are not Low") {
  auto c = load("bump", "insecure2");
  auto pol = policy::Policy::parse(
      "id!* and F(sendBtn!unit and last(idBox, true)) |> Low;"
      "ph!* and F(sendBtn!unit and last(phBox, true)) |> Low;");
  auto res = explore(c, 2);
  CheckStats st;
  auto v = check_ibni(res.nodes, pol, gui(c.driver), {}, &st);
  CHECK(st.pruning_disabled);
  CHECK_FALSE(st.pruning);
  CheckOptions no_prune;
  no_prune.prune = false;
  CHECK(check_ibni(res.nodes, pol, gui(c.driver), no_prune).secure == v.secure);
}

TEST_CASE("queries are symmetric in the pair") {
  auto c = load("contacts", "insecure1");
  auto res = explore(c, 2);
  std::vector<AnalyzedTrace> plain, primed;
  for (const auto& n : res.nodes) {
    plain.push_back(analyze(n, c.policy));
    primed.push_back(analyze(prime(n), c.policy));
  }
  Level low = c.policy.lattice.low();
  int sat = 0;
  for (std::size_t i = 0; i < plain.size(); i += 3) {
    for (std::size_t j = 0; j < plain.size(); j += 2) {
      auto f = build_ni_formula(plain[i], primed[j], low, c.policy);
      auto g = build_ni_formula(plain[j], primed[i], low, c.policy);
      bool a = smt::check_sat(f.conjunction(), 8).sat;
      bool b = smt::check_sat(g.conjunction(), 8).sat;
      CHECK(a == b);
      sat += a;
    }
  }
  CHECK(sat > 0);
}

TEST_CASE("violations persist at larger depths") {
  for (const auto& bc : harness::benchmark_cases()) {
    if (bc.expect_secure) continue;
    auto c = harness::load_case(bc, harness::default_corpus_dir());
    auto res = explore(c, bc.min_depth + 1);
    CHECK_MESSAGE(!check_ibni(res.nodes, c.policy, gui(c.driver)).secure, bc.id());
  }
}

TEST_CASE("secret-dependent policies raise SymbolicTruth") {
  auto c = load("bump", "insecure2");
  auto res = explore(c, 2);
  auto pol = policy::Policy::parse("id!* and F(exists x. netout!x and x > 0) |> Low; idBox!* |> Low;");
  CHECK_THROWS_AS(check_ibni(res.nodes, pol, gui(c.driver)), SymbolicTruthError);
}
