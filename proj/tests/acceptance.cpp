// Acceptance checks: one PASS/FAIL line per criterion.

#include <exception>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "ibni/checker.hpp"
#include "ibni/errors.hpp"
#include "ibni/harness.hpp"
#include "ibni/policy.hpp"
#include "ibni/solver.hpp"
#include "ltl_oracle.hpp"
#include "random_gen.hpp"
#include "term_oracle.hpp"

using namespace ibni;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Criterion = std::function<Outcome()>;

Outcome verdict_matrix() {
  auto results = harness::run_matrix();
  int secure = 0, violation = 0, bad = 0;
  double slowest = 0.0;
  std::string first_bad;
  for (const auto& r : results) {
    double t = r.stats.exploration_seconds + r.stats.analysis_seconds;
    slowest = std::max(slowest, t);
    if (!r.matches() || t >= 60.0) {
      ++bad;
      if (first_bad.empty()) first_bad = harness::to_text(r);
    }
    if (r.error.empty()) (r.verdict.secure ? secure : violation)++;
  }
  std::ostringstream os;
  os << secure << " secure, " << violation << " violation, slowest case " << slowest * 1e3 << " ms";
  if (!first_bad.empty()) os << "; " << first_bad;
  return {results.size() == 12 && bad == 0 && secure == 4 && violation == 8, os.str()};
}

std::string show(const policy::FilteredTrace& f) {
  std::string s;
  for (const auto& e : f.events) {
    if (!s.empty()) s += ", ";
    s += e.name + "!" + e.value.to_string();
  }
  return s;
}

Outcome worked_example() {
  auto corpus = harness::default_corpus_dir();
  auto p = policy::Policy::parse(harness::read_file(corpus / "bump" / "policy.pol"));
  auto trace = [](int ph, int out) {
    using lang::Event;
    using lang::Primitive;
    return lang::Trace({Event{"id", Primitive::integer(0)}, Event{"ph", Primitive::integer(ph)},
                        Event{"idBox", Primitive::boolean(true)}, Event{"sendBtn", Primitive::unit()},
                        Event{"netout", Primitive::integer(out)}});
  };
  auto t1 = policy::observe(trace(0, 0));
  auto t2 = policy::observe(trace(1, 1));
  auto low = p.lattice.low();
  bool levels_ok = policy::level(t1, p, 0) == low && policy::level(t1, p, 1) == p.lattice.high() &&
                   policy::level(t1, p, 4) == low;
  bool views_ok = show(policy::filter(t1, p, low, false)) == "id!0, idBox!true, sendBtn!unit, netout!0" &&
                  show(policy::filter(t2, p, low, false)) == "id!0, idBox!true, sendBtn!unit, netout!1" &&
                  show(policy::filter(t1, p, low, true)) == "id!0, idBox!true, sendBtn!unit" &&
                  show(policy::filter(t2, p, low, true)) == "id!0, idBox!true, sendBtn!unit";

  auto loaded = harness::load_case(harness::find_case("bump", "insecure2"), corpus);
  sym::DriverConfig cfg = loaded.driver;
  cfg.depth = 2;
  auto res = sym::sym_exec(loaded.program, cfg);
  const sym::PathNode* node = nullptr;
  for (const auto& n : res.nodes) {
    if (sym::to_string(n.trace) == "id!a1, ph!a2, idBox!true, sendBtn!unit, netout!a2") node = &n;
  }
  if (!node) return {false, "symbolic trace id!a1, ph!a2, idBox!true, sendBtn!unit, netout!a2 not explored"};
  auto f = check::build_ni_formula(check::analyze(*node, p), check::analyze(check::prime(*node), p), low, p);
  std::string display = f.conjunction().to_string();
  bool display_ok = display == "(a1 = a1') && ((a1 != a1') || (a2 != a2')) && true && true";
  auto sat = smt::check_sat(f.conjunction(), 8);
  bool model_ok = sat.sat && sat.model.at("a1") == sat.model.at("a1'") && !(sat.model.at("a2") == sat.model.at("a2'"));
  std::ostringstream os;
  os << "levels " << (levels_ok ? "ok" : "wrong") << ", views " << (views_ok ? "ok" : "wrong") << ", formula "
     << display << (model_ok ? ", sat with a1 = a1' and a2 != a2'" : ", model wrong");
  return {levels_ok && views_ok && display_ok && model_ok, os.str()};
}

Outcome ltl_oracle() {
  gen::Rng rng(20240601);
  gen::FormulaGen fgen(rng);
  int instances = 0, disagreements = 0, positions = 0;
  std::string first;
  while (instances < 1000) {
    auto f = fgen.make(4);
    if (policy::depth(f) > 4) continue;
    auto t = gen::random_trace(rng, 8);
    oracle::LtlOracle oracle(t, f);
    auto obs = policy::observe(t);
    for (std::size_t i = 0; i < t.size(); ++i) {
      ++positions;
      if (policy::models(obs, i, f) != oracle.holds(i, f)) {
        ++disagreements;
        if (first.empty()) first = policy::to_string(f) + " at " + std::to_string(i) + " on " + t.to_string();
      }
    }
    ++instances;
  }
  std::ostringstream os;
  os << instances << " instances, " << positions << " positions, " << disagreements << " disagreements";
  if (!first.empty()) os << "; first: " << first;
  return {disagreements == 0, os.str()};
}

Outcome solver_oracle() {
  gen::Rng rng(4242);
  int n = 0, sat = 0, disagreements = 0, bad_models = 0;
  for (; n < 600; ++n) {
    gen::ConstraintGen cg(rng, 1 + n % 4);
    auto c = cg.boolean(3);
    auto expected = oracle::enumerate_sat(c, 4);
    auto got = smt::check_sat(c, 4);
    if (got.sat != expected.has_value()) ++disagreements;
    if (got.sat) {
      ++sat;
      oracle::Assignment a;
      for (const auto& [name, v] : got.model) {
        a[name] = v.is_bool() ? (v.as_bool() ? 1u : 0u) : static_cast<std::uint32_t>(v.as_int());
      }
      if (oracle::eval_term(c, a) != 1u) ++bad_models;
    }
  }
  std::ostringstream os;
  os << n << " constraints (" << sat << " sat), " << disagreements << " disagreements, " << bad_models
     << " bad models";
  return {disagreements == 0 && bad_models == 0, os.str()};
}

Outcome pruning() {
  harness::PipelineOptions off;
  off.prune = false;
  auto with = harness::run_matrix();
  auto without = harness::run_matrix(off);
  int differ = 0;
  for (std::size_t i = 0; i < with.size(); ++i) {
    if (!with[i].error.empty() || !without[i].error.empty() || with[i].verdict.secure != without[i].verdict.secure)
      ++differ;
  }
  auto on3 = harness::run_case(harness::find_case("bump", "secure"), 3);
  auto off3 = harness::run_case(harness::find_case("bump", "secure"), 3, off);
  std::ostringstream os;
  os << differ << " verdicts differ; bump depth 3 queries " << on3.stats.check.queries_issued << " pruned vs "
     << off3.stats.check.queries_issued << " unpruned";
  return {differ == 0 && on3.stats.check.queries_issued < off3.stats.check.queries_issued, os.str()};
}

Outcome replay() {
  int violations = 0, ok = 0;
  std::string first;
  for (const auto& bc : harness::benchmark_cases()) {
    auto loaded = harness::load_case(bc, harness::default_corpus_dir());
    auto res = harness::run_pipeline(loaded, bc.min_depth);
    if (res.verdict.secure) continue;
    ++violations;
    auto r = harness::replay_counterexample(loaded, res.verdict);
    if (r.ok()) {
      ++ok;
    } else if (first.empty()) {
      first = bc.id();
    }
  }
  std::ostringstream os;
  os << ok << "/" << violations << " counterexamples replay and re-fail the definition";
  if (!first.empty()) os << "; first failure " << first;
  return {violations == 8 && ok == violations, os.str()};
}

Outcome scaling() {
  auto series = harness::run_scaling(harness::find_case("bump", "secure"), 5);
  std::vector<std::size_t> paths;
  bool increasing = true;
  std::ostringstream os;
  for (std::size_t i = 0; i < series.points.size(); ++i) {
    const auto& p = series.points[i];
    paths.push_back(p.paths);
    if (i > 0 && !(p.seconds > series.points[i - 1].seconds)) increasing = false;
    os << (i ? ", " : "") << "d" << p.depth << ": " << p.paths << " paths " << p.seconds * 1e3 << " ms";
  }
  bool paths_ok = paths == std::vector<std::size_t>{3, 9, 27, 81, 243};
  return {paths_ok && increasing && !series.truncated, os.str()};
}

Outcome robustness() {
  auto loaded = harness::load_case(harness::find_case("bump", "insecure2"), harness::default_corpus_dir());
  loaded.policy = policy::Policy::parse(
      "id!* and F(exists x. netout!x and x > 0) |> Low;"
      "idBox!* |> Low; phBox!* |> Low; sendBtn!* |> Low;");
  try {
    auto res = harness::run_pipeline(loaded, 2);
    return {false, std::string("produced verdict ") + (res.verdict.secure ? "secure" : "violation")};
  } catch (const harness::PipelineError& e) {
    try {
      std::rethrow_if_nested(e);
    } catch (const SymbolicTruthError& inner) {
      return {true, std::string("raised SymbolicTruth: ") + inner.what()};
    } catch (const std::exception& inner) {
      return {false, std::string("wrong error: ") + inner.what()};
    }
    return {false, std::string("no nested cause: ") + e.what()};
  }
}

}  // namespace

int main() {
  const std::pair<const char*, Criterion> criteria[] = {
      {"verdict matrix", verdict_matrix},
      {"worked example", worked_example},
      {"LTL oracle equivalence", ltl_oracle},
      {"solver oracle equivalence", solver_oracle},
      {"pruning", pruning},
      {"counterexample replay", replay},
      {"scaling shape", scaling},
      {"robustness", robustness},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << index << " " << name << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
