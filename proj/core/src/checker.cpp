#include "ibni/checker.hpp"

#include <chrono>
#include <sstream>

#include "ibni/errors.hpp"

namespace ibni::check {

std::string primed(const std::string& name) { return name + "'"; }

sym::PathNode prime(const sym::PathNode& node) {
  sym::PathNode out = node;
  for (auto& ev : out.trace) ev.value = ev.value.rename(primed);
  for (auto& c : out.pc) c = smt::rename(c, primed);
  return out;
}

AnalyzedTrace analyze(const sym::PathNode& node, const Policy& p) {
  AnalyzedTrace a;
  a.trace = node.trace;
  a.pc = node.pc;
  a.obs = policy::observe(node.trace);
  a.levels = policy::levels(a.obs, p);
  return a;
}

smt::Term NiFormula::conjunction() const { return smt::mk_and({inputs_equal, outputs_differ, phi1, phi2}); }

namespace {

// Negation pushed through conjunctions so that view inequality reads as a
// disjunction of per-position differences.
smt::Term negate(const smt::Term& t) {
  switch (t.op()) {
    case smt::TermOp::BoolConst: return smt::bool_const(!t.bool_value());
    case smt::TermOp::Eq: return smt::ne(t.kids()[0], t.kids()[1]);
    case smt::TermOp::Ne: return smt::eq(t.kids()[0], t.kids()[1]);
    case smt::TermOp::And: {
      std::vector<smt::Term> parts;
      for (const auto& k : t.kids()) parts.push_back(negate(k));
      return smt::mk_or(std::move(parts));
    }
    default: return smt::mk_not(t);
  }
}

// Conjunction with constant atoms folded away.
smt::Term conjoin(const std::vector<smt::Term>& atoms) {
  std::vector<smt::Term> kept;
  for (const auto& a : atoms) {
    if (a.is_false()) return smt::bool_const(false);
    if (!a.is_true()) kept.push_back(a);
  }
  return smt::mk_and(std::move(kept));
}

smt::Term disjoin(const std::vector<smt::Term>& atoms) {
  std::vector<smt::Term> kept;
  for (const auto& a : atoms) {
    if (a.is_true()) return smt::bool_const(true);
    if (!a.is_false()) kept.push_back(a);
  }
  return smt::mk_or(std::move(kept));
}

struct ViewItem {
  std::size_t pos;
  Level level;
};

std::vector<ViewItem> input_view(const AnalyzedTrace& t, Level s, const Policy& p) {
  std::vector<ViewItem> out;
  for (std::size_t i = 0; i < t.obs.size(); ++i) {
    if (policy::is_output(t.obs[i].name)) continue;
    if (p.lattice.join(t.levels[i], s) == p.lattice.high()) continue;
    out.push_back({i, t.levels[i]});
  }
  return out;
}

std::vector<std::size_t> full_view(const AnalyzedTrace& t, Level s, const Policy& p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < t.obs.size(); ++i) {
    if (p.lattice.leq(t.levels[i], s)) out.push_back(i);
  }
  return out;
}

}  // namespace

NiFormula build_ni_formula(const AnalyzedTrace& t1, const AnalyzedTrace& t2, Level s, const Policy& p) {
  NiFormula f;
  f.phi1 = smt::mk_and(t1.pc);
  f.phi2 = smt::mk_and(t2.pc);

  auto in1 = input_view(t1, s, p);
  auto in2 = input_view(t2, s, p);
  f.inputs_match = in1.size() == in2.size();
  for (std::size_t k = 0; f.inputs_match && k < in1.size(); ++k) {
    f.inputs_match = t1.trace[in1[k].pos].name == t2.trace[in2[k].pos].name && in1[k].level == in2[k].level;
  }
  if (!f.inputs_match) {
    f.inputs_equal = smt::bool_const(false);
  } else {
    std::vector<smt::Term> atoms;
    for (std::size_t k = 0; k < in1.size(); ++k) {
      const auto& eq = p.equiv(p.lattice.join(in1[k].level, s));
      atoms.push_back(eq.constraint(t1.trace[in1[k].pos].value, t2.trace[in2[k].pos].value));
    }
    f.inputs_equal = conjoin(atoms);
  }

  auto out1 = full_view(t1, s, p);
  auto out2 = full_view(t2, s, p);
  bool same_shape = out1.size() == out2.size();
  for (std::size_t k = 0; same_shape && k < out1.size(); ++k) {
    same_shape = t1.trace[out1[k]].name == t2.trace[out2[k]].name;
  }
  if (!same_shape) {
    f.outputs_differ = smt::bool_const(true);
  } else {
    std::vector<smt::Term> atoms;
    for (std::size_t k = 0; k < out1.size(); ++k) {
      atoms.push_back(negate(p.equiv(s).constraint(t1.trace[out1[k]].value, t2.trace[out2[k]].value)));
    }
    f.outputs_differ = disjoin(atoms);
  }
  return f;
}

std::string Verdict::to_text() const {
  std::ostringstream os;
  os << "verdict=" << (secure ? "secure" : "violation") << "\n";
  if (!secure) {
    os << "level=" << level << "\n";
    for (const auto& e : trace1) os << "trace1=" << e.to_string() << "\n";
    for (const auto& e : trace2) os << "trace2=" << e.to_string() << "\n";
    for (const auto& [name, v] : model) os << "model." << name << "=" << v.to_string() << "\n";
  }
  os << "queries=" << queries << "\n";
  return os.str();
}

Verdict check_ibni(const std::vector<sym::PathNode>& paths, const Policy& p,
                   const std::set<std::string>& gui_channels, const CheckOptions& options, CheckStats* stats) {
  auto start = std::chrono::steady_clock::now();
  CheckStats local;
  CheckStats& st = stats ? *stats : local;
  st = CheckStats{};

  std::vector<AnalyzedTrace> traces;
  std::vector<AnalyzedTrace> primed_traces;
  traces.reserve(paths.size());
  for (const auto& node : paths) {
    traces.push_back(analyze(node, p));
    AnalyzedTrace pr = traces.back();
    sym::PathNode pn = prime(node);
    pr.trace = pn.trace;
    pr.pc = pn.pc;
    pr.obs = policy::observe(pn.trace);
    primed_traces.push_back(std::move(pr));
  }
  TraceTree tree(traces);
  const auto& order = tree.preorder();
  st.traces = traces.size();
  st.pairs = traces.size() * (traces.size() + 1) / 2;

  std::vector<Level> levels;
  for (Level l : p.lattice.ordered()) {
    if (l != p.lattice.high()) levels.push_back(l);
  }
  st.levels = levels.size();
  st.pruning = options.prune && gui_inputs_low(traces, gui_channels, p);
  st.pruning_disabled = options.prune && !st.pruning;

  smt::Solver solver(options.solver);
  Verdict verdict;
  auto finish = [&]() {
    verdict.queries = st.queries_issued;
    st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return verdict;
  };

  for (Level s : levels) {
    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    if (st.pruning) candidates = prune_pairs(tree, traces, gui_channels, p, s);
    std::size_t next_candidate = 0;
    for (std::size_t a = 0; a < order.size(); ++a) {
      for (std::size_t b = a; b < order.size(); ++b) {
        ++st.examined;
        if (st.pruning) {
          if (next_candidate < candidates.size() && candidates[next_candidate] == std::make_pair(a, b)) {
            ++next_candidate;
          } else {
            ++st.queries_pruned;
            continue;
          }
        }
        const AnalyzedTrace& t1 = traces[order[a]];
        const AnalyzedTrace& t2 = primed_traces[order[b]];
        NiFormula f = build_ni_formula(t1, t2, s, p);
        ++st.queries_issued;
        smt::CheckResult r = solver.check(f.conjunction());
        if (!r.sat) continue;
        verdict.secure = false;
        verdict.level = p.lattice.name(s);
        verdict.model = r.model;
        verdict.sym_trace1 = t1.trace;
        verdict.sym_trace2 = t2.trace;
        for (const auto& ev : t1.trace) verdict.trace1.append(lang::Event{ev.name, ev.value.concretize(r.model)});
        for (const auto& ev : t2.trace) verdict.trace2.append(lang::Event{ev.name, ev.value.concretize(r.model)});
        return finish();
      }
    }
  }
  return finish();
}

bool violates_at(const Policy& p, Level s, const lang::Trace& t1, const lang::Trace& t2) {
  auto o1 = policy::observe(t1);
  auto o2 = policy::observe(t2);
  auto in1 = policy::filter(o1, p, s, true);
  auto in2 = policy::filter(o2, p, s, true);
  auto all1 = policy::filter(o1, p, s, false);
  auto all2 = policy::filter(o2, p, s, false);
  return policy::views_equivalent(p, s, in1, in2) && !policy::views_equivalent(p, s, all1, all2);
}

}  // namespace ibni::check
