#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ibni/policy.hpp"
#include "ibni/solver.hpp"
#include "ibni/symbolic.hpp"

namespace ibni::check {

using policy::Level;
using policy::Policy;

/// Name of the primed copy of a variable.
std::string primed(const std::string& name);

/// Renames every variable of the trace and path condition to its primed copy.
sym::PathNode prime(const sym::PathNode& node);

/// A path with the levels of its events.
struct AnalyzedTrace {
  sym::SymTrace trace;
  std::vector<smt::Term> pc;
  policy::ObsTrace obs;
  std::vector<Level> levels;
};

/// Throws SymbolicTruthError when a level depends on a secret value.
AnalyzedTrace analyze(const sym::PathNode& node, const Policy& p);

/// The four conjuncts of the query for one pair and one level.
struct NiFormula {
  smt::Term inputs_equal;    // S-input views related
  smt::Term outputs_differ;  // S-views not related
  smt::Term phi1;
  smt::Term phi2;
  /// False when the input views differ in length, names or levels.
  bool inputs_match = true;

  smt::Term conjunction() const;
};

/// Builds the query for `t1` and the already primed `t2`. An input at level
/// L is part of the S-input view when L join S is below High and is compared
/// under the equivalence of L join S; the S-view keeps events at or below S
/// and compares them under =_S.
NiFormula build_ni_formula(const AnalyzedTrace& t1, const AnalyzedTrace& t2, Level s, const Policy& p);

/// Trie of traces: each node is an event and traces sharing a prefix share
/// the nodes of that prefix.
class TraceTree {
 public:
  struct Node {
    int parent = -1;
    std::string name;
    std::string value;
    std::vector<int> children;
    std::vector<std::size_t> traces;  // traces ending here
  };

  explicit TraceTree(const std::vector<AnalyzedTrace>& traces);

  const std::vector<Node>& nodes() const { return nodes_; }
  /// Trace indices in preorder of their end nodes.
  const std::vector<std::size_t>& preorder() const { return preorder_; }

 private:
  std::vector<Node> nodes_;
  std::vector<std::size_t> preorder_;
};

/// Unordered pairs (including self-pairs) whose concrete GUI-input
/// sequences are related by =_S, as positions in the tree's preorder,
/// sorted lexicographically.
std::vector<std::pair<std::size_t, std::size_t>> prune_pairs(const TraceTree& tree,
                                                             const std::vector<AnalyzedTrace>& traces,
                                                             const std::set<std::string>& gui_channels,
                                                             const Policy& p, Level s);

/// True when every concrete GUI event of every trace is at level Low, the
/// condition under which pruning is sound.
bool gui_inputs_low(const std::vector<AnalyzedTrace>& traces, const std::set<std::string>& gui_channels,
                    const Policy& p);

struct CheckOptions {
  bool prune = true;
  smt::SolverOptions solver;
};

struct CheckStats {
  std::size_t traces = 0;
  std::size_t pairs = 0;     // unordered, including self-pairs
  std::size_t levels = 0;    // levels checked (all but High)
  std::size_t examined = 0;  // pair/level combinations visited
  std::uint64_t queries_issued = 0;
  std::uint64_t queries_pruned = 0;
  bool pruning = false;
  /// Pruning was requested but some GUI event is not Low.
  bool pruning_disabled = false;
  double seconds = 0.0;
};

struct Verdict {
  bool secure = true;
  std::string level;
  lang::Trace trace1;
  lang::Trace trace2;
  smt::Model model;
  /// Symbolic sources of the counterexample.
  sym::SymTrace sym_trace1;
  sym::SymTrace sym_trace2;
  std::uint64_t queries = 0;

  /// key=value lines.
  std::string to_text() const;
};

/// Checks every unordered pair (with self-pairs) at every level except
/// High, levels in lattice order, pairs in preorder; returns the first
/// satisfiable query as a violation.
Verdict check_ibni(const std::vector<sym::PathNode>& paths, const Policy& p,
                   const std::set<std::string>& gui_channels, const CheckOptions& options = {},
                   CheckStats* stats = nullptr);

/// Literal re-check on concrete traces: equal S-input views and unrelated
/// S-views.
bool violates_at(const Policy& p, Level s, const lang::Trace& t1, const lang::Trace& t2);

}  // namespace ibni::check
