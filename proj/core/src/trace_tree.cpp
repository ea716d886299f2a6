#include <algorithm>
#include <map>

#include "ibni/checker.hpp"

namespace ibni::check {

TraceTree::TraceTree(const std::vector<AnalyzedTrace>& traces) {
  nodes_.emplace_back();  // root: the initial state
  std::vector<std::map<std::pair<std::string, std::string>, int>> index(1);
  for (std::size_t t = 0; t < traces.size(); ++t) {
    int cur = 0;
    for (const auto& ev : traces[t].obs) {
      auto key = std::make_pair(ev.name, ev.value.to_string());
      auto it = index[static_cast<std::size_t>(cur)].find(key);
      if (it == index[static_cast<std::size_t>(cur)].end()) {
        Node n;
        n.parent = cur;
        n.name = key.first;
        n.value = key.second;
        nodes_.push_back(std::move(n));
        index.emplace_back();
        int id = static_cast<int>(nodes_.size()) - 1;
        nodes_[static_cast<std::size_t>(cur)].children.push_back(id);
        index[static_cast<std::size_t>(cur)].emplace(key, id);
        cur = id;
      } else {
        cur = it->second;
      }
    }
    nodes_[static_cast<std::size_t>(cur)].traces.push_back(t);
  }
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    for (auto t : n.traces) preorder_.push_back(t);
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
  }
}

namespace {

bool is_gui_event(const policy::ObsEvent& e, const std::set<std::string>& gui_channels) {
  return e.value.is_concrete() && gui_channels.count(e.name) != 0;
}

}  // namespace

bool gui_inputs_low(const std::vector<AnalyzedTrace>& traces, const std::set<std::string>& gui_channels,
                    const Policy& p) {
  for (const auto& t : traces) {
    for (std::size_t i = 0; i < t.obs.size(); ++i) {
      if (is_gui_event(t.obs[i], gui_channels) && t.levels[i] != p.lattice.low()) return false;
    }
  }
  return true;
}

std::vector<std::pair<std::size_t, std::size_t>> prune_pairs(const TraceTree& tree,
                                                             const std::vector<AnalyzedTrace>& traces,
                                                             const std::set<std::string>& gui_channels,
                                                             const Policy& p, Level s) {
  const auto& order = tree.preorder();
  const auto& eq = p.equiv(s);
  // Traces get the same signature exactly when their concrete GUI event
  // sequences agree on names and on values up to =_S.
  std::map<std::pair<int, std::string>, int> sig_ids;
  int next_sig = 1;
  std::vector<int> trace_sig(traces.size(), 0);
  for (std::size_t t = 0; t < traces.size(); ++t) {
    int sig = 0;
    for (const auto& ev : traces[t].obs) {
      if (!is_gui_event(ev, gui_channels)) continue;
      auto key = std::make_pair(sig, ev.name + "!" + eq.canonical(*ev.value.concrete));
      auto it = sig_ids.find(key);
      if (it == sig_ids.end()) it = sig_ids.emplace(key, next_sig++).first;
      sig = it->second;
    }
    trace_sig[t] = sig;
  }
  std::map<int, std::vector<std::size_t>> buckets;  // signature -> preorder positions
  for (std::size_t pos = 0; pos < order.size(); ++pos) buckets[trace_sig[order[pos]]].push_back(pos);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& [sig, members] : buckets) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i; j < members.size(); ++j) out.emplace_back(members[i], members[j]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ibni::check
