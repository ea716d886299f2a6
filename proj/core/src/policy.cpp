#include "ibni/policy.hpp"

#include <stdexcept>

#include "ibni/errors.hpp"
#include "ibni/trace.hpp"

namespace ibni::policy {

bool is_output(const std::string& channel) { return channel == lang::kNetOut; }

std::vector<Level> levels(const ObsTrace& t, const Policy& p) {
  std::vector<Level> out(t.size(), p.lattice.high());
  for (const auto& c : p.conditions) {
    auto truth = evaluate_all(t, c.formula);
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (is_output(t[i].name)) continue;
      if (truth[i] == Tri::Unknown) {
        throw SymbolicTruthError("truth of '" + to_string(c.formula) + "' at position " + std::to_string(i) +
                                 " depends on symbolic values");
      }
      if (truth[i] == Tri::True) out[i] = p.lattice.meet(out[i], c.level);
    }
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (is_output(t[i].name)) out[i] = p.lattice.low();
  }
  return out;
}

Level level(const ObsTrace& t, const Policy& p, std::size_t i) {
  if (i >= t.size()) throw std::out_of_range("position " + std::to_string(i) + " outside the trace");
  return levels(t, p)[i];
}

FilteredTrace filter_with_levels(const ObsTrace& t, const std::vector<Level>& lv, const Lattice& lattice,
                                 Level s, bool inputs_only) {
  FilteredTrace out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (inputs_only && is_output(t[i].name)) continue;
    if (!lattice.leq(lv[i], s)) continue;
    out.positions.push_back(i);
    out.events.push_back(t[i]);
  }
  return out;
}

FilteredTrace filter(const ObsTrace& t, const Policy& p, Level s, bool inputs_only) {
  return filter_with_levels(t, levels(t, p), p.lattice, s, inputs_only);
}

bool equiv(const Policy& p, Level s, const lang::Primitive& a, const lang::Primitive& b) {
  return p.equiv(s).holds(a, b);
}

bool views_equivalent(const Policy& p, Level s, const FilteredTrace& a, const FilteredTrace& b) {
  if (a.events.size() != b.events.size()) return false;
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    const auto& x = a.events[i];
    const auto& y = b.events[i];
    if (x.name != y.name) return false;
    if (!x.value.is_concrete() || !y.value.is_concrete()) {
      throw SymbolicTruthError("view comparison on symbolic values");
    }
    if (!equiv(p, s, *x.value.concrete, *y.value.concrete)) return false;
  }
  return true;
}

std::string Policy::to_text() const {
  std::string out;
  // One chain per covering edge keeps the text faithful to the order.
  for (std::size_t a = 0; a < lattice.size(); ++a) {
    for (std::size_t b = 0; b < lattice.size(); ++b) {
      auto la = static_cast<Level>(a);
      auto lb = static_cast<Level>(b);
      if (a == b || !lattice.leq(la, lb)) continue;
      bool covering = true;
      for (std::size_t c = 0; c < lattice.size(); ++c) {
        auto lc = static_cast<Level>(c);
        if (c != a && c != b && lattice.leq(la, lc) && lattice.leq(lc, lb)) covering = false;
      }
      if (covering) out += "lattice " + lattice.name(la) + " <= " + lattice.name(lb) + ";\n";
    }
  }
  for (std::size_t l = 0; l < equivs.size(); ++l) {
    out += "equiv " + lattice.name(static_cast<Level>(l)) + " = " + equivs[l].to_string() + ";\n";
  }
  for (const auto& c : conditions) out += to_string(c.formula) + " |> " + lattice.name(c.level) + ";\n";
  return out;
}

}  // namespace ibni::policy
