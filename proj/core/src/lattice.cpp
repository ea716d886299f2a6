#include "ibni/lattice.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "ibni/errors.hpp"

namespace ibni::policy {

Lattice::Lattice() : Lattice(from_edges({{kLow, kHigh}})) {}

Lattice Lattice::from_edges(const std::vector<std::pair<std::string, std::string>>& edges) {
  Lattice l{Empty{}};
  l.names_ = {kLow, kHigh};
  auto intern = [&](const std::string& n) {
    auto it = std::find(l.names_.begin(), l.names_.end(), n);
    if (it != l.names_.end()) return static_cast<Level>(it - l.names_.begin());
    l.names_.push_back(n);
    return static_cast<Level>(l.names_.size() - 1);
  };
  std::vector<std::pair<Level, Level>> ids;
  for (const auto& [a, b] : edges) ids.emplace_back(intern(a), intern(b));
  const std::size_t n = l.names_.size();
  l.leq_.assign(n * n, false);
  for (std::size_t i = 0; i < n; ++i) l.leq_[i * n + i] = true;
  for (auto [a, b] : ids) l.leq_[l.idx(a, b)] = true;
  // Every element lies between Low and High.
  for (std::size_t i = 0; i < n; ++i) {
    l.leq_[l.idx(l.low(), static_cast<Level>(i))] = true;
    l.leq_[l.idx(static_cast<Level>(i), l.high())] = true;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (l.leq_[i * n + k] && l.leq_[k * n + j]) l.leq_[i * n + j] = true;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && l.leq_[i * n + j] && l.leq_[j * n + i]) {
        throw PolicyError("lattice order is cyclic between " + l.names_[i] + " and " + l.names_[j]);
      }
    }
  }
  if (l.leq_[l.idx(l.high(), l.low())]) throw PolicyError("High must not be below Low");

  l.meet_.assign(n * n, 0);
  l.join_.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      int best_meet = -1;
      int best_join = -1;
      for (std::size_t c = 0; c < n; ++c) {
        if (l.leq_[c * n + a] && l.leq_[c * n + b]) {
          if (best_meet < 0 || l.leq_[static_cast<std::size_t>(best_meet) * n + c]) best_meet = static_cast<int>(c);
        }
        if (l.leq_[a * n + c] && l.leq_[b * n + c]) {
          if (best_join < 0 || l.leq_[c * n + static_cast<std::size_t>(best_join)]) best_join = static_cast<int>(c);
        }
      }
      // The candidate must be comparable with every other lower/upper bound.
      for (std::size_t c = 0; c < n; ++c) {
        if (l.leq_[c * n + a] && l.leq_[c * n + b] && !l.leq_[c * n + static_cast<std::size_t>(best_meet)]) {
          throw PolicyError("levels " + l.names_[a] + " and " + l.names_[b] + " have no unique meet");
        }
        if (l.leq_[a * n + c] && l.leq_[b * n + c] && !l.leq_[static_cast<std::size_t>(best_join) * n + c]) {
          throw PolicyError("levels " + l.names_[a] + " and " + l.names_[b] + " have no unique join");
        }
      }
      l.meet_[a * n + b] = best_meet;
      l.join_[a * n + b] = best_join;
    }
  }
  // Linear extension: sort by number of elements below, ties by declaration.
  for (std::size_t i = 0; i < n; ++i) l.order_.push_back(static_cast<Level>(i));
  auto below = [&](Level x) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += l.leq_[i * n + static_cast<std::size_t>(x)] ? 1 : 0;
    return c;
  };
  std::stable_sort(l.order_.begin(), l.order_.end(), [&](Level x, Level y) { return below(x) < below(y); });
  return l;
}

Level Lattice::find(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw PolicyError("unknown security level '" + name + "'");
  return static_cast<Level>(it - names_.begin());
}

bool Lattice::contains(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

bool LevelEquiv::holds(const lang::Primitive& a, const lang::Primitive& b) const {
  switch (kind) {
    case Kind::Any:
      return true;
    case Kind::Equal:
      return a == b;
    case Kind::Mask:
      if (a.is_int() && b.is_int()) {
        return (static_cast<std::uint32_t>(a.as_int()) & mask) == (static_cast<std::uint32_t>(b.as_int()) & mask);
      }
      if (a.is_ctor() && b.is_ctor()) {
        if (a.tag() != b.tag() || a.args().size() != b.args().size()) return false;
        for (std::size_t i = 0; i < a.args().size(); ++i) {
          if (!holds(a.args()[i], b.args()[i])) return false;
        }
        return true;
      }
      return a == b;
  }
  return false;
}

namespace {

bool is_ctor_like(const sym::SymValue& v) {
  return v.kind() == sym::SymValue::Kind::Ctor || (v.is_concrete() && v.concrete().is_ctor());
}

std::pair<std::string, std::vector<sym::SymValue>> ctor_view(const sym::SymValue& v) {
  if (v.kind() == sym::SymValue::Kind::Ctor) return {v.tag(), v.args()};
  return {v.concrete().tag(), {v.concrete().args().begin(), v.concrete().args().end()}};
}

bool is_int_like(const sym::SymValue& v) {
  if (v.is_concrete()) return v.concrete().is_int();
  return v.kind() == sym::SymValue::Kind::Symbolic && v.term().sort() == smt::Sort::Int;
}

}  // namespace

smt::Term LevelEquiv::constraint(const sym::SymValue& a, const sym::SymValue& b) const {
  if (kind == Kind::Any) return smt::bool_const(true);
  if (a.is_concrete() && b.is_concrete()) return smt::bool_const(holds(a.concrete(), b.concrete()));
  if (is_ctor_like(a) || is_ctor_like(b)) {
    if (!is_ctor_like(a) || !is_ctor_like(b)) return smt::bool_const(false);
    auto [ta, xs] = ctor_view(a);
    auto [tb, ys] = ctor_view(b);
    if (ta != tb || xs.size() != ys.size()) return smt::bool_const(false);
    std::vector<smt::Term> parts;
    for (std::size_t i = 0; i < xs.size(); ++i) parts.push_back(constraint(xs[i], ys[i]));
    return smt::mk_and(std::move(parts));
  }
  bool ia = is_int_like(a);
  bool ib = is_int_like(b);
  if (ia != ib) return smt::bool_const(false);
  if (a.is_concrete() && a.concrete().is_unit()) return smt::bool_const(b.is_concrete() && b.concrete().is_unit());
  if (b.is_concrete() && b.concrete().is_unit()) return smt::bool_const(false);
  smt::Term x = a.to_term();
  smt::Term y = b.to_term();
  if (x.sort() != y.sort()) return smt::bool_const(false);
  if (kind == Kind::Mask && ia) {
    smt::Term m = smt::int_const(static_cast<std::int32_t>(mask));
    return smt::eq(smt::bit_and(x, m), smt::bit_and(y, m));
  }
  return smt::eq(x, y);
}

std::string LevelEquiv::canonical(const lang::Primitive& v) const {
  switch (kind) {
    case Kind::Any:
      return {};
    case Kind::Equal:
      return v.to_string();
    case Kind::Mask:
      if (v.is_int()) {
        return lang::Primitive::integer(static_cast<std::int32_t>(static_cast<std::uint32_t>(v.as_int()) & mask))
            .to_string();
      }
      if (v.is_ctor()) {
        std::string s = v.tag() + "(";
        for (std::size_t i = 0; i < v.args().size(); ++i) s += (i ? ", " : "") + canonical(v.args()[i]);
        return s + ")";
      }
      return v.to_string();
  }
  return {};
}

std::string LevelEquiv::to_string() const {
  switch (kind) {
    case Kind::Equal: return "eq";
    case Kind::Any: return "any";
    case Kind::Mask: {
      char buf[24];
      std::snprintf(buf, sizeof buf, "mask 0x%08x", mask);
      return buf;
    }
  }
  return "?";
}

}  // namespace ibni::policy
