#include "ibni/solver.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <tuple>
#include <unordered_map>

#include <unistd.h>

#include "ibni/errors.hpp"
#include "ibni/sat.hpp"
#include "ibni/smtlib.hpp"

namespace ibni::smt {

namespace {

using Lit = SatSolver::Lit;
using Bits = std::vector<Lit>;
constexpr unsigned kBits = 32;

/// Translates terms into CNF over a SatSolver with hash-consed gates.
class BitBlaster {
 public:
  BitBlaster(SatSolver& sat, unsigned width) : sat_(sat), width_(width) {
    true_ = SatSolver::pos(sat_.new_var());
    sat_.add_clause({true_});
    false_ = SatSolver::negate(true_);
  }

  Lit constant(bool b) const { return b ? true_ : false_; }

  Lit land(Lit a, Lit b) {
    if (a == false_ || b == false_) return false_;
    if (a == true_) return b;
    if (b == true_) return a;
    if (a == b) return a;
    if (a == SatSolver::negate(b)) return false_;
    if (a > b) std::swap(a, b);
    auto key = std::make_tuple(0U, a, b);
    if (auto it = gates_.find(key); it != gates_.end()) return it->second;
    Lit g = SatSolver::pos(sat_.new_var());
    sat_.add_clause({SatSolver::negate(g), a});
    sat_.add_clause({SatSolver::negate(g), b});
    sat_.add_clause({g, SatSolver::negate(a), SatSolver::negate(b)});
    gates_.emplace(key, g);
    return g;
  }

  Lit lor(Lit a, Lit b) { return SatSolver::negate(land(SatSolver::negate(a), SatSolver::negate(b))); }

  Lit lxor(Lit a, Lit b) {
    if (a == false_) return b;
    if (b == false_) return a;
    if (a == true_) return SatSolver::negate(b);
    if (b == true_) return SatSolver::negate(a);
    if (a == b) return false_;
    if (a == SatSolver::negate(b)) return true_;
    // Normalize polarity so that x^y, !x^y, ... share one gate.
    bool flip = false;
    if (a & 1U) {
      a = SatSolver::negate(a);
      flip = !flip;
    }
    if (b & 1U) {
      b = SatSolver::negate(b);
      flip = !flip;
    }
    if (a > b) std::swap(a, b);
    auto key = std::make_tuple(1U, a, b);
    Lit g;
    if (auto it = gates_.find(key); it != gates_.end()) {
      g = it->second;
    } else {
      g = SatSolver::pos(sat_.new_var());
      Lit na = SatSolver::negate(a);
      Lit nb = SatSolver::negate(b);
      Lit ng = SatSolver::negate(g);
      sat_.add_clause({ng, a, b});
      sat_.add_clause({ng, na, nb});
      sat_.add_clause({g, na, b});
      sat_.add_clause({g, a, nb});
      gates_.emplace(key, g);
    }
    return flip ? SatSolver::negate(g) : g;
  }

  Lit mux(Lit c, Lit t, Lit e) { return lor(land(c, t), land(SatSolver::negate(c), e)); }

  Bits add_bits(const Bits& a, const Bits& b, Lit carry) {
    Bits out(kBits);
    for (unsigned i = 0; i < kBits; ++i) {
      Lit axb = lxor(a[i], b[i]);
      out[i] = lxor(axb, carry);
      carry = lor(land(a[i], b[i]), land(carry, axb));
    }
    return out;
  }

  Bits not_bits(const Bits& a) {
    Bits out(kBits);
    for (unsigned i = 0; i < kBits; ++i) out[i] = SatSolver::negate(a[i]);
    return out;
  }

  Bits mul_bits(const Bits& a, const Bits& b) {
    Bits acc(kBits, false_);
    for (unsigned i = 0; i < kBits; ++i) {
      if (b[i] == false_) continue;
      Bits row(kBits, false_);
      for (unsigned j = 0; j + i < kBits; ++j) row[j + i] = land(a[j], b[i]);
      acc = add_bits(acc, row, false_);
    }
    return acc;
  }

  Lit eq_bits(const Bits& a, const Bits& b) {
    Lit all = true_;
    for (unsigned i = 0; i < a.size(); ++i) all = land(all, SatSolver::negate(lxor(a[i], b[i])));
    return all;
  }

  Lit ult_bits(const Bits& a, const Bits& b) {
    Lit lt = false_;
    for (unsigned i = 0; i < kBits; ++i) {
      Lit here = land(SatSolver::negate(a[i]), b[i]);
      Lit same = SatSolver::negate(lxor(a[i], b[i]));
      lt = lor(here, land(same, lt));
    }
    return lt;
  }

  Lit slt_bits(Bits a, Bits b) {
    a[kBits - 1] = SatSolver::negate(a[kBits - 1]);
    b[kBits - 1] = SatSolver::negate(b[kBits - 1]);
    return ult_bits(a, b);
  }

  Bits int_bits(const Term& t) {
    if (auto it = int_cache_.find(t.node()); it != int_cache_.end()) return it->second;
    Bits out;
    switch (t.op()) {
      case TermOp::IntConst: {
        auto v = static_cast<std::uint32_t>(t.int_value());
        out.resize(kBits);
        for (unsigned i = 0; i < kBits; ++i) out[i] = constant(((v >> i) & 1U) != 0);
        break;
      }
      case TermOp::Var: {
        auto found = int_vars_.find(t.name());
        if (found == int_vars_.end()) {
          Bits bits(kBits, false_);
          for (unsigned i = 0; i < width_ && i < kBits; ++i) bits[i] = SatSolver::pos(sat_.new_var());
          found = int_vars_.emplace(t.name(), bits).first;
        }
        out = found->second;
        break;
      }
      case TermOp::Add:
        out = add_bits(int_bits(t.kids()[0]), int_bits(t.kids()[1]), false_);
        break;
      case TermOp::Sub:
        out = add_bits(int_bits(t.kids()[0]), not_bits(int_bits(t.kids()[1])), true_);
        break;
      case TermOp::Mul:
        out = mul_bits(int_bits(t.kids()[0]), int_bits(t.kids()[1]));
        break;
      case TermOp::BitAnd:
      case TermOp::BitOr: {
        Bits a = int_bits(t.kids()[0]);
        Bits b = int_bits(t.kids()[1]);
        out.resize(kBits);
        for (unsigned i = 0; i < kBits; ++i) {
          out[i] = t.op() == TermOp::BitAnd ? land(a[i], b[i]) : lor(a[i], b[i]);
        }
        break;
      }
      default:
        throw EvalError("bit-blast: not an integer term: " + t.to_string());
    }
    int_cache_.emplace(t.node(), out);
    return out;
  }

  Lit bool_lit(const Term& t) {
    if (auto it = bool_cache_.find(t.node()); it != bool_cache_.end()) return it->second;
    Lit out = false_;
    switch (t.op()) {
      case TermOp::BoolConst:
        out = constant(t.bool_value());
        break;
      case TermOp::Var: {
        auto found = bool_vars_.find(t.name());
        if (found == bool_vars_.end()) {
          found = bool_vars_.emplace(t.name(), SatSolver::pos(sat_.new_var())).first;
        }
        out = found->second;
        break;
      }
      case TermOp::Not:
        out = SatSolver::negate(bool_lit(t.kids()[0]));
        break;
      case TermOp::And:
        out = true_;
        for (const auto& k : t.kids()) out = land(out, bool_lit(k));
        break;
      case TermOp::Or:
        out = false_;
        for (const auto& k : t.kids()) out = lor(out, bool_lit(k));
        break;
      case TermOp::Eq:
      case TermOp::Ne: {
        Lit e;
        if (t.kids()[0].sort() == Sort::Bool) {
          e = SatSolver::negate(lxor(bool_lit(t.kids()[0]), bool_lit(t.kids()[1])));
        } else {
          e = eq_bits(int_bits(t.kids()[0]), int_bits(t.kids()[1]));
        }
        out = t.op() == TermOp::Eq ? e : SatSolver::negate(e);
        break;
      }
      case TermOp::Lt:
        out = slt_bits(int_bits(t.kids()[0]), int_bits(t.kids()[1]));
        break;
      case TermOp::Le:
        out = SatSolver::negate(slt_bits(int_bits(t.kids()[1]), int_bits(t.kids()[0])));
        break;
      default:
        throw EvalError("bit-blast: not a boolean term: " + t.to_string());
    }
    bool_cache_.emplace(t.node(), out);
    return out;
  }

  bool lit_true(Lit l) const {
    bool v = sat_.model_value(SatSolver::var_of(l));
    return (l & 1U) ? !v : v;
  }

  const std::map<std::string, Bits>& int_vars() const { return int_vars_; }
  const std::map<std::string, Lit>& bool_vars() const { return bool_vars_; }

 private:
  SatSolver& sat_;
  unsigned width_;
  Lit true_ = 0;
  Lit false_ = 1;
  std::map<std::tuple<unsigned, Lit, Lit>, Lit> gates_;
  std::unordered_map<const Term::Node*, Bits> int_cache_;
  std::unordered_map<const Term::Node*, Lit> bool_cache_;
  std::map<std::string, Bits> int_vars_;
  std::map<std::string, Lit> bool_vars_;
};

void fill_missing(Model& model, const VarSorts& sorts) {
  for (const auto& [name, sort] : sorts) {
    if (model.count(name) == 0) {
      model.emplace(name, sort == Sort::Int ? lang::Primitive::integer(0)
                                            : lang::Primitive::boolean(false));
    }
  }
}

}  // namespace

CheckResult check_sat(const Term& c, unsigned width, std::uint64_t max_conflicts) {
  if (c.sort() != Sort::Bool) throw EvalError("check_sat: constraint is not boolean");
  if (width == 0 || width > kBits) throw EvalError("check_sat: width must be in 1..32");
  CheckResult result;
  result.width = width;
  VarSorts sorts = free_vars(c);
  Term folded = simplify(c);
  if (folded.is_false()) return result;

  SatSolver sat;
  BitBlaster blaster(sat, width);
  Lit root = blaster.bool_lit(folded);
  sat.add_clause({root});
  switch (sat.solve(max_conflicts)) {
    case SatSolver::Result::Unsat:
      return result;
    case SatSolver::Result::Unknown:
      throw SolverResourceError("solver conflict budget of " + std::to_string(max_conflicts) +
                                " exhausted at width " + std::to_string(width));
    case SatSolver::Result::Sat:
      break;
  }
  result.sat = true;
  for (const auto& [name, bits] : blaster.int_vars()) {
    std::uint32_t v = 0;
    for (unsigned i = 0; i < kBits; ++i) {
      if (blaster.lit_true(bits[i])) v |= 1U << i;
    }
    result.model.emplace(name, lang::Primitive::integer(static_cast<std::int32_t>(v)));
  }
  for (const auto& [name, lit] : blaster.bool_vars()) {
    result.model.emplace(name, lang::Primitive::boolean(blaster.lit_true(lit)));
  }
  fill_missing(result.model, sorts);
  return result;
}

std::vector<unsigned> escalation_widths(unsigned initial_width, bool escalate) {
  std::vector<unsigned> widths{initial_width};
  if (!escalate) return widths;
  for (unsigned w : {16U, 32U}) {
    if (w > widths.back()) widths.push_back(w);
  }
  return widths;
}

Solver::Solver(SolverOptions options) : options_(std::move(options)) {
  if (options_.backend == Backend::External && options_.external_command.empty()) {
    auto cmd = external_solver_from_env();
    if (!cmd) throw SolverProcessError("external solver requested but IBNI_SMT_SOLVER is not set");
    options_.external_command = *cmd;
  }
}

CheckResult Solver::check(const Term& c) {
  ++queries_;
  if (options_.backend == Backend::External) return check_sat_external(c, options_.external_command);
  CheckResult last;
  for (unsigned w : escalation_widths(options_.initial_width, options_.escalate)) {
    last = check_sat(c, w, options_.max_conflicts);
    if (last.sat) return last;
  }
  return last;
}

std::optional<std::string> external_solver_from_env() {
  const char* v = std::getenv("IBNI_SMT_SOLVER");
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

CheckResult check_sat_external(const Term& c, const std::string& command) {
  std::string script = emit_smtlib(c);
  char path[] = "/tmp/ibni-query-XXXXXX";
  int fd = mkstemp(path);
  if (fd < 0) throw SolverProcessError("cannot create temporary query file");
  close(fd);
  {
    std::ofstream out(path);
    out << script;
  }
  std::string full = command + " < " + path + " 2>&1";
  FILE* pipe = popen(full.c_str(), "r");
  if (pipe == nullptr) {
    std::remove(path);
    throw SolverProcessError("cannot start external solver: " + command);
  }
  std::string reply;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) reply.append(buf, n);
  int status = pclose(pipe);
  std::remove(path);
  SmtReply parsed;
  try {
    parsed = parse_smt_reply(reply, free_vars(c));
  } catch (const SolverProcessError& e) {
    throw SolverProcessError(std::string(e.what()) + " (exit status " + std::to_string(status) + ")");
  }
  if (parsed.status == SmtReply::Status::Unknown) {
    throw SolverProcessError("external solver answered unknown");
  }
  CheckResult result;
  result.width = kBits;
  result.sat = parsed.status == SmtReply::Status::Sat;
  if (result.sat) result.model = std::move(parsed.model);
  return result;
}

}  // namespace ibni::smt
