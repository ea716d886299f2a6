#pragma once

#include <string>

#include "ibni/term.hpp"

namespace ibni::smt {

/// Symbol for a variable name, quoted with |...| when not a simple symbol.
std::string smt_symbol(const std::string& name);

/// SMT-LIB v2 script: one declare-fun per variable (32-bit bit-vectors and
/// Bool), one assert, check-sat and get-model.
std::string emit_smtlib(const Term& c);

/// Expression text of `t` in SMT-LIB syntax.
std::string smt_expr(const Term& t);

struct SmtReply {
  enum class Status { Sat, Unsat, Unknown } status = Status::Unknown;
  Model model;
};

/// Parses "sat"/"unsat"/"unknown" followed by an optional model made of
/// define-fun entries. Variables of `sorts` missing from the model default to
/// 0 / false. Throws SolverProcessError on malformed text.
SmtReply parse_smt_reply(const std::string& text, const VarSorts& sorts);

}  // namespace ibni::smt
