#include <map>
#include <set>

#include "ibni/errors.hpp"
#include "ibni/policy.hpp"
#include "lexer.hpp"

namespace ibni::policy {

namespace {

using detail::Token;
using detail::TokenStream;

std::vector<Token> lex_policy(std::string_view text) {
  return detail::tokenize(text, {"(", ")", ",", ";", ".", "!=", "!", "*", "<=", ">=", "<", ">", "==", "=",
                                 "->", "-", "|>"});
}

const std::set<std::string>& keywords() {
  static const std::set<std::string> k{"not", "and", "or", "X", "U", "G", "F", "S", "P", "last",
                                       "exists", "forall", "true", "false", "unit"};
  return k;
}

bool is_temporal_prefix(const std::string& s) { return s == "X" || s == "G" || s == "F" || s == "P"; }

class FormulaParser {
 public:
  explicit FormulaParser(TokenStream& ts) : ts_(ts) {}

  FormulaPtr formula() { return implication(); }

 private:
  FormulaPtr implication() {
    FormulaPtr lhs = disjunction();
    if (ts_.accept_symbol("->")) return fm::implies(lhs, implication());
    return lhs;
  }

  FormulaPtr disjunction() {
    FormulaPtr f = conjunction();
    while (ts_.accept_ident("or")) f = fm::or_(f, conjunction());
    return f;
  }

  FormulaPtr conjunction() {
    FormulaPtr f = temporal();
    while (ts_.accept_ident("and")) f = fm::and_(f, temporal());
    return f;
  }

  // U and S bind tighter than and/or and associate to the right.
  FormulaPtr temporal() {
    FormulaPtr f = unary();
    if (ts_.accept_ident("U")) return fm::until(f, temporal());
    if (ts_.accept_ident("S")) return fm::since(f, temporal());
    return f;
  }

  FormulaPtr unary() {
    const Token& t = ts_.peek();
    if (t.kind == Token::Kind::Ident) {
      if (ts_.accept_ident("not")) return fm::not_(unary());
      if (is_temporal_prefix(t.text) && !ts_.is_symbol("!", 1)) {
        std::string op = ts_.next().text;
        FormulaPtr a = unary();
        if (op == "X") return fm::next(a);
        if (op == "G") return fm::globally(a);
        if (op == "F") return fm::finally(a);
        return fm::past(a);
      }
      if (t.text == "exists" || t.text == "forall") {
        bool ex = ts_.next().text == "exists";
        std::string name = ts_.expect_identifier("a bound variable");
        if (keywords().count(name)) ts_.fail("'" + name + "' cannot be a variable");
        ts_.expect_symbol(".");
        std::string unique = bind(name);
        FormulaPtr body = formula();
        scopes_.pop_back();
        return ex ? fm::exists(unique, body) : fm::forall(unique, body);
      }
    }
    return atom();
  }

  FormulaPtr atom() {
    if (ts_.accept_symbol("(")) {
      FormulaPtr f = formula();
      ts_.expect_symbol(")");
      return f;
    }
    if (ts_.accept_ident("true")) return fm::truth(true);
    if (ts_.accept_ident("false")) return fm::truth(false);
    if (ts_.is_ident("last") && ts_.is_symbol("(", 1)) {
      ts_.next();
      ts_.next();
      std::string channel = ts_.expect_identifier("a channel name");
      ts_.expect_symbol(",");
      Operand v = operand(true);
      ts_.expect_symbol(")");
      return fm::last(channel, v);
    }
    const Token& t = ts_.peek();
    if (t.kind == Token::Kind::Ident && ts_.is_symbol("!", 1)) {
      std::string channel = ts_.next().text;
      ts_.next();
      return fm::event(channel, operand(true));
    }
    Operand lhs = operand(false);
    CmpOp op;
    if (ts_.accept_symbol("<")) op = CmpOp::Lt;
    else if (ts_.accept_symbol("<=")) op = CmpOp::Le;
    else if (ts_.accept_symbol(">")) op = CmpOp::Gt;
    else if (ts_.accept_symbol(">=")) op = CmpOp::Ge;
    else if (ts_.accept_symbol("==") || ts_.accept_symbol("=")) op = CmpOp::Eq;
    else if (ts_.accept_symbol("!=")) op = CmpOp::Ne;
    else ts_.fail("expected a comparison operator");
    Operand rhs = operand(false);
    return fm::compare(op, lhs, rhs);
  }

  Operand operand(bool allow_star) {
    if (ts_.is_symbol("*")) {
      if (!allow_star) ts_.fail("'*' is only allowed in event atoms");
      ts_.next();
      return Operand::star();
    }
    const Token& t = ts_.peek();
    bool lower = t.kind == Token::Kind::Ident && !t.text.empty() &&
                 !(t.text[0] >= 'A' && t.text[0] <= 'Z');
    if (lower && t.text != "true" && t.text != "false" && t.text != "unit") {
      std::string name = ts_.next().text;
      for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
        if (it->first == name) return Operand::variable(it->second);
      }
      throw PolicyError("unbound formula variable '" + name + "' at " + std::to_string(t.line) + ":" +
                        std::to_string(t.column));
    }
    return Operand::constant(detail::parse_primitive_tokens(ts_));
  }

  std::string bind(const std::string& name) {
    std::string unique = name;
    for (int k = 2; used_.count(unique); ++k) unique = name + "_" + std::to_string(k);
    used_.insert(unique);
    scopes_.emplace_back(name, unique);
    return unique;
  }

  TokenStream& ts_;
  std::vector<std::pair<std::string, std::string>> scopes_;
  std::set<std::string> used_;
};

}  // namespace

FormulaPtr parse_formula(std::string_view text) {
  TokenStream ts(lex_policy(text));
  FormulaParser p(ts);
  FormulaPtr f = p.formula();
  if (!ts.at_end()) ts.fail("unexpected trailing input");
  return f;
}

Policy Policy::parse(std::string_view text) {
  TokenStream ts(lex_policy(text));
  std::vector<std::pair<std::string, std::string>> edges;
  struct PendingEquiv {
    std::string level;
    LevelEquiv equiv;
  };
  std::vector<PendingEquiv> equivs;
  struct PendingCondition {
    FormulaPtr formula;
    std::string level;
    int line;
  };
  std::vector<PendingCondition> conditions;

  while (!ts.at_end()) {
    if (ts.is_ident("lattice") && ts.peek(1).kind == Token::Kind::Ident && !ts.is_symbol("!", 1)) {
      ts.next();
      std::string prev = ts.expect_identifier("a level name");
      bool any = false;
      while (ts.accept_symbol("<=")) {
        std::string next = ts.expect_identifier("a level name");
        edges.emplace_back(prev, next);
        prev = next;
        any = true;
      }
      if (!any) ts.fail("expected '<='");
      ts.expect_symbol(";");
    } else if (ts.is_ident("equiv") && ts.peek(1).kind == Token::Kind::Ident && !ts.is_symbol("!", 1)) {
      ts.next();
      PendingEquiv pe;
      pe.level = ts.expect_identifier("a level name");
      ts.expect_symbol("=");
      if (ts.accept_ident("eq")) {
        pe.equiv.kind = LevelEquiv::Kind::Equal;
      } else if (ts.accept_ident("any")) {
        pe.equiv.kind = LevelEquiv::Kind::Any;
      } else if (ts.accept_ident("mask")) {
        if (ts.peek().kind != Token::Kind::Int) ts.fail("expected a mask constant");
        pe.equiv.kind = LevelEquiv::Kind::Mask;
        pe.equiv.mask = static_cast<std::uint32_t>(ts.next().int_value);
      } else {
        ts.fail("expected 'eq', 'any' or 'mask'");
      }
      ts.expect_symbol(";");
      equivs.push_back(pe);
    } else {
      int line = ts.peek().line;
      FormulaParser fp(ts);
      FormulaPtr f = fp.formula();
      ts.expect_symbol("|>");
      std::string level = ts.expect_identifier("a level name");
      ts.expect_symbol(";");
      conditions.push_back(PendingCondition{f, level, line});
    }
  }

  Policy p;
  p.lattice = Lattice::from_edges(edges);
  p.equivs.assign(p.lattice.size(), LevelEquiv{});
  p.equivs[static_cast<std::size_t>(p.lattice.high())].kind = LevelEquiv::Kind::Any;
  for (const auto& e : equivs) p.equivs[static_cast<std::size_t>(p.lattice.find(e.level))] = e.equiv;
  for (const auto& c : conditions) {
    if (!p.lattice.contains(c.level)) {
      throw PolicyError("line " + std::to_string(c.line) + ": unknown security level '" + c.level + "'");
    }
    p.conditions.push_back(Condition{c.formula, p.lattice.find(c.level)});
  }
  return p;
}

}  // namespace ibni::policy
