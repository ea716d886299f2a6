#include "ibni/parser.hpp"

#include <cctype>
#include <set>

#include "ibni/errors.hpp"
#include "lexer.hpp"

namespace ibni::lang {

namespace {

using detail::Token;
using detail::TokenStream;

const std::set<std::string, std::less<>> kKeywords = {
    "fun", "let", "in", "if", "then", "else", "ref", "send",
    "install", "secret", "proj", "true", "false", "unit",
};

bool is_ctor_name(const std::string& s) { return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])); }

std::vector<Token> lex_program(std::string_view text) {
  return detail::tokenize(text, {"(", ")", ",", ";", ":=", "->", "!=", "!", "==", "<=", "<", "=", "+",
                                 "-", "*", "&&", "&", "||", "|"});
}

class Parser {
 public:
  explicit Parser(std::string_view text) : ts_(lex_program(text)) {}

  ExprPtr parse_all() {
    ExprPtr e = seq();
    if (!ts_.at_end()) ts_.fail("unexpected trailing input");
    return e;
  }

  CtorArities& arities() { return arities_; }

 private:
  ExprPtr seq() {
    ExprPtr first = assign();
    if (ts_.accept_symbol(";")) {
      ExprPtr rest = seq();
      // e1; e2 is sugar for (fun _ -> e2) e1.
      return build::app(build::lam("_", rest), first);
    }
    return first;
  }

  ExprPtr assign() {
    ExprPtr target = disj();
    if (ts_.accept_symbol(":=")) return build::assign(target, assign());
    return target;
  }

  ExprPtr disj() {
    ExprPtr e = conj();
    while (ts_.accept_symbol("||")) e = build::binop(BinOp::Or, e, conj());
    return e;
  }

  ExprPtr conj() {
    ExprPtr e = compare();
    while (ts_.accept_symbol("&&")) e = build::binop(BinOp::And, e, compare());
    return e;
  }

  ExprPtr compare() {
    ExprPtr e = bit_or();
    static const std::pair<std::string_view, BinOp> ops[] = {
        {"<=", BinOp::Le}, {"<", BinOp::Lt}, {"==", BinOp::Eq}, {"!=", BinOp::Ne}};
    for (const auto& [sym, op] : ops) {
      if (ts_.accept_symbol(sym)) return build::binop(op, e, bit_or());
    }
    return e;
  }

  ExprPtr bit_or() {
    ExprPtr e = bit_and();
    while (ts_.accept_symbol("|")) e = build::binop(BinOp::BitOr, e, bit_and());
    return e;
  }

  ExprPtr bit_and() {
    ExprPtr e = additive();
    while (ts_.accept_symbol("&")) e = build::binop(BinOp::BitAnd, e, additive());
    return e;
  }

  ExprPtr additive() {
    ExprPtr e = multiplicative();
    for (;;) {
      if (ts_.accept_symbol("+")) {
        e = build::binop(BinOp::Add, e, multiplicative());
      } else if (ts_.accept_symbol("-")) {
        e = build::binop(BinOp::Sub, e, multiplicative());
      } else {
        return e;
      }
    }
  }

  ExprPtr multiplicative() {
    ExprPtr e = application();
    while (ts_.accept_symbol("*")) e = build::binop(BinOp::Mul, e, application());
    return e;
  }

  std::string channel_name() {
    std::string name = ts_.expect_identifier("channel name");
    if (kKeywords.count(name)) ts_.fail("keyword '" + name + "' cannot name a channel");
    return name;
  }

  ExprPtr application() {
    if (ts_.accept_ident("ref")) return build::ref(application());
    if (ts_.accept_ident("send")) {
      std::string ch = channel_name();
      return build::send(ch, application());
    }
    if (ts_.accept_ident("install")) {
      std::string ch = channel_name();
      return build::install(ch, application());
    }
    if (ts_.accept_ident("proj")) {
      std::string tag = ts_.expect_identifier("constructor name");
      if (!is_ctor_name(tag)) ts_.fail("constructor names start with an upper-case letter");
      if (ts_.peek().kind != Token::Kind::Int) ts_.fail("expected projection index");
      int index = static_cast<int>(ts_.next().int_value);
      if (index < 1) ts_.fail("projection index must be at least 1");
      return build::project(tag, index, application());
    }
    ExprPtr e = primary();
    while (starts_primary()) e = build::app(e, primary());
    return e;
  }

  bool starts_primary() const {
    const Token& t = ts_.peek();
    switch (t.kind) {
      case Token::Kind::Int:
        return true;
      case Token::Kind::Ident:
        // `in`, `then`, `else` terminate; prefix forms are not arguments.
        return t.text != "in" && t.text != "then" && t.text != "else" && t.text != "ref" &&
               t.text != "send" && t.text != "install" && t.text != "proj";
      case Token::Kind::Symbol:
        return t.text == "(" || t.text == "!";
      default:
        return false;
    }
  }

  ExprPtr primary() {
    const Token& t = ts_.peek();
    if (t.kind == Token::Kind::Int) {
      return build::integer(static_cast<std::int32_t>(ts_.next().int_value));
    }
    if (ts_.accept_symbol("(")) {
      ExprPtr e = seq();
      ts_.expect_symbol(")");
      return e;
    }
    if (ts_.accept_symbol("!")) return build::deref(primary());
    if (t.kind != Token::Kind::Ident) ts_.fail("expected an expression");

    if (ts_.accept_ident("true")) return build::boolean(true);
    if (ts_.accept_ident("false")) return build::boolean(false);
    if (ts_.accept_ident("unit")) return build::unit();
    if (ts_.accept_ident("secret")) return build::secret(channel_name());
    if (ts_.accept_ident("fun")) {
      std::string x = binder();
      ts_.expect_symbol("->");
      return build::lam(x, seq());
    }
    if (ts_.accept_ident("let")) {
      std::string x = binder();
      ts_.expect_symbol("=");
      ExprPtr bound = seq();
      ts_.expect_ident("in");
      ExprPtr body = seq();
      return build::app(build::lam(x, body), bound);
    }
    if (ts_.accept_ident("if")) {
      ExprPtr c = seq();
      ts_.expect_ident("then");
      ExprPtr th = seq();
      ts_.expect_ident("else");
      ExprPtr el = seq();
      return build::if_(c, th, el);
    }
    if (kKeywords.count(t.text)) ts_.fail("unexpected keyword");

    std::string name = ts_.next().text;
    if (is_ctor_name(name)) {
      std::vector<ExprPtr> args;
      if (ts_.accept_symbol("(")) {
        if (!ts_.accept_symbol(")")) {
          do {
            args.push_back(seq());
          } while (ts_.accept_symbol(","));
          ts_.expect_symbol(")");
        }
      }
      arities_.emplace(name, args.size());
      return build::construct(name, std::move(args));
    }
    return build::var(name);
  }

  std::string binder() {
    std::string x = ts_.expect_identifier("variable name");
    if (kKeywords.count(x) || is_ctor_name(x)) ts_.fail("invalid variable name '" + x + "'");
    return x;
  }

  TokenStream ts_;
  CtorArities arities_;
};

Primitive parse_prim(TokenStream& ts) {
  bool negative = ts.accept_symbol("-");
  const Token& t = ts.peek();
  if (t.kind == Token::Kind::Int) {
    auto v = static_cast<std::int32_t>(ts.next().int_value);
    return Primitive::integer(negative ? wrap_sub(0, v) : v);
  }
  if (negative) ts.fail("expected integer after '-'");
  if (ts.accept_ident("true")) return Primitive::boolean(true);
  if (ts.accept_ident("false")) return Primitive::boolean(false);
  if (ts.accept_ident("unit")) return Primitive::unit();
  if (t.kind == Token::Kind::Ident && is_ctor_name(t.text)) {
    std::string tag = ts.next().text;
    std::vector<Primitive> args;
    if (ts.accept_symbol("(")) {
      if (!ts.accept_symbol(")")) {
        do {
          args.push_back(parse_prim(ts));
        } while (ts.accept_symbol(","));
        ts.expect_symbol(")");
      }
    }
    return Primitive::ctor(tag, std::move(args));
  }
  ts.fail("expected a primitive value");
}

}  // namespace

Program parse_program(std::string_view text) {
  Parser p(text);
  Program prog;
  prog.body = p.parse_all();
  prog.arities = std::move(p.arities());
  auto fv = free_vars(prog.body);
  if (!fv.empty()) throw SyntaxError("unbound variable '" + fv.front() + "'", 1, 1);
  return prog;
}

ExprPtr parse_expr(std::string_view text) {
  Parser p(text);
  return p.parse_all();
}

}  // namespace ibni::lang

namespace ibni::detail {
lang::Primitive parse_primitive_tokens(TokenStream& ts) { return lang::parse_prim(ts); }
}  // namespace ibni::detail

namespace ibni::lang {

Primitive parse_primitive(std::string_view text) {
  TokenStream ts(detail::tokenize(text, {"(", ")", ",", "-"}));
  Primitive p = parse_prim(ts);
  if (!ts.at_end()) ts.fail("unexpected trailing input");
  return p;
}

}  // namespace ibni::lang
