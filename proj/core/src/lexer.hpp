#pragma once

// Small shared tokenizer for the program, policy, driver and script formats.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "ibni/errors.hpp"
#include "ibni/primitive.hpp"

namespace ibni::detail {

struct Token {
  enum class Kind { Ident, Int, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  std::int64_t int_value = 0;
  int line = 1;
  int column = 1;
};

/// Splits `source` into identifiers, integer literals and the given symbols
/// (longest match first). `--` starts a comment running to end of line.
std::vector<Token> tokenize(std::string_view source, std::initializer_list<std::string_view> symbols);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }

  bool is_symbol(std::string_view s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Symbol && t.text == s;
  }
  bool is_ident(std::string_view s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Ident && t.text == s;
  }
  bool accept_symbol(std::string_view s) {
    if (!is_symbol(s)) return false;
    next();
    return true;
  }
  bool accept_ident(std::string_view s) {
    if (!is_ident(s)) return false;
    next();
    return true;
  }

  void expect_symbol(std::string_view s) {
    if (!accept_symbol(s)) fail("expected '" + std::string(s) + "'");
  }
  void expect_ident(std::string_view s) {
    if (!accept_ident(s)) fail("expected '" + std::string(s) + "'");
  }
  std::string expect_identifier(std::string_view what) {
    if (peek().kind != Token::Kind::Ident) fail("expected " + std::string(what));
    return next().text;
  }

  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    std::string found = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(message + ", found " + found, t.line, t.column);
  }

  std::size_t position() const { return pos_; }
  void rewind(std::size_t pos) { pos_ = pos; }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

/// Reads one primitive literal (optionally negative integer, true, false,
/// unit, or Tag(args)) from the stream.
lang::Primitive parse_primitive_tokens(TokenStream& ts);

}  // namespace ibni::detail
