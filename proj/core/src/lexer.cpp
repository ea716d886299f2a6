#include "lexer.hpp"

#include <algorithm>
#include <cctype>

namespace ibni::detail {

std::vector<Token> tokenize(std::string_view src, std::initializer_list<std::string_view> symbols) {
  std::vector<std::string_view> syms(symbols);
  std::sort(syms.begin(), syms.end(),
            [](std::string_view a, std::string_view b) { return a.size() > b.size(); });

  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };

  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "--") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      tok.kind = Token::Kind::Ident;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      std::uint64_t value = 0;
      if (src.substr(i, 2) == "0x" || src.substr(i, 2) == "0X") {
        j += 2;
        std::size_t start = j;
        while (j < src.size() && std::isxdigit(static_cast<unsigned char>(src[j]))) {
          char d = static_cast<char>(std::tolower(static_cast<unsigned char>(src[j])));
          value = value * 16 + static_cast<std::uint64_t>(d <= '9' ? d - '0' : d - 'a' + 10);
          if (value > 0xffffffffULL) throw SyntaxError("integer literal out of 32-bit range", line, col);
          ++j;
        }
        if (j == start) throw SyntaxError("malformed hex literal", line, col);
        // Hex literals denote bit patterns: 0xffffffff is -1.
        tok.int_value = static_cast<std::int32_t>(static_cast<std::uint32_t>(value));
      } else {
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
          value = value * 10 + static_cast<std::uint64_t>(src[j] - '0');
          if (value > 0xffffffffULL) throw SyntaxError("integer literal out of 32-bit range", line, col);
          ++j;
        }
        tok.int_value = static_cast<std::int32_t>(static_cast<std::uint32_t>(value));
      }
      tok.kind = Token::Kind::Int;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    bool matched = false;
    for (std::string_view s : syms) {
      if (src.substr(i, s.size()) == s) {
        tok.kind = Token::Kind::Symbol;
        tok.text = std::string(s);
        advance(s.size());
        out.push_back(std::move(tok));
        matched = true;
        break;
      }
    }
    if (!matched) throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
  }
  Token end;
  end.kind = Token::Kind::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

}  // namespace ibni::detail
