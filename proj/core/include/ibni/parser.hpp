#pragma once

#include <string_view>

#include "ibni/ast.hpp"

namespace ibni::lang {

/// Parses .ibl source text. Throws SyntaxError with line and column.
Program parse_program(std::string_view text);

/// Parses a single expression (no arity table), mainly for tests.
ExprPtr parse_expr(std::string_view text);

/// Parses a primitive literal such as `3`, `0xff`, `true`, `unit`,
/// `Contact(1, false)`.
Primitive parse_primitive(std::string_view text);

}  // namespace ibni::lang
