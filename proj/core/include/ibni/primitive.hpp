#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ibni::lang {

/// A value that may be carried by an event: a 32-bit integer, a boolean,
/// unit, or a constructed term F(p1, ..., pn) over primitives.
class Primitive {
 public:
  enum class Kind { Int, Bool, Unit, Ctor };

  Primitive() : kind_(Kind::Unit) {}

  static Primitive integer(std::int32_t value);
  static Primitive boolean(bool value);
  static Primitive unit();
  static Primitive ctor(std::string tag, std::vector<Primitive> args = {});

  Kind kind() const { return kind_; }
  bool is_int() const { return kind_ == Kind::Int; }
  bool is_bool() const { return kind_ == Kind::Bool; }
  bool is_unit() const { return kind_ == Kind::Unit; }
  bool is_ctor() const { return kind_ == Kind::Ctor; }

  std::int32_t as_int() const;
  bool as_bool() const;
  const std::string& tag() const;
  const std::vector<Primitive>& args() const;

  std::string to_string() const;

  friend bool operator==(const Primitive& a, const Primitive& b);
  friend std::strong_ordering operator<=>(const Primitive& a, const Primitive& b);

 private:
  Kind kind_;
  std::int32_t int_ = 0;
  std::string tag_;
  std::vector<Primitive> args_;
};

std::ostream& operator<<(std::ostream& os, const Primitive& p);

/// Binary operators of the mini-language. Integer arithmetic wraps at 32 bits.
enum class BinOp { Add, Sub, Mul, Lt, Le, Eq, Ne, BitAnd, BitOr, And, Or };

std::string_view to_string(BinOp op);

/// Applies `op` to two primitives. Throws EvalError on mismatched kinds.
Primitive apply_binop(BinOp op, const Primitive& lhs, const Primitive& rhs);

/// Wrapping 32-bit helpers shared by the interpreter, solver and policy code.
std::int32_t wrap_add(std::int32_t a, std::int32_t b);
std::int32_t wrap_sub(std::int32_t a, std::int32_t b);
std::int32_t wrap_mul(std::int32_t a, std::int32_t b);

}  // namespace ibni::lang
