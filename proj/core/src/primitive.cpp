#include "ibni/primitive.hpp"

#include <ostream>
#include <sstream>

#include "ibni/errors.hpp"

namespace ibni::lang {

Primitive Primitive::integer(std::int32_t value) {
  Primitive p;
  p.kind_ = Kind::Int;
  p.int_ = value;
  return p;
}

Primitive Primitive::boolean(bool value) {
  Primitive p;
  p.kind_ = Kind::Bool;
  p.int_ = value ? 1 : 0;
  return p;
}

Primitive Primitive::unit() { return Primitive(); }

Primitive Primitive::ctor(std::string tag, std::vector<Primitive> args) {
  Primitive p;
  p.kind_ = Kind::Ctor;
  p.tag_ = std::move(tag);
  p.args_ = std::move(args);
  return p;
}

std::int32_t Primitive::as_int() const {
  if (kind_ != Kind::Int) throw EvalError("expected an integer, got " + to_string());
  return int_;
}

bool Primitive::as_bool() const {
  if (kind_ != Kind::Bool) throw EvalError("expected a boolean, got " + to_string());
  return int_ != 0;
}

const std::string& Primitive::tag() const {
  if (kind_ != Kind::Ctor) throw EvalError("expected a constructed term, got " + to_string());
  return tag_;
}

const std::vector<Primitive>& Primitive::args() const {
  if (kind_ != Kind::Ctor) throw EvalError("expected a constructed term, got " + to_string());
  return args_;
}

std::string Primitive::to_string() const {
  switch (kind_) {
    case Kind::Int:
      return std::to_string(int_);
    case Kind::Bool:
      return int_ ? "true" : "false";
    case Kind::Unit:
      return "unit";
    case Kind::Ctor: {
      if (args_.empty()) return tag_;
      std::string s = tag_ + "(";
      for (std::size_t i = 0; i < args_.size(); ++i) {
        if (i) s += ", ";
        s += args_[i].to_string();
      }
      return s + ")";
    }
  }
  return "?";
}

bool operator==(const Primitive& a, const Primitive& b) { return (a <=> b) == 0; }

std::strong_ordering operator<=>(const Primitive& a, const Primitive& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  switch (a.kind_) {
    case Primitive::Kind::Int:
    case Primitive::Kind::Bool:
      return a.int_ <=> b.int_;
    case Primitive::Kind::Unit:
      return std::strong_ordering::equal;
    case Primitive::Kind::Ctor: {
      if (auto c = a.tag_ <=> b.tag_; c != 0) return c;
      if (auto c = a.args_.size() <=> b.args_.size(); c != 0) return c;
      for (std::size_t i = 0; i < a.args_.size(); ++i) {
        if (auto c = a.args_[i] <=> b.args_[i]; c != 0) return c;
      }
      return std::strong_ordering::equal;
    }
  }
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Primitive& p) { return os << p.to_string(); }

std::string_view to_string(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::BitAnd: return "&";
    case BinOp::BitOr: return "|";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
  }
  return "?";
}

std::int32_t wrap_add(std::int32_t a, std::int32_t b) {
  return static_cast<std::int32_t>(static_cast<std::uint32_t>(a) + static_cast<std::uint32_t>(b));
}
std::int32_t wrap_sub(std::int32_t a, std::int32_t b) {
  return static_cast<std::int32_t>(static_cast<std::uint32_t>(a) - static_cast<std::uint32_t>(b));
}
std::int32_t wrap_mul(std::int32_t a, std::int32_t b) {
  return static_cast<std::int32_t>(static_cast<std::uint32_t>(a) * static_cast<std::uint32_t>(b));
}

namespace {

[[noreturn]] void mismatch(BinOp op, const Primitive& l, const Primitive& r) {
  std::ostringstream os;
  os << "operator " << to_string(op) << " not applicable to " << l << " and " << r;
  throw EvalError(os.str());
}

}  // namespace

Primitive apply_binop(BinOp op, const Primitive& l, const Primitive& r) {
  switch (op) {
    case BinOp::Add:
    case BinOp::Sub:
    case BinOp::Mul:
    case BinOp::BitAnd:
    case BinOp::BitOr:
    case BinOp::Lt:
    case BinOp::Le: {
      if (!l.is_int() || !r.is_int()) mismatch(op, l, r);
      std::int32_t a = l.as_int();
      std::int32_t b = r.as_int();
      switch (op) {
        case BinOp::Add: return Primitive::integer(wrap_add(a, b));
        case BinOp::Sub: return Primitive::integer(wrap_sub(a, b));
        case BinOp::Mul: return Primitive::integer(wrap_mul(a, b));
        case BinOp::BitAnd: return Primitive::integer(a & b);
        case BinOp::BitOr: return Primitive::integer(a | b);
        case BinOp::Lt: return Primitive::boolean(a < b);
        default: return Primitive::boolean(a <= b);
      }
    }
    case BinOp::And:
    case BinOp::Or:
      if (!l.is_bool() || !r.is_bool()) mismatch(op, l, r);
      return Primitive::boolean(op == BinOp::And ? (l.as_bool() && r.as_bool())
                                                 : (l.as_bool() || r.as_bool()));
    case BinOp::Eq:
    case BinOp::Ne: {
      if (l.kind() != r.kind()) mismatch(op, l, r);
      bool eq = l == r;
      return Primitive::boolean(op == BinOp::Eq ? eq : !eq);
    }
  }
  mismatch(op, l, r);
}

}  // namespace ibni::lang
