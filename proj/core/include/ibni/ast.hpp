#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ibni/primitive.hpp"

namespace ibni::lang {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Heap address; only produced at run time.
using Location = int;

struct Lit {
  Primitive value;
};
struct Var {
  std::string name;
};
struct Lam {
  std::string param;
  ExprPtr body;
};
struct App {
  ExprPtr fn;
  ExprPtr arg;
};
struct Ref {
  ExprPtr init;
};
struct Deref {
  ExprPtr ref;
};
struct Assign {
  ExprPtr target;
  ExprPtr value;
};
struct If {
  ExprPtr cond;
  ExprPtr then_branch;
  ExprPtr else_branch;
};
struct BinaryOp {
  BinOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct Construct {
  std::string tag;
  std::vector<ExprPtr> args;
};
/// proj F i e; `index` is 1-based.
struct Project {
  std::string tag;
  int index;
  ExprPtr target;
};
struct Install {
  std::string channel;
  ExprPtr handler;
};
struct Send {
  std::string channel;
  ExprPtr payload;
};
/// Synchronous secret read: yields a value and emits channel!value.
struct Secret {
  std::string channel;
};
/// A heap location value (run time only, never parsed).
struct LocValue {
  Location loc;
};

struct Expr {
  using Node = std::variant<Lit, Var, Lam, App, Ref, Deref, Assign, If, BinaryOp, Construct,
                            Project, Install, Send, Secret, LocValue>;
  Node node;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
  template <typename T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }
};

bool operator==(const Expr& a, const Expr& b);
/// Deep structural equality; null pointers compare equal only to null.
bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

namespace build {
ExprPtr lit(Primitive p);
ExprPtr integer(std::int32_t n);
ExprPtr boolean(bool b);
ExprPtr unit();
ExprPtr var(std::string name);
ExprPtr lam(std::string param, ExprPtr body);
ExprPtr app(ExprPtr fn, ExprPtr arg);
ExprPtr ref(ExprPtr init);
ExprPtr deref(ExprPtr ref);
ExprPtr assign(ExprPtr target, ExprPtr value);
ExprPtr if_(ExprPtr c, ExprPtr t, ExprPtr e);
ExprPtr binop(BinOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr construct(std::string tag, std::vector<ExprPtr> args);
ExprPtr project(std::string tag, int index, ExprPtr target);
ExprPtr install(std::string channel, ExprPtr handler);
ExprPtr send(std::string channel, ExprPtr payload);
ExprPtr secret(std::string channel);
ExprPtr loc(Location l);
}  // namespace build

/// True for primitive literals, lambdas and locations.
bool is_value(const Expr& e);

/// Capture-avoiding substitution of the closed value `v` for free `x` in `e`.
ExprPtr subst(const ExprPtr& e, const std::string& x, const ExprPtr& v);

/// Free variables of `e`.
std::vector<std::string> free_vars(const ExprPtr& e);

/// Constructor arities observed in a parsed program, keyed by tag.
using CtorArities = std::map<std::string, std::size_t>;

struct Program {
  ExprPtr body;
  CtorArities arities;
};

/// Pretty-prints `e` in the concrete syntax accepted by parse_program.
std::string print_expr(const ExprPtr& e);

}  // namespace ibni::lang
