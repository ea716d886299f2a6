#include "ibni/smtlib.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>

#include "ibni/errors.hpp"

namespace ibni::smt {

namespace {

bool simple_symbol_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 ||
         std::string_view("~!@$%^&*_-+=<>.?/").find(c) != std::string_view::npos;
}

std::string bv_const(std::int32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "#x%08x", static_cast<std::uint32_t>(v));
  return buf;
}

void emit(std::ostream& os, const Term& t) {
  auto nary = [&](const char* op) {
    os << '(' << op;
    for (const auto& k : t.kids()) {
      os << ' ';
      emit(os, k);
    }
    os << ')';
  };
  switch (t.op()) {
    case TermOp::IntConst: os << bv_const(t.int_value()); return;
    case TermOp::BoolConst: os << (t.bool_value() ? "true" : "false"); return;
    case TermOp::Var: os << smt_symbol(t.name()); return;
    case TermOp::Not: nary("not"); return;
    case TermOp::And:
      if (t.kids().empty()) os << "true";
      else if (t.kids().size() == 1) emit(os, t.kids()[0]);
      else nary("and");
      return;
    case TermOp::Or:
      if (t.kids().empty()) os << "false";
      else if (t.kids().size() == 1) emit(os, t.kids()[0]);
      else nary("or");
      return;
    case TermOp::Add: nary("bvadd"); return;
    case TermOp::Sub: nary("bvsub"); return;
    case TermOp::Mul: nary("bvmul"); return;
    case TermOp::BitAnd: nary("bvand"); return;
    case TermOp::BitOr: nary("bvor"); return;
    case TermOp::Eq: nary("="); return;
    case TermOp::Ne:
      os << "(not (= ";
      emit(os, t.kids()[0]);
      os << ' ';
      emit(os, t.kids()[1]);
      os << "))";
      return;
    case TermOp::Lt: nary("bvslt"); return;
    case TermOp::Le: nary("bvsle"); return;
  }
}

// Minimal s-expression reader for solver replies.
struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool is_list = false;
};

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  bool at_end() {
    skip();
    return pos_ >= text_.size();
  }

  SExpr read() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of solver reply");
    SExpr e;
    if (text_[pos_] == '(') {
      ++pos_;
      e.is_list = true;
      for (;;) {
        skip();
        if (pos_ >= text_.size()) fail("unbalanced parenthesis in solver reply");
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        e.list.push_back(read());
      }
      return e;
    }
    if (text_[pos_] == ')') fail("unexpected ')' in solver reply");
    if (text_[pos_] == '|') {
      std::size_t end = text_.find('|', pos_ + 1);
      if (end == std::string::npos) fail("unterminated quoted symbol");
      e.atom = text_.substr(pos_ + 1, end - pos_ - 1);
      pos_ = end + 1;
      return e;
    }
    if (text_[pos_] == '"') {
      std::size_t end = pos_ + 1;
      while (end < text_.size() && text_[end] != '"') ++end;
      e.atom = text_.substr(pos_, end + 1 - pos_);
      pos_ = end + 1;
      return e;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')') {
      ++pos_;
    }
    e.atom = text_.substr(start, pos_ - start);
    return e;
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }
  [[noreturn]] static void fail(const std::string& msg) { throw SolverProcessError(msg); }

  const std::string& text_;
  std::size_t pos_ = 0;
};

lang::Primitive parse_value(const SExpr& v) {
  if (!v.is_list) {
    const std::string& a = v.atom;
    if (a == "true") return lang::Primitive::boolean(true);
    if (a == "false") return lang::Primitive::boolean(false);
    if (a.size() > 2 && a[0] == '#' && (a[1] == 'x' || a[1] == 'b')) {
      unsigned long long n = std::stoull(a.substr(2), nullptr, a[1] == 'x' ? 16 : 2);
      return lang::Primitive::integer(static_cast<std::int32_t>(static_cast<std::uint32_t>(n)));
    }
  } else if (v.list.size() == 3 && !v.list[0].is_list && v.list[0].atom == "_" &&
             v.list[1].atom.rfind("bv", 0) == 0) {
    unsigned long long n = std::stoull(v.list[1].atom.substr(2));
    return lang::Primitive::integer(static_cast<std::int32_t>(static_cast<std::uint32_t>(n)));
  }
  throw SolverProcessError("unsupported model value in solver reply");
}

void collect_defines(const SExpr& e, Model& model) {
  if (!e.is_list) return;
  if (e.list.size() == 5 && !e.list[0].is_list && e.list[0].atom == "define-fun" &&
      e.list[2].is_list && e.list[2].list.empty()) {
    model[e.list[1].atom] = parse_value(e.list[4]);
    return;
  }
  for (const auto& k : e.list) collect_defines(k, model);
}

}  // namespace

std::string smt_symbol(const std::string& name) {
  bool simple = !name.empty() && std::isdigit(static_cast<unsigned char>(name[0])) == 0;
  for (char c : name) simple = simple && simple_symbol_char(c);
  return simple ? name : "|" + name + "|";
}

std::string smt_expr(const Term& t) {
  std::ostringstream os;
  emit(os, t);
  return os.str();
}

std::string emit_smtlib(const Term& c) {
  std::ostringstream os;
  os << "(set-option :produce-models true)\n(set-logic QF_BV)\n";
  for (const auto& [name, sort] : free_vars(c)) {
    os << "(declare-fun " << smt_symbol(name) << " () "
       << (sort == Sort::Int ? "(_ BitVec 32)" : "Bool") << ")\n";
  }
  os << "(assert " << smt_expr(c) << ")\n(check-sat)\n(get-model)\n";
  return os.str();
}

SmtReply parse_smt_reply(const std::string& text, const VarSorts& sorts) {
  Reader reader(text);
  SmtReply reply;
  if (reader.at_end()) throw SolverProcessError("empty solver reply");
  SExpr head = reader.read();
  if (head.is_list) throw SolverProcessError("solver reply does not start with a status");
  if (head.atom == "sat") {
    reply.status = SmtReply::Status::Sat;
  } else if (head.atom == "unsat") {
    reply.status = SmtReply::Status::Unsat;
    return reply;
  } else if (head.atom == "unknown") {
    reply.status = SmtReply::Status::Unknown;
    return reply;
  } else {
    throw SolverProcessError("unexpected solver reply: " + text.substr(0, 200));
  }
  while (!reader.at_end()) {
    SExpr e = reader.read();
    if (e.is_list && e.list.size() == 2 && !e.list[0].is_list && e.list[0].atom == "error") {
      throw SolverProcessError("solver error: " + e.list[1].atom);
    }
    collect_defines(e, reply.model);
  }
  for (const auto& [name, sort] : sorts) {
    auto it = reply.model.find(name);
    if (it == reply.model.end()) {
      reply.model.emplace(name, sort == Sort::Int ? lang::Primitive::integer(0)
                                                  : lang::Primitive::boolean(false));
    } else if ((sort == Sort::Int) != (it->second.kind() == lang::Primitive::Kind::Int)) {
      throw SolverProcessError("model value for '" + name + "' has the wrong sort");
    }
  }
  return reply;
}

}  // namespace ibni::smt
