#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nrc/type.hpp"
#include "nrc/value.hpp"

namespace nrc {

enum class PrimOp { Add, Sub, Mul, Div, Eq, Neq, Lt, Le, Gt, Ge, And, Or, Not, Neg };

inline std::string_view symbol(PrimOp op) {
  switch (op) {
    case PrimOp::Add: return "+";
    case PrimOp::Sub: return "-";
    case PrimOp::Mul: return "*";
    case PrimOp::Div: return "/";
    case PrimOp::Eq: return "=";
    case PrimOp::Neq: return "!=";
    case PrimOp::Lt: return "<";
    case PrimOp::Le: return "<=";
    case PrimOp::Gt: return ">";
    case PrimOp::Ge: return ">=";
    case PrimOp::And: return "and";
    case PrimOp::Or: return "or";
    case PrimOp::Not: return "not";
    case PrimOp::Neg: return "neg";
  }
  return "?";
}

inline std::size_t arity(PrimOp op) { return op == PrimOp::Not || op == PrimOp::Neg ? 1 : 2; }

struct ExprNode;

class Expr {
 public:
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  const ExprNode& node() const { return *node_; }
  const ExprNode* get() const { return node_.get(); }
  bool is_hole() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  std::shared_ptr<const ExprNode> node_;
};

namespace ex {
struct Const { Constant value; };
struct Prim { PrimOp op; std::vector<Expr> args; };
struct Var { std::string name; };
struct Let { std::string var; Expr bound; Expr body; };
struct Record { std::vector<std::pair<std::string, Expr>> fields; };
struct Field { Expr record; std::string field; };
struct If { Expr test; Expr then_branch; Expr else_branch; };
struct Empty { std::optional<Type> element; };
struct Singleton { Expr element; };
struct Union { Expr left; Expr right; };
// Big union: body is evaluated once per element of source, bound to var.
struct Comp { Expr body; std::string var; Expr source; };
struct Sum { Expr arg; };
struct IsEmpty { Expr arg; };
struct Hole {};

inline bool operator==(const Const& a, const Const& b) { return a.value == b.value; }
inline bool operator==(const Prim& a, const Prim& b) { return a.op == b.op && a.args == b.args; }
inline bool operator==(const Var& a, const Var& b) { return a.name == b.name; }
inline bool operator==(const Let& a, const Let& b) { return a.var == b.var && a.bound == b.bound && a.body == b.body; }
inline bool operator==(const Record& a, const Record& b) { return a.fields == b.fields; }
inline bool operator==(const Field& a, const Field& b) { return a.field == b.field && a.record == b.record; }
inline bool operator==(const If& a, const If& b) {
  return a.test == b.test && a.then_branch == b.then_branch && a.else_branch == b.else_branch;
}
inline bool operator==(const Empty& a, const Empty& b) { return a.element == b.element; }
inline bool operator==(const Singleton& a, const Singleton& b) { return a.element == b.element; }
inline bool operator==(const Union& a, const Union& b) { return a.left == b.left && a.right == b.right; }
inline bool operator==(const Comp& a, const Comp& b) {
  return a.var == b.var && a.body == b.body && a.source == b.source;
}
inline bool operator==(const Sum& a, const Sum& b) { return a.arg == b.arg; }
inline bool operator==(const IsEmpty& a, const IsEmpty& b) { return a.arg == b.arg; }
inline bool operator==(const Hole&, const Hole&) { return true; }
}  // namespace ex

struct ExprNode {
  std::variant<ex::Const, ex::Prim, ex::Var, ex::Let, ex::Record, ex::Field, ex::If, ex::Empty, ex::Singleton,
               ex::Union, ex::Comp, ex::Sum, ex::IsEmpty, ex::Hole>
      data;
};

inline bool Expr::is_hole() const { return std::holds_alternative<ex::Hole>(node_->data); }

inline bool operator==(const Expr& a, const Expr& b) {
  return a.node_ == b.node_ || a.node_->data == b.node_->data;
}

namespace ex {
template <class T>
Expr make(T node) {
  return Expr(std::make_shared<const ExprNode>(ExprNode{std::move(node)}));
}
inline Expr constant(Constant c) { return make(Const{c}); }
inline Expr integer(std::int64_t n) { return constant(int_const(n)); }
inline Expr boolean(bool b) { return constant(bool_const(b)); }
inline Expr prim(PrimOp op, std::vector<Expr> args) { return make(Prim{op, std::move(args)}); }
inline Expr var(std::string name) { return make(Var{std::move(name)}); }
inline Expr let(std::string x, Expr bound, Expr body) { return make(Let{std::move(x), std::move(bound), std::move(body)}); }
inline Expr record(std::vector<std::pair<std::string, Expr>> fields) { return make(Record{std::move(fields)}); }
inline Expr field(Expr r, std::string f) { return make(Field{std::move(r), std::move(f)}); }
inline Expr if_(Expr c, Expr t, Expr e) { return make(If{std::move(c), std::move(t), std::move(e)}); }
inline Expr empty(std::optional<Type> t = std::nullopt) { return make(Empty{std::move(t)}); }
inline Expr singleton(Expr e) { return make(Singleton{std::move(e)}); }
inline Expr union_(Expr a, Expr b) { return make(Union{std::move(a), std::move(b)}); }
inline Expr comp(Expr body, std::string x, Expr source) {
  return make(Comp{std::move(body), std::move(x), std::move(source)});
}
inline Expr sum(Expr e) { return make(Sum{std::move(e)}); }
inline Expr is_empty(Expr e) { return make(IsEmpty{std::move(e)}); }
inline Expr hole() {
  static const Expr h = make(Hole{});
  return h;
}
}  // namespace ex

inline std::size_t expr_size(const Expr& e) {
  return std::visit(
      detail::overloaded{
          [](const ex::Const&) -> std::size_t { return 1; },
          [](const ex::Prim& p) {
            std::size_t n = 1;
            for (const auto& a : p.args) n += expr_size(a);
            return n;
          },
          [](const ex::Var&) -> std::size_t { return 1; },
          [](const ex::Let& l) { return 1 + expr_size(l.bound) + expr_size(l.body); },
          [](const ex::Record& r) {
            std::size_t n = 1;
            for (const auto& [k, f] : r.fields) n += expr_size(f);
            return n;
          },
          [](const ex::Field& f) { return 1 + expr_size(f.record); },
          [](const ex::If& i) { return 1 + expr_size(i.test) + expr_size(i.then_branch) + expr_size(i.else_branch); },
          [](const ex::Empty&) -> std::size_t { return 1; },
          [](const ex::Singleton& s) { return 1 + expr_size(s.element); },
          [](const ex::Union& u) { return 1 + expr_size(u.left) + expr_size(u.right); },
          [](const ex::Comp& c) { return 1 + expr_size(c.body) + expr_size(c.source); },
          [](const ex::Sum& s) { return 1 + expr_size(s.arg); },
          [](const ex::IsEmpty& s) { return 1 + expr_size(s.arg); },
          [](const ex::Hole&) -> std::size_t { return 1; },
      },
      e.node().data);
}

}  // namespace nrc
