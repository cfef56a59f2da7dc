#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nrc/expr.hpp"

namespace nrc {

struct TraceNode;
class Trace;

// Per-element traces of a comprehension, keyed by the element's label.
using TraceSet = std::map<Label, Trace>;

class Trace {
 public:
  explicit Trace(std::shared_ptr<const TraceNode> n) : node_(std::move(n)) {}
  const TraceNode& node() const { return *node_; }
  const TraceNode* get() const { return node_.get(); }
  bool is_hole() const;

  friend bool operator==(const Trace& a, const Trace& b);

 private:
  std::shared_ptr<const TraceNode> node_;
};

namespace tr {
struct Const { Constant value; };
struct Prim { PrimOp op; std::vector<Trace> args; };
struct Var { std::string name; };
struct Let { std::string var; Trace bound; Trace body; };
struct Record { std::vector<std::pair<std::string, Trace>> fields; };
struct Field { Trace record; std::string field; };
// The test trace, both branch expressions, the branch taken and its trace.
struct If { Trace test; Expr then_branch; Expr else_branch; bool taken; Trace branch; };
struct Empty { std::optional<Type> element; };
struct Singleton { Trace element; };
struct Union { Trace left; Trace right; };
struct Comp { Expr body; std::string var; Trace source; TraceSet elements; };
struct Sum { Trace arg; };
struct IsEmpty { Trace arg; };
struct Hole {};

inline bool operator==(const Const& a, const Const& b) { return a.value == b.value; }
inline bool operator==(const Prim& a, const Prim& b) { return a.op == b.op && a.args == b.args; }
inline bool operator==(const Var& a, const Var& b) { return a.name == b.name; }
inline bool operator==(const Let& a, const Let& b) { return a.var == b.var && a.bound == b.bound && a.body == b.body; }
inline bool operator==(const Record& a, const Record& b) { return a.fields == b.fields; }
inline bool operator==(const Field& a, const Field& b) { return a.field == b.field && a.record == b.record; }
inline bool operator==(const If& a, const If& b) {
  return a.taken == b.taken && a.test == b.test && a.then_branch == b.then_branch &&
         a.else_branch == b.else_branch && a.branch == b.branch;
}
inline bool operator==(const Empty& a, const Empty& b) { return a.element == b.element; }
inline bool operator==(const Singleton& a, const Singleton& b) { return a.element == b.element; }
inline bool operator==(const Union& a, const Union& b) { return a.left == b.left && a.right == b.right; }
inline bool operator==(const Comp& a, const Comp& b) {
  return a.var == b.var && a.body == b.body && a.source == b.source && a.elements == b.elements;
}
inline bool operator==(const Sum& a, const Sum& b) { return a.arg == b.arg; }
inline bool operator==(const IsEmpty& a, const IsEmpty& b) { return a.arg == b.arg; }
inline bool operator==(const Hole&, const Hole&) { return true; }
}  // namespace tr

struct TraceNode {
  std::variant<tr::Const, tr::Prim, tr::Var, tr::Let, tr::Record, tr::Field, tr::If, tr::Empty, tr::Singleton,
               tr::Union, tr::Comp, tr::Sum, tr::IsEmpty, tr::Hole>
      data;
};

inline bool Trace::is_hole() const { return std::holds_alternative<tr::Hole>(node_->data); }

inline bool operator==(const Trace& a, const Trace& b) {
  return a.node_ == b.node_ || a.node_->data == b.node_->data;
}

namespace tr {
template <class T>
Trace make(T node) {
  return Trace(std::make_shared<const TraceNode>(TraceNode{std::move(node)}));
}
inline Trace hole() {
  static const Trace h = make(Hole{});
  return h;
}
}  // namespace tr

// Node count. Expressions stored in conditionals and comprehensions count
// toward the size.
inline std::size_t trace_size(const Trace& t);

inline std::size_t trace_set_size(const TraceSet& s) {
  std::size_t n = 0;
  for (const auto& [l, t] : s) n += trace_size(t);
  return n;
}

inline std::size_t trace_size(const Trace& t) {
  return std::visit(
      detail::overloaded{
          [](const tr::Const&) -> std::size_t { return 1; },
          [](const tr::Prim& p) {
            std::size_t n = 1;
            for (const auto& a : p.args) n += trace_size(a);
            return n;
          },
          [](const tr::Var&) -> std::size_t { return 1; },
          [](const tr::Let& l) { return 1 + trace_size(l.bound) + trace_size(l.body); },
          [](const tr::Record& r) {
            std::size_t n = 1;
            for (const auto& [k, f] : r.fields) n += trace_size(f);
            return n;
          },
          [](const tr::Field& f) { return 1 + trace_size(f.record); },
          [](const tr::If& i) {
            return 1 + trace_size(i.test) + expr_size(i.then_branch) + expr_size(i.else_branch) +
                   trace_size(i.branch);
          },
          [](const tr::Empty&) -> std::size_t { return 1; },
          [](const tr::Singleton& s) { return 1 + trace_size(s.element); },
          [](const tr::Union& u) { return 1 + trace_size(u.left) + trace_size(u.right); },
          [](const tr::Comp& c) { return 1 + expr_size(c.body) + trace_size(c.source) + trace_set_size(c.elements); },
          [](const tr::Sum& s) { return 1 + trace_size(s.arg); },
          [](const tr::IsEmpty& s) { return 1 + trace_size(s.arg); },
          [](const tr::Hole&) -> std::size_t { return 1; },
      },
      t.node().data);
}

// T1 is a prefix of T2: holes in T1 may stand for any subtrace of T2, and a
// comprehension in T1 may record fewer elements.
inline bool is_subtrace(const Trace& small, const Trace& big) {
  if (small.get() == big.get() || small.is_hole()) return true;
  const auto& a = small.node().data;
  const auto& b = big.node().data;
  if (a.index() != b.index()) return false;
  return std::visit(
      detail::overloaded{
          [&](const tr::Const& x) { return x == std::get<tr::Const>(b); },
          [&](const tr::Prim& x) {
            const auto& y = std::get<tr::Prim>(b);
            if (x.op != y.op || x.args.size() != y.args.size()) return false;
            for (std::size_t i = 0; i < x.args.size(); ++i)
              if (!is_subtrace(x.args[i], y.args[i])) return false;
            return true;
          },
          [&](const tr::Var& x) { return x == std::get<tr::Var>(b); },
          [&](const tr::Let& x) {
            const auto& y = std::get<tr::Let>(b);
            return x.var == y.var && is_subtrace(x.bound, y.bound) && is_subtrace(x.body, y.body);
          },
          [&](const tr::Record& x) {
            const auto& y = std::get<tr::Record>(b);
            if (x.fields.size() != y.fields.size()) return false;
            for (std::size_t i = 0; i < x.fields.size(); ++i)
              if (x.fields[i].first != y.fields[i].first || !is_subtrace(x.fields[i].second, y.fields[i].second))
                return false;
            return true;
          },
          [&](const tr::Field& x) {
            const auto& y = std::get<tr::Field>(b);
            return x.field == y.field && is_subtrace(x.record, y.record);
          },
          [&](const tr::If& x) {
            const auto& y = std::get<tr::If>(b);
            return x.taken == y.taken && x.then_branch == y.then_branch && x.else_branch == y.else_branch &&
                   is_subtrace(x.test, y.test) && is_subtrace(x.branch, y.branch);
          },
          [&](const tr::Empty& x) { return x == std::get<tr::Empty>(b); },
          [&](const tr::Singleton& x) { return is_subtrace(x.element, std::get<tr::Singleton>(b).element); },
          [&](const tr::Union& x) {
            const auto& y = std::get<tr::Union>(b);
            return is_subtrace(x.left, y.left) && is_subtrace(x.right, y.right);
          },
          [&](const tr::Comp& x) {
            const auto& y = std::get<tr::Comp>(b);
            if (x.var != y.var || !(x.body == y.body) || !is_subtrace(x.source, y.source)) return false;
            for (const auto& [l, t] : x.elements) {
              auto it = y.elements.find(l);
              if (it == y.elements.end() || !is_subtrace(t, it->second)) return false;
            }
            return true;
          },
          [&](const tr::Sum& x) { return is_subtrace(x.arg, std::get<tr::Sum>(b).arg); },
          [&](const tr::IsEmpty& x) { return is_subtrace(x.arg, std::get<tr::IsEmpty>(b).arg); },
          [&](const tr::Hole&) { return true; },
      },
      a);
}

}  // namespace nrc
