#pragma once

#include <sstream>
#include <string>

#include "nrc/parse.hpp"
#include "nrc/trace.hpp"

namespace nrc {

inline std::string render_atom(const Atom& a) {
  std::string s = to_string(a);
  if (is_natural(a)) return s;
  bool plain = detail::ident_start(s[0]) && s != "_" && !detail::keywords().count(s) && s != "U" &&
               std::all_of(s.begin(), s.end(), [](char c) { return detail::ident_char(c) && c != '\''; });
  if (plain) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline std::string render_label(const Label& l) {
  std::string out = "[";
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (i) out += ",";
    out += render_atom(l[i]);
  }
  return out + "]";
}

inline std::string render_type(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Int: return "int";
    case Type::Kind::Bool: return "bool";
    case Type::Kind::Unknown: return "?";
    case Type::Kind::Set: return "{" + render_type(t.element()) + "}";
    case Type::Kind::Record: {
      std::string out = "<";
      bool first = true;
      for (const auto& [k, v] : t.fields()) {
        if (!first) out += ", ";
        first = false;
        out += k + ": " + render_type(v);
      }
      return out + ">";
    }
  }
  return "?";
}

inline std::string render_value(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Constant: return to_string(v.as_constant());
    case Value::Kind::Record: {
      std::string out = "<";
      bool first = true;
      for (const auto& [k, f] : v.fields()) {
        if (!first) out += ", ";
        first = false;
        out += k + ": " + render_value(f);
      }
      return out + ">";
    }
    case Value::Kind::Collection: {
      std::string out = "{";
      bool first = true;
      for (const auto& [l, e] : v.elements()) {
        if (!first) out += ", ";
        first = false;
        out += render_label(l) + "." + render_value(e);
      }
      return out + "}";
    }
  }
  return "?";
}

namespace detail {

inline std::string box(const std::string& s) { return "[[" + s + "]]"; }

inline std::string tail_text(Tail t) { return t == Tail::Hole ? "_" : "*"; }

// With a companion, parts of p that the companion leaves as holes are boxed.
inline std::string render_pattern(const Pattern& p, const Pattern* inner) {
  if (inner && inner->is_hole() && !p.is_hole()) return box(render_pattern(p, nullptr));
  switch (p.kind()) {
    case Pattern::Kind::Hole: return "_";
    case Pattern::Kind::Diamond: return "*";
    case Pattern::Kind::Constant: return to_string(p.as_constant());
    case Pattern::Kind::Record: {
      std::string out = "<";
      bool first = true;
      for (const auto& [k, q] : p.fields()) {
        if (!first) out += ", ";
        first = false;
        const Pattern* qi = nullptr;
        Pattern projected = Pattern::hole();
        if (inner) {
          try {
            projected = field_project(*inner, k);
            qi = &projected;
          } catch (const Error&) {
          }
        }
        out += k + ": " + render_pattern(q, qi);
      }
      if (p.tail() != Tail::Closed) out += (p.fields().empty() ? ";" : "; ") + tail_text(p.tail());
      return out + ">";
    }
    case Pattern::Kind::Set: {
      std::string out = "{";
      bool first = true;
      for (const auto& [l, q] : p.elements()) {
        if (!first) out += ", ";
        first = false;
        std::string elem;
        if (inner && inner->kind() == Pattern::Kind::Set) {
          auto it = inner->elements().find(l);
          if (it == inner->elements().end())
            elem = box(render_label(l) + "." + render_pattern(q, nullptr));
          else
            elem = render_label(l) + "." + render_pattern(q, &it->second);
        } else {
          elem = render_label(l) + "." + render_pattern(q, inner);
        }
        out += elem;
      }
      out += "}";
      if (p.tail() != Tail::Closed) out += " U " + tail_text(p.tail());
      return out;
    }
  }
  return "?";
}

// Precedence levels: 0 let/if/for, 1 or, 2 and, 3 comparison, 4 additive,
// 5 multiplicative, 6 prefix operators, 7 projection, 8 atoms.
inline int binary_level(PrimOp op) {
  switch (op) {
    case PrimOp::Or: return 1;
    case PrimOp::And: return 2;
    case PrimOp::Eq: case PrimOp::Neq: case PrimOp::Lt: case PrimOp::Le: case PrimOp::Gt: case PrimOp::Ge: return 3;
    case PrimOp::Add: case PrimOp::Sub: return 4;
    case PrimOp::Mul: case PrimOp::Div: return 5;
    default: return 6;
  }
}

inline int expr_level(const Expr& e) {
  return std::visit(overloaded{
                        [](const ex::Prim& p) { return arity(p.op) == 2 ? binary_level(p.op) : 6; },
                        [](const ex::Let&) { return 0; },
                        [](const ex::If&) { return 0; },
                        [](const ex::Comp&) { return 0; },
                        [](const ex::Sum&) { return 6; },
                        [](const ex::IsEmpty&) { return 6; },
                        [](const ex::Const& c) { return c.value.index() == 0 && std::get<0>(c.value) < 0 ? 6 : 8; },
                        [](const ex::Field&) { return 7; },
                        [](const auto&) { return 8; },
                    },
                    e.node().data);
}

class ExprPrinter {
 public:
  // e printed so that it reparses at a position requiring level >= min.
  std::string print(const Expr& e, const Expr* inner, int min) {
    if (inner && inner->is_hole() && !e.is_hole()) return box(print(e, nullptr, 0));
    std::string s = std::visit([&](const auto& n) { return text(n, e, inner); }, e.node().data);
    if (expr_level(e) < min) return "(" + s + ")";
    return s;
  }

 private:
  template <class T>
  static const T* same(const Expr* inner) {
    if (!inner) return nullptr;
    return std::get_if<T>(&inner->node().data);
  }

  // Companion for a child: the matching child of the inner expression.
  template <class T, class F>
  static const Expr* child(const Expr* inner, F get) {
    const T* n = same<T>(inner);
    return n ? &get(*n) : nullptr;
  }

  std::string text(const ex::Const& n, const Expr&, const Expr*) { return to_string(n.value); }

  std::string text(const ex::Var& n, const Expr&, const Expr*) { return n.name; }

  std::string text(const ex::Hole&, const Expr&, const Expr*) { return "_"; }

  std::string text(const ex::Prim& n, const Expr&, const Expr* inner) {
    const ex::Prim* in = same<ex::Prim>(inner);
    auto arg = [&](std::size_t i) -> const Expr* { return in && in->args.size() > i ? &in->args[i] : nullptr; };
    if (arity(n.op) == 1) {
      const char* op = n.op == PrimOp::Not ? "not " : "-";
      if (n.op == PrimOp::Neg) return std::string(op) + "(" + print(n.args[0], arg(0), 0) + ")";
      return op + print(n.args[0], arg(0), 6);
    }
    int lvl = binary_level(n.op);
    return print(n.args[0], arg(0), lvl) + " " + std::string(symbol(n.op)) + " " + print(n.args[1], arg(1), lvl + 1);
  }

  std::string text(const ex::Let& n, const Expr&, const Expr* inner) {
    return "let " + n.var + " = " + print(n.bound, child<ex::Let>(inner, [](const ex::Let& l) -> const Expr& { return l.bound; }), 0) +
           " in " + print(n.body, child<ex::Let>(inner, [](const ex::Let& l) -> const Expr& { return l.body; }), 0);
  }

  std::string text(const ex::Record& n, const Expr&, const Expr* inner) {
    const ex::Record* in = same<ex::Record>(inner);
    std::string out = "<";
    for (std::size_t i = 0; i < n.fields.size(); ++i) {
      if (i) out += ", ";
      const Expr* ci = in && in->fields.size() == n.fields.size() ? &in->fields[i].second : nullptr;
      out += n.fields[i].first + ": " + print(n.fields[i].second, ci, 4);
    }
    return out + ">";
  }

  std::string text(const ex::Field& n, const Expr&, const Expr* inner) {
    return print(n.record, child<ex::Field>(inner, [](const ex::Field& f) -> const Expr& { return f.record; }), 7) + "." +
           n.field;
  }

  std::string text(const ex::If& n, const Expr&, const Expr* inner) {
    const ex::If* in = same<ex::If>(inner);
    return "if " + print(n.test, in ? &in->test : nullptr, 0) + " then " +
           print(n.then_branch, in ? &in->then_branch : nullptr, 0) + " else " +
           print(n.else_branch, in ? &in->else_branch : nullptr, 0);
  }

  std::string text(const ex::Empty& n, const Expr&, const Expr*) {
    if (n.element) return "{} : {" + render_type(*n.element) + "}";
    return "{}";
  }

  std::string text(const ex::Singleton& n, const Expr&, const Expr* inner) {
    return "{" + print(n.element, child<ex::Singleton>(inner, [](const ex::Singleton& s) -> const Expr& { return s.element; }), 0) +
           "}";
  }

  std::string text(const ex::Union& n, const Expr&, const Expr* inner) {
    const ex::Union* in = same<ex::Union>(inner);
    return "union {" + print(n.left, in ? &in->left : nullptr, 0) + ", " + print(n.right, in ? &in->right : nullptr, 0) + "}";
  }

  std::string text(const ex::Sum& n, const Expr&, const Expr* inner) {
    return "sum " + print(n.arg, child<ex::Sum>(inner, [](const ex::Sum& s) -> const Expr& { return s.arg; }), 6);
  }

  std::string text(const ex::IsEmpty& n, const Expr&, const Expr* inner) {
    return "empty " + print(n.arg, child<ex::IsEmpty>(inner, [](const ex::IsEmpty& s) -> const Expr& { return s.arg; }), 6);
  }

  // Nested comprehensions print as one with several generators; a body of
  // the form `if c then e else {}` prints as a where clause.
  static const ex::If* filter(const Expr& e) {
    const auto* i = std::get_if<ex::If>(&e.node().data);
    if (!i) return nullptr;
    const auto* em = std::get_if<ex::Empty>(&i->else_branch.node().data);
    return em && !em->element ? i : nullptr;
  }

  std::string text(const ex::Comp& n, const Expr&, const Expr* inner) {
    std::string gens;
    const ex::Comp* cur = &n;
    const Expr* cur_in = inner;
    const Expr* body = nullptr;
    const Expr* body_in = nullptr;
    while (true) {
      const ex::Comp* ci = same<ex::Comp>(cur_in);
      if (!gens.empty()) gens += ", ";
      gens += cur->var + " in " + print(cur->source, ci ? &ci->source : nullptr, 1);
      body = &cur->body;
      body_in = ci ? &ci->body : nullptr;
      const auto* next = std::get_if<ex::Comp>(&body->node().data);
      bool companion_ok = !inner || (body_in && same<ex::Comp>(body_in));
      if (!next || !companion_ok) break;
      cur = next;
      cur_in = body_in;
    }
    std::string conds;
    while (const ex::If* f = filter(*body)) {
      const ex::If* fi = nullptr;
      if (inner) {
        fi = body_in ? filter(*body_in) : nullptr;
        if (!fi) break;
      }
      conds += (conds.empty() ? " where " : ", ") + print(f->test, fi ? &fi->test : nullptr, 1);
      body = &f->then_branch;
      body_in = fi ? &fi->then_branch : nullptr;
    }
    return "for " + gens + conds + " return " + print(*body, body_in, 0);
  }
};

inline void indent(std::string& out, int depth) { out.append(static_cast<std::size_t>(depth) * 2, ' '); }

class TracePrinter {
 public:
  std::string print(const Trace& t, int depth, int min) {
    std::string s = std::visit([&](const auto& n) { return text(n, depth); }, t.node().data);
    return level(t) < min ? "(" + s + ")" : s;
  }

 private:
  static int level(const Trace& t) {
    return std::visit(overloaded{
                          [](const tr::Prim& p) { return arity(p.op) == 2 ? binary_level(p.op) : 6; },
                          [](const tr::Let&) { return 0; },
                          [](const tr::If&) { return 0; },
                          [](const tr::Comp&) { return 0; },
                          [](const tr::Sum&) { return 6; },
                          [](const tr::IsEmpty&) { return 6; },
                          [](const tr::Field&) { return 7; },
                          [](const auto&) { return 8; },
                      },
                      t.node().data);
  }

  std::string text(const tr::Const& n, int) { return to_string(n.value); }
  std::string text(const tr::Var& n, int) { return n.name; }
  std::string text(const tr::Hole&, int) { return "_"; }
  std::string text(const tr::Empty&, int) { return "{}"; }
  std::string text(const tr::Prim& n, int d) {
    if (arity(n.op) == 1) return (n.op == PrimOp::Not ? "not " : "-") + print(n.args[0], d, 6);
    int lvl = binary_level(n.op);
    return print(n.args[0], d, lvl) + " " + std::string(symbol(n.op)) + " " + print(n.args[1], d, lvl + 1);
  }
  std::string text(const tr::Let& n, int d) { return "let " + n.var + " = " + print(n.bound, d, 0) + " in " + print(n.body, d, 0); }
  std::string text(const tr::Record& n, int d) {
    std::string out = "<";
    for (std::size_t i = 0; i < n.fields.size(); ++i) {
      if (i) out += ", ";
      out += n.fields[i].first + ": " + print(n.fields[i].second, d, 4);
    }
    return out + ">";
  }
  std::string text(const tr::Field& n, int d) { return print(n.record, d, 7) + "." + n.field; }
  std::string text(const tr::If& n, int d) {
    return "if " + print(n.test, d, 1) + " |>" + (n.taken ? "true " : "false ") + print(n.branch, d, 0);
  }
  std::string text(const tr::Singleton& n, int d) { return "{" + print(n.element, d, 0) + "}"; }
  std::string text(const tr::Union& n, int d) { return "union {" + print(n.left, d, 0) + ", " + print(n.right, d, 0) + "}"; }
  std::string text(const tr::Sum& n, int d) { return "sum " + print(n.arg, d, 6); }
  std::string text(const tr::IsEmpty& n, int d) { return "empty " + print(n.arg, d, 6); }
  std::string text(const tr::Comp& n, int d) {
    std::string out = "for " + n.var + " in " + print(n.source, d, 1) + " {";
    if (n.elements.empty()) return out + "}";
    for (const auto& [l, t] : n.elements) {
      out += "\n";
      indent(out, d + 1);
      out += render_label(l) + ": " + print(t, d + 1, 0);
    }
    out += "\n";
    indent(out, d);
    return out + "}";
  }
};

}  // namespace detail

inline std::string render_pattern(const Pattern& p) { return detail::render_pattern(p, nullptr); }

// The outer pattern with the parts the inner one leaves as holes boxed.
inline std::string render_pattern_diff(const Pattern& inner, const Pattern& outer) {
  return detail::render_pattern(outer, &inner);
}

inline std::string render_expr(const Expr& e) { return detail::ExprPrinter().print(e, nullptr, 0); }

// The outer query with the parts the inner one leaves as holes boxed.
inline std::string render_expr_diff(const Expr& inner, const Expr& outer) {
  return detail::ExprPrinter().print(outer, &inner, 0);
}

// Human-readable trace; comprehension elements go on separate lines. The
// stored branch and body expressions are not shown.
inline std::string render_trace(const Trace& t) { return detail::TracePrinter().print(t, 0, 0); }

inline std::string render_env(const PatternEnv& rho) {
  std::string out;
  for (const auto& [x, p] : rho) out += x + " = " + render_pattern(p) + "\n";
  return out;
}

inline std::string render_env_diff(const PatternEnv& inner, const PatternEnv& outer) {
  std::string out;
  for (const auto& [x, p] : outer) out += x + " = " + render_pattern_diff(lookup(inner, x), p) + "\n";
  return out;
}

}  // namespace nrc
