#pragma once

#include <map>
#include <string>

#include "nrc/trace.hpp"

namespace nrc {

using TypeContext = std::map<std::string, Type, std::less<>>;

inline TypeContext type_context(const Environment& env) {
  TypeContext ctx;
  for (const auto& [k, v] : env) ctx.emplace(k, type_of(v));
  return ctx;
}

namespace detail {

inline Type expect_set(const Type& t, const char* what) {
  if (t.kind() == Type::Kind::Unknown) return Type::unknown();
  if (t.kind() != Type::Kind::Set) throw Error(ErrorCode::TypeError, std::string(what) + " expects a collection, got " + to_string(t));
  return t.element();
}

inline Type field_type(const Type& t, const std::string& f) {
  if (t.kind() == Type::Kind::Unknown) return Type::unknown();
  if (t.kind() != Type::Kind::Record) throw Error(ErrorCode::TypeError, "projection ." + f + " from non-record " + to_string(t));
  auto it = t.fields().find(f);
  if (it == t.fields().end()) throw Error(ErrorCode::TypeError, "record " + to_string(t) + " has no field " + f);
  return it->second;
}

inline Type prim_type(PrimOp op, const std::vector<Type>& args) {
  if (args.size() != arity(op))
    throw Error(ErrorCode::TypeError, "operator " + std::string(symbol(op)) + " expects " + std::to_string(arity(op)) + " arguments");
  auto all = [&](const Type& t) {
    for (const auto& a : args) unify(a, t);
  };
  switch (op) {
    case PrimOp::Add: case PrimOp::Sub: case PrimOp::Mul: case PrimOp::Div: case PrimOp::Neg:
      all(Type::integer());
      return Type::integer();
    case PrimOp::Lt: case PrimOp::Le: case PrimOp::Gt: case PrimOp::Ge:
      all(Type::integer());
      return Type::boolean();
    case PrimOp::And: case PrimOp::Or: case PrimOp::Not:
      all(Type::boolean());
      return Type::boolean();
    case PrimOp::Eq: case PrimOp::Neq: {
      Type t = unify(args[0], args[1]);
      if (!t.is_base() && t.kind() != Type::Kind::Unknown)
        throw Error(ErrorCode::TypeError, "equality on non-base type " + to_string(t));
      return Type::boolean();
    }
  }
  return Type::unknown();
}

inline TypeContext extend(const TypeContext& ctx, const std::string& x, Type t) {
  TypeContext out = ctx;
  out.insert_or_assign(x, std::move(t));
  return out;
}

}  // namespace detail

inline Type typecheck_expr(const TypeContext& ctx, const Expr& e) {
  using namespace detail;
  return std::visit(
      overloaded{
          [](const ex::Const& c) { return c.value.index() == 0 ? Type::integer() : Type::boolean(); },
          [&](const ex::Prim& p) {
            std::vector<Type> args;
            for (const auto& a : p.args) args.push_back(typecheck_expr(ctx, a));
            return prim_type(p.op, args);
          },
          [&](const ex::Var& v) {
            auto it = ctx.find(v.name);
            if (it == ctx.end()) throw Error(ErrorCode::TypeError, "unbound variable " + v.name);
            return it->second;
          },
          [&](const ex::Let& l) {
            Type t1 = typecheck_expr(ctx, l.bound);
            return typecheck_expr(extend(ctx, l.var, t1), l.body);
          },
          [&](const ex::Record& r) {
            std::map<std::string, Type> fs;
            for (const auto& [k, f] : r.fields)
              if (!fs.emplace(k, typecheck_expr(ctx, f)).second)
                throw Error(ErrorCode::TypeError, "duplicate field " + k);
            return Type::record(std::move(fs));
          },
          [&](const ex::Field& f) { return field_type(typecheck_expr(ctx, f.record), f.field); },
          [&](const ex::If& i) {
            unify(typecheck_expr(ctx, i.test), Type::boolean());
            return unify(typecheck_expr(ctx, i.then_branch), typecheck_expr(ctx, i.else_branch));
          },
          [](const ex::Empty& em) { return Type::set(em.element.value_or(Type::unknown())); },
          [&](const ex::Singleton& s) { return Type::set(typecheck_expr(ctx, s.element)); },
          [&](const ex::Union& u) {
            Type a = typecheck_expr(ctx, u.left);
            Type b = typecheck_expr(ctx, u.right);
            expect_set(a, "union");
            expect_set(b, "union");
            return unify(unify(a, b), Type::set(Type::unknown()));
          },
          [&](const ex::Comp& c) {
            Type elem = expect_set(typecheck_expr(ctx, c.source), "comprehension source");
            Type body = typecheck_expr(extend(ctx, c.var, elem), c.body);
            expect_set(body, "comprehension body");
            return unify(body, Type::set(Type::unknown()));
          },
          [&](const ex::Sum& s) {
            unify(expect_set(typecheck_expr(ctx, s.arg), "sum"), Type::integer());
            return Type::integer();
          },
          [&](const ex::IsEmpty& s) {
            expect_set(typecheck_expr(ctx, s.arg), "empty");
            return Type::boolean();
          },
          [](const ex::Hole&) { return Type::unknown(); },
      },
      e.node().data);
}

inline Type typecheck_trace(const TypeContext& ctx, const Trace& t) {
  using namespace detail;
  return std::visit(
      overloaded{
          [](const tr::Const& c) { return c.value.index() == 0 ? Type::integer() : Type::boolean(); },
          [&](const tr::Prim& p) {
            std::vector<Type> args;
            for (const auto& a : p.args) args.push_back(typecheck_trace(ctx, a));
            return prim_type(p.op, args);
          },
          [&](const tr::Var& v) {
            auto it = ctx.find(v.name);
            if (it == ctx.end()) throw Error(ErrorCode::TypeError, "unbound variable " + v.name);
            return it->second;
          },
          [&](const tr::Let& l) {
            Type t1 = typecheck_trace(ctx, l.bound);
            return typecheck_trace(extend(ctx, l.var, t1), l.body);
          },
          [&](const tr::Record& r) {
            std::map<std::string, Type> fs;
            for (const auto& [k, f] : r.fields)
              if (!fs.emplace(k, typecheck_trace(ctx, f)).second)
                throw Error(ErrorCode::TypeError, "duplicate field " + k);
            return Type::record(std::move(fs));
          },
          [&](const tr::Field& f) { return field_type(typecheck_trace(ctx, f.record), f.field); },
          [&](const tr::If& i) {
            unify(typecheck_trace(ctx, i.test), Type::boolean());
            Type t = unify(typecheck_expr(ctx, i.then_branch), typecheck_expr(ctx, i.else_branch));
            return unify(t, typecheck_trace(ctx, i.branch));
          },
          [](const tr::Empty& em) { return Type::set(em.element.value_or(Type::unknown())); },
          [&](const tr::Singleton& s) { return Type::set(typecheck_trace(ctx, s.element)); },
          [&](const tr::Union& u) {
            Type a = typecheck_trace(ctx, u.left);
            Type b = typecheck_trace(ctx, u.right);
            expect_set(a, "union");
            expect_set(b, "union");
            return unify(unify(a, b), Type::set(Type::unknown()));
          },
          [&](const tr::Comp& c) {
            Type elem = expect_set(typecheck_trace(ctx, c.source), "comprehension source");
            TypeContext inner = extend(ctx, c.var, elem);
            Type body = unify(typecheck_expr(inner, c.body), Type::set(Type::unknown()));
            for (const auto& [l, sub] : c.elements) body = unify(body, typecheck_trace(inner, sub));
            return body;
          },
          [&](const tr::Sum& s) {
            unify(expect_set(typecheck_trace(ctx, s.arg), "sum"), Type::integer());
            return Type::integer();
          },
          [&](const tr::IsEmpty& s) {
            expect_set(typecheck_trace(ctx, s.arg), "empty");
            return Type::boolean();
          },
          [](const tr::Hole&) { return Type::unknown(); },
      },
      t.node().data);
}

}  // namespace nrc
