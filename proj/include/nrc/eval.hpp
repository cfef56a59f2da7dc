#pragma once

#include <span>
#include <type_traits>

#include "nrc/trace.hpp"

namespace nrc {

struct Evaluation {
  Value value;
  Trace trace;
};

struct CompEvaluation {
  Value value;
  TraceSet traces;
};

namespace detail {

// Local bindings live on the C++ stack during evaluation and replay; the
// caller's environment is consulted last.
struct Scope {
  const std::string* name;
  const Value* value;
  const Scope* parent;
};

inline const Value& lookup(const Environment& env, const Scope* s, const std::string& x) {
  for (; s; s = s->parent)
    if (*s->name == x) return *s->value;
  auto it = env.find(x);
  if (it == env.end()) throw Error(ErrorCode::UnboundVariable, "unbound variable " + x);
  return it->second;
}

inline std::int64_t wrap(std::uint64_t u) { return static_cast<std::int64_t>(u); }

inline std::int64_t as_int(const Constant& c, PrimOp op) {
  if (c.index() != 0) throw Error(ErrorCode::TypeStuck, "operator " + std::string(symbol(op)) + " expects int");
  return std::get<0>(c);
}

inline bool as_bool(const Constant& c, PrimOp op) {
  if (c.index() != 1) throw Error(ErrorCode::TypeStuck, "operator " + std::string(symbol(op)) + " expects bool");
  return std::get<1>(c);
}

inline const Constant& constant_of(const Value& v, std::string_view what) {
  if (!v.is_constant()) throw Error(ErrorCode::TypeStuck, std::string(what) + " expects a constant");
  return v.as_constant();
}

inline const Elements& elements_of(const Value& v, std::string_view what) {
  if (!v.is_collection()) throw Error(ErrorCode::TypeStuck, std::string(what) + " expects a collection");
  return v.elements();
}

inline bool test_value(const Value& v) {
  const Constant& c = constant_of(v, "if");
  if (c.index() != 1) throw Error(ErrorCode::TypeStuck, "if expects a boolean test");
  return std::get<1>(c);
}

inline Value field_of(const Value& v, const std::string& f) {
  if (!v.is_record()) throw Error(ErrorCode::TypeStuck, "projection ." + f + " from non-record");
  auto it = v.fields().find(f);
  if (it == v.fields().end()) throw Error(ErrorCode::TypeStuck, "record has no field " + f);
  return it->second;
}

inline std::int64_t sum_of(const Value& v) {
  std::uint64_t acc = 0;
  for (const auto& [l, e] : elements_of(v, "sum")) acc += static_cast<std::uint64_t>(as_int(constant_of(e, "sum"), PrimOp::Add));
  return wrap(acc);
}

// Adds one labelled element to a collection under construction. Labels
// normally arrive in increasing order.
inline void append_element(Elements& out, Label l, const Value& v) {
  if (out.empty() || out.rbegin()->first < l) {
    if (!out.empty() && out.rbegin()->first.is_prefix_of(l))
      throw Error(ErrorCode::DomainOverlap, "label " + to_string(out.rbegin()->first) + " is a prefix of " + to_string(l));
    out.emplace_hint(out.end(), std::move(l), v);
    return;
  }
  if (overlaps_prefix(out, l)) throw Error(ErrorCode::DomainOverlap, "label " + to_string(l) + " overlaps an existing label");
  out.emplace(std::move(l), v);
}

inline Value union_values(const Value& a, const Value& b) {
  static const Label one = Label::of(nat(1));
  static const Label two = Label::of(nat(2));
  Elements out;
  for (const auto& [l, e] : elements_of(a, "union")) out.emplace_hint(out.end(), one + l, e);
  for (const auto& [l, e] : elements_of(b, "union")) out.emplace_hint(out.end(), two + l, e);
  return Value::collection(std::move(out));
}

inline Value singleton_value(const Value& v) {
  Elements out;
  out.emplace(Label::epsilon(), v);
  return Value::collection(std::move(out));
}

}  // namespace detail

inline Constant apply_prim(PrimOp op, std::span<const Constant> args) {
  using detail::as_bool;
  using detail::as_int;
  using detail::wrap;
  if (args.size() != arity(op))
    throw Error(ErrorCode::TypeStuck, "operator " + std::string(symbol(op)) + " given " + std::to_string(args.size()) + " arguments");
  auto u = [&](std::size_t i) { return static_cast<std::uint64_t>(as_int(args[i], op)); };
  switch (op) {
    case PrimOp::Add: return int_const(wrap(u(0) + u(1)));
    case PrimOp::Sub: return int_const(wrap(u(0) - u(1)));
    case PrimOp::Mul: return int_const(wrap(u(0) * u(1)));
    case PrimOp::Div: {
      std::int64_t a = as_int(args[0], op), b = as_int(args[1], op);
      if (b == 0) throw Error(ErrorCode::DivideByZero, "division by zero");
      if (b == -1) return int_const(wrap(0 - static_cast<std::uint64_t>(a)));
      return int_const(a / b);
    }
    case PrimOp::Neg: return int_const(wrap(0 - u(0)));
    case PrimOp::Lt: return bool_const(as_int(args[0], op) < as_int(args[1], op));
    case PrimOp::Le: return bool_const(as_int(args[0], op) <= as_int(args[1], op));
    case PrimOp::Gt: return bool_const(as_int(args[0], op) > as_int(args[1], op));
    case PrimOp::Ge: return bool_const(as_int(args[0], op) >= as_int(args[1], op));
    case PrimOp::Eq:
    case PrimOp::Neq: {
      if (args[0].index() != args[1].index())
        throw Error(ErrorCode::TypeStuck, "operator " + std::string(symbol(op)) + " on mixed int and bool");
      bool eq = args[0] == args[1];
      return bool_const(op == PrimOp::Eq ? eq : !eq);
    }
    case PrimOp::And: return bool_const(as_bool(args[0], op) && as_bool(args[1], op));
    case PrimOp::Or: return bool_const(as_bool(args[0], op) || as_bool(args[1], op));
    case PrimOp::Not: return bool_const(!as_bool(args[0], op));
  }
  throw Error(ErrorCode::TypeStuck, "unknown operator");
}

namespace detail {

// Traced and plain evaluation share one walk; the plain variant never
// allocates trace nodes.
template <bool Traced>
class Evaluator {
 public:
  explicit Evaluator(const Environment& env) : env_(env) {}

  Evaluation run(const Expr& e, const Scope* s) {
    return std::visit([&](const auto& n) { return step(n, s); }, e.node().data);
  }

  CompEvaluation comp(const Expr& body, const std::string& var, const Value& source, const Scope* s) {
    Elements out;
    TraceSet traces;
    for (const auto& [l, elem] : elements_of(source, "comprehension")) {
      Scope frame{&var, &elem, s};
      Evaluation r = run(body, &frame);
      for (const auto& [l2, v2] : elements_of(r.value, "comprehension body")) append_element(out, l + l2, v2);
      if constexpr (Traced) traces.emplace_hint(traces.end(), l, std::move(r.trace));
    }
    return {Value::collection(std::move(out)), std::move(traces)};
  }

 private:
  template <class Make>
  static Trace trace(Make&& make) {
    if constexpr (Traced)
      return make();
    else
      return tr::hole();
  }

  Evaluation step(const ex::Const& c, const Scope*) {
    return {Value::constant(c.value), trace([&] { return tr::make(tr::Const{c.value}); })};
  }

  Evaluation step(const ex::Prim& p, const Scope* s) {
    std::vector<Constant> args;
    std::vector<Trace> ts;
    args.reserve(p.args.size());
    for (const auto& a : p.args) {
      Evaluation r = run(a, s);
      args.push_back(constant_of(r.value, symbol(p.op)));
      if constexpr (Traced) ts.push_back(std::move(r.trace));
    }
    Value v = Value::constant(apply_prim(p.op, args));
    return {v, trace([&] { return tr::make(tr::Prim{p.op, std::move(ts)}); })};
  }

  Evaluation step(const ex::Var& x, const Scope* s) {
    return {lookup(env_, s, x.name), trace([&] { return tr::make(tr::Var{x.name}); })};
  }

  Evaluation step(const ex::Let& l, const Scope* s) {
    Evaluation r1 = run(l.bound, s);
    Scope frame{&l.var, &r1.value, s};
    Evaluation r2 = run(l.body, &frame);
    return {r2.value, trace([&] { return tr::make(tr::Let{l.var, std::move(r1.trace), std::move(r2.trace)}); })};
  }

  Evaluation step(const ex::Record& r, const Scope* s) {
    Fields fs;
    std::vector<std::pair<std::string, Trace>> ts;
    for (const auto& [k, f] : r.fields) {
      Evaluation rf = run(f, s);
      if (!fs.emplace(k, rf.value).second) throw Error(ErrorCode::TypeStuck, "duplicate field " + k);
      if constexpr (Traced) ts.emplace_back(k, std::move(rf.trace));
    }
    return {Value::record(std::move(fs)), trace([&] { return tr::make(tr::Record{std::move(ts)}); })};
  }

  Evaluation step(const ex::Field& f, const Scope* s) {
    Evaluation r = run(f.record, s);
    return {field_of(r.value, f.field), trace([&] { return tr::make(tr::Field{std::move(r.trace), f.field}); })};
  }

  Evaluation step(const ex::If& i, const Scope* s) {
    Evaluation c = run(i.test, s);
    bool b = test_value(c.value);
    Evaluation r = run(b ? i.then_branch : i.else_branch, s);
    return {r.value, trace([&] {
              return tr::make(tr::If{std::move(c.trace), i.then_branch, i.else_branch, b, std::move(r.trace)});
            })};
  }

  Evaluation step(const ex::Empty& e, const Scope*) {
    return {Value::empty(), trace([&] { return tr::make(tr::Empty{e.element}); })};
  }

  Evaluation step(const ex::Singleton& e, const Scope* s) {
    Evaluation r = run(e.element, s);
    return {singleton_value(r.value), trace([&] { return tr::make(tr::Singleton{std::move(r.trace)}); })};
  }

  Evaluation step(const ex::Union& u, const Scope* s) {
    Evaluation a = run(u.left, s);
    Evaluation b = run(u.right, s);
    return {union_values(a.value, b.value),
            trace([&] { return tr::make(tr::Union{std::move(a.trace), std::move(b.trace)}); })};
  }

  Evaluation step(const ex::Comp& c, const Scope* s) {
    Evaluation src = run(c.source, s);
    CompEvaluation r = comp(c.body, c.var, src.value, s);
    return {r.value, trace([&] {
              return tr::make(tr::Comp{c.body, c.var, std::move(src.trace), std::move(r.traces)});
            })};
  }

  Evaluation step(const ex::Sum& e, const Scope* s) {
    Evaluation r = run(e.arg, s);
    return {Value::integer(sum_of(r.value)), trace([&] { return tr::make(tr::Sum{std::move(r.trace)}); })};
  }

  Evaluation step(const ex::IsEmpty& e, const Scope* s) {
    Evaluation r = run(e.arg, s);
    bool b = elements_of(r.value, "empty").empty();
    return {Value::boolean(b), trace([&] { return tr::make(tr::IsEmpty{std::move(r.trace)}); })};
  }

  Evaluation step(const ex::Hole&, const Scope*) {
    throw Error(ErrorCode::HoleEncountered, "cannot evaluate a hole");
  }

  const Environment& env_;
};

}  // namespace detail

// Traced evaluation: the value of e and a trace recording how it was computed.
inline Evaluation eval(const Environment& env, const Expr& e) {
  return detail::Evaluator<true>(env).run(e, nullptr);
}

// Evaluation without recording a trace.
inline Value eval_value(const Environment& env, const Expr& e) {
  return detail::Evaluator<false>(env).run(e, nullptr).value;
}

// The comprehension step on its own: body under var bound to each element
// of coll, in label order.
inline CompEvaluation eval_comp(const Environment& env, const std::string& var, const Value& coll, const Expr& body) {
  return detail::Evaluator<true>(env).comp(body, var, coll, nullptr);
}

}  // namespace nrc
