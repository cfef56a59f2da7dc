#pragma once

#include <random>
#include <string>
#include <vector>

#include "nrc/eval.hpp"
#include "nrc/expr_order.hpp"
#include "nrc/pattern.hpp"
#include "nrc/typing.hpp"

// Random generators for property tests: tables, well-typed queries, patterns
// below a value, and the two perturbations used to test slicing: filling the
// holes of a slice and varying the input where a pattern environment allows.
namespace nrc::harness {

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int n) { return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng)); }
inline bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

struct Limits {
  int max_rows = 6;
  int max_int = 4;
  int max_nested = 3;
};

// Labels for elements added by vary_env and for extra trace entries added by
// fill_holes; both draw from the same small pool so that they line up.
inline Label fresh_label(int i) { return Label::of(sym("n" + std::to_string(i))); }
inline constexpr int fresh_pool = 3;

inline Value random_value(const Type& t, Rng& rng, const Limits& lim = {}) {
  switch (t.kind()) {
    case Type::Kind::Int: return Value::integer(pick(rng, lim.max_int + 1));
    case Type::Kind::Bool: return Value::boolean(chance(rng, 0.5));
    case Type::Kind::Record: {
      Fields fs;
      for (const auto& [k, ft] : t.fields()) fs.emplace(k, random_value(ft, rng, lim));
      return Value::record(std::move(fs));
    }
    case Type::Kind::Set: {
      Elements es;
      if (t.element().kind() == Type::Kind::Unknown) return Value::empty();
      int n = pick(rng, lim.max_nested + 1);
      for (int i = 0; i < n; ++i) es.emplace(Label::of(sym("e" + std::to_string(i + 1))), random_value(t.element(), rng, lim));
      return Value::collection(std::move(es));
    }
    case Type::Kind::Unknown: break;
  }
  return Value::empty();
}

inline Type random_row_type(Rng& rng) {
  static const char* names[] = {"A", "B", "C", "D"};
  std::map<std::string, Type> fs;
  int n = 2 + pick(rng, 2);
  for (int i = 0; i < n; ++i) {
    int r = pick(rng, 10);
    fs.emplace(names[i], r < 7 ? Type::integer() : r < 8 ? Type::boolean() : Type::set(Type::integer()));
  }
  return Type::record(std::move(fs));
}

struct Tables {
  Environment env;
  TypeContext types;
};

// One or two tables R and S with string row labels r1, r2, ...
inline Tables random_tables(Rng& rng, const Limits& lim = {}) {
  Tables out;
  int count = 1 + pick(rng, 2);
  const char* names[] = {"R", "S"};
  for (int t = 0; t < count; ++t) {
    Type row = random_row_type(rng);
    int rows = pick(rng, lim.max_rows + 1);
    Elements es;
    for (int i = 0; i < rows; ++i) es.emplace(Label::of(sym("r" + std::to_string(i + 1))), random_value(row, rng, lim));
    out.env.emplace(names[t], Value::collection(std::move(es)));
    out.types.emplace(names[t], Type::set(row));
  }
  return out;
}

// Generator of well-typed queries of a requested type.
class QueryGen {
 public:
  QueryGen(Rng& rng, Limits lim = {}) : rng_(rng), lim_(lim) {}

  Expr any(const TypeContext& ctx, int depth) {
    std::vector<Type> targets = {Type::integer(), Type::boolean()};
    for (const auto& [x, t] : ctx) {
      if (t.kind() == Type::Kind::Set && t.element().kind() != Type::Kind::Unknown) {
        targets.push_back(t);
        targets.push_back(t);
        if (t.element().kind() == Type::Kind::Record) targets.push_back(Type::set(narrow(t.element())));
      }
    }
    targets.push_back(Type::set(Type::integer()));
    return gen(ctx, targets[static_cast<std::size_t>(pick(rng_, static_cast<int>(targets.size())))], depth);
  }

  Expr gen(const TypeContext& ctx, const Type& t, int depth) {
    if (depth <= 0 || chance(rng_, 0.15)) return leaf(ctx, t);
    switch (t.kind()) {
      case Type::Kind::Int: return gen_int(ctx, depth);
      case Type::Kind::Bool: return gen_bool(ctx, depth);
      case Type::Kind::Record: return gen_record(ctx, t, depth);
      case Type::Kind::Set: return gen_set(ctx, t, depth);
      case Type::Kind::Unknown: break;
    }
    return ex::empty();
  }

  Expr leaf(const TypeContext& ctx, const Type& t) {
    if (t.kind() == Type::Kind::Bool) {
      std::vector<Expr> ints = candidates(ctx, Type::integer());
      if (!ints.empty() && chance(rng_, 0.7)) {
        static const PrimOp ops[] = {PrimOp::Eq, PrimOp::Lt, PrimOp::Le, PrimOp::Gt, PrimOp::Neq};
        Expr lhs = ints[static_cast<std::size_t>(pick(rng_, static_cast<int>(ints.size())))];
        Expr rhs = chance(rng_, 0.5) ? ints[static_cast<std::size_t>(pick(rng_, static_cast<int>(ints.size())))]
                                     : ex::integer(pick(rng_, lim_.max_int + 1));
        return ex::prim(ops[pick(rng_, 5)], {lhs, rhs});
      }
    }
    std::vector<Expr> cands = candidates(ctx, t);
    if (!cands.empty() && chance(rng_, 0.7)) return cands[static_cast<std::size_t>(pick(rng_, static_cast<int>(cands.size())))];
    switch (t.kind()) {
      case Type::Kind::Int: return ex::integer(pick(rng_, lim_.max_int + 1));
      case Type::Kind::Bool: return ex::boolean(chance(rng_, 0.5));
      case Type::Kind::Record: {
        std::vector<std::pair<std::string, Expr>> fs;
        for (const auto& [k, ft] : t.fields()) fs.emplace_back(k, leaf(ctx, ft));
        return ex::record(std::move(fs));
      }
      case Type::Kind::Set:
        if (chance(rng_, 0.5)) return ex::singleton(leaf(ctx, t.element()));
        return ex::empty(chance(rng_, 0.5) ? std::optional<Type>(t.element()) : std::nullopt);
      case Type::Kind::Unknown: break;
    }
    return ex::empty();
  }

 private:
  // Variables and variable projections of type t.
  std::vector<Expr> candidates(const TypeContext& ctx, const Type& t) {
    std::vector<Expr> out;
    for (const auto& [x, xt] : ctx) {
      if (xt == t) out.push_back(ex::var(x));
      if (xt.kind() == Type::Kind::Record)
        for (const auto& [k, ft] : xt.fields())
          if (ft == t) out.push_back(ex::field(ex::var(x), k));
    }
    return out;
  }

  // A record type with a random non-empty subset of the fields.
  Type narrow(const Type& row) {
    std::map<std::string, Type> fs;
    for (const auto& [k, ft] : row.fields())
      if (chance(rng_, 0.6)) fs.emplace(k, ft);
    if (fs.empty()) fs.emplace(*row.fields().begin());
    return Type::record(std::move(fs));
  }

  std::string fresh() { return "x" + std::to_string(++counter_); }

  Expr gen_let(const TypeContext& ctx, const Type& t, int depth) {
    std::vector<Type> choices = {Type::integer(), Type::boolean()};
    for (const auto& [x, xt] : ctx)
      if (xt.kind() == Type::Kind::Set) choices.push_back(xt);
    Type bt = choices[static_cast<std::size_t>(pick(rng_, static_cast<int>(choices.size())))];
    std::string y = fresh();
    Expr bound = gen(ctx, bt, depth - 1);
    return ex::let(y, bound, gen(detail::extend(ctx, y, bt), t, depth - 1));
  }

  Expr gen_if(const TypeContext& ctx, const Type& t, int depth) {
    return ex::if_(gen(ctx, Type::boolean(), depth - 1), gen(ctx, t, depth - 1), gen(ctx, t, depth - 1));
  }

  Expr gen_int(const TypeContext& ctx, int depth) {
    switch (pick(rng_, 6)) {
      case 0: return leaf(ctx, Type::integer());
      case 1:
      case 2: {
        static const PrimOp ops[] = {PrimOp::Add, PrimOp::Sub, PrimOp::Mul};
        return ex::prim(ops[pick(rng_, 3)], {gen(ctx, Type::integer(), depth - 1), gen(ctx, Type::integer(), depth - 1)});
      }
      case 3: return ex::sum(gen(ctx, Type::set(Type::integer()), depth - 1));
      case 4: return gen_if(ctx, Type::integer(), depth);
      default: return gen_let(ctx, Type::integer(), depth);
    }
  }

  Expr gen_bool(const TypeContext& ctx, int depth) {
    switch (pick(rng_, 7)) {
      case 0: return leaf(ctx, Type::boolean());
      case 1:
      case 2: {
        static const PrimOp ops[] = {PrimOp::Eq, PrimOp::Neq, PrimOp::Lt, PrimOp::Le, PrimOp::Gt, PrimOp::Ge};
        return ex::prim(ops[pick(rng_, 6)], {gen(ctx, Type::integer(), depth - 1), gen(ctx, Type::integer(), depth - 1)});
      }
      case 3: {
        static const PrimOp ops[] = {PrimOp::And, PrimOp::Or};
        if (chance(rng_, 0.3)) return ex::prim(PrimOp::Not, {gen(ctx, Type::boolean(), depth - 1)});
        return ex::prim(ops[pick(rng_, 2)], {gen(ctx, Type::boolean(), depth - 1), gen(ctx, Type::boolean(), depth - 1)});
      }
      case 4: {
        Type st = some_set_type(ctx);
        return ex::is_empty(gen(ctx, st, depth - 1));
      }
      case 5: return gen_if(ctx, Type::boolean(), depth);
      default: return gen_let(ctx, Type::boolean(), depth);
    }
  }

  Expr gen_record(const TypeContext& ctx, const Type& t, int depth) {
    switch (pick(rng_, 4)) {
      case 0: return leaf(ctx, t);
      case 1: return gen_if(ctx, t, depth);
      case 2: return gen_let(ctx, t, depth);
      default: {
        std::vector<std::pair<std::string, Expr>> fs;
        for (const auto& [k, ft] : t.fields()) fs.emplace_back(k, gen(ctx, ft, depth - 1));
        return ex::record(std::move(fs));
      }
    }
  }

  Type some_set_type(const TypeContext& ctx) {
    std::vector<Type> sets = {Type::set(Type::integer())};
    for (const auto& [x, xt] : ctx) {
      if (xt.kind() == Type::Kind::Set && xt.element().kind() != Type::Kind::Unknown) {
        sets.push_back(xt);
        sets.push_back(xt);
      }
      if (xt.kind() == Type::Kind::Record)
        for (const auto& [k, ft] : xt.fields())
          if (ft.kind() == Type::Kind::Set) sets.push_back(ft);
    }
    return sets[static_cast<std::size_t>(pick(rng_, static_cast<int>(sets.size())))];
  }

  Expr gen_set(const TypeContext& ctx, const Type& t, int depth) {
    switch (pick(rng_, 9)) {
      case 0: return leaf(ctx, t);
      case 1: return ex::singleton(gen(ctx, t.element(), depth - 1));
      case 2: return ex::union_(gen(ctx, t, depth - 1), gen(ctx, t, depth - 1));
      case 3: return gen_if(ctx, t, depth);
      case 4: return gen_let(ctx, t, depth);
      case 5:
      case 6:
      case 7:
      default: {
        Type src = some_set_type(ctx);
        std::string x = fresh();
        Expr source = gen(ctx, src, depth - 1);
        TypeContext inner = detail::extend(ctx, x, src.element());
        Expr body = chance(rng_, 0.5) ? ex::if_(gen(inner, Type::boolean(), depth - 1),
                                                ex::singleton(gen(inner, t.element(), depth - 1)), ex::empty())
                                      : gen(inner, t, depth - 1);
        return ex::comp(body, x, source);
      }
    }
  }

  Rng& rng_;
  Limits lim_;
  int counter_ = 0;
};

// A random pattern p with matches(p, v).
inline Pattern random_pattern_below(const Value& v, Rng& rng, bool top = true) {
  if (!top) {
    int r = pick(rng, 10);
    if (r < 2) return Pattern::hole();
    if (r < 3) return Pattern::diamond();
  }
  auto tail_for = [&](bool all_listed) {
    int r = pick(rng, all_listed ? 3 : 2);
    if (all_listed && r == 2) return Tail::Closed;
    return r == 0 ? Tail::Hole : Tail::Diamond;
  };
  switch (v.kind()) {
    case Value::Kind::Constant: return Pattern::of(v);
    case Value::Kind::Record: {
      FieldPatterns fs;
      for (const auto& [k, f] : v.fields())
        if (chance(rng, 0.7)) fs.emplace(k, random_pattern_below(f, rng, false));
      return Pattern::record(std::move(fs), tail_for(fs.size() == v.fields().size()));
    }
    case Value::Kind::Collection: {
      ElementPatterns es;
      for (const auto& [l, e] : v.elements())
        if (chance(rng, 0.6)) es.emplace(l, random_pattern_below(e, rng, false));
      return Pattern::set(std::move(es), tail_for(es.size() == v.elements().size()));
    }
  }
  return Pattern::hole();
}

// A random pattern below p: subpatterns and tails weakened towards hole.
inline Pattern random_weakening(const Pattern& p, Rng& rng) {
  if (chance(rng, 0.15)) return Pattern::hole();
  auto weaker_tail = [&](Tail t) { return chance(rng, 0.4) ? Tail::Hole : t; };
  switch (p.kind()) {
    case Pattern::Kind::Hole:
    case Pattern::Kind::Constant: return p;
    case Pattern::Kind::Diamond: return chance(rng, 0.3) ? Pattern::hole() : p;
    case Pattern::Kind::Record: {
      Tail t = weaker_tail(p.tail());
      FieldPatterns fs;
      for (const auto& [k, q] : p.fields())
        if (t != Tail::Hole || chance(rng, 0.8)) fs.emplace(k, random_weakening(q, rng));
      Pattern out = Pattern::record(std::move(fs), t);
      return leq(out, p) ? out : p;
    }
    case Pattern::Kind::Set: {
      Tail t = weaker_tail(p.tail());
      ElementPatterns es;
      for (const auto& [l, q] : p.elements())
        if (t != Tail::Hole || chance(rng, 0.8)) es.emplace(l, random_weakening(q, rng));
      Pattern out = Pattern::set(std::move(es), t);
      return leq(out, p) ? out : p;
    }
  }
  return p;
}

namespace detail {

inline Type element_type(const Value& coll) {
  Type t = Type::unknown();
  for (const auto& [l, e] : coll.elements()) t = unify(t, type_of(e));
  return t;
}

inline Value vary(const Pattern& p, const Value& v, Rng& rng) {
  switch (p.kind()) {
    case Pattern::Kind::Hole: {
      if (chance(rng, 0.4)) return v;
      Type t = type_of(v);
      if (v.is_collection() && t.element().kind() == Type::Kind::Unknown) return v;
      return random_value(t, rng);
    }
    case Pattern::Kind::Diamond:
    case Pattern::Kind::Constant: return v;
    case Pattern::Kind::Record: {
      Fields fs;
      for (const auto& [k, f] : v.fields()) {
        auto it = p.fields().find(k);
        if (it != p.fields().end())
          fs.emplace(k, vary(it->second, f, rng));
        else
          fs.emplace(k, p.tail() == Tail::Hole ? vary(Pattern::hole(), f, rng) : f);
      }
      return Value::record(std::move(fs));
    }
    case Pattern::Kind::Set: {
      Elements es;
      for (const auto& [l, e] : v.elements()) {
        auto it = p.elements().find(l);
        if (it != p.elements().end()) {
          es.emplace(l, vary(it->second, e, rng));
        } else if (p.tail() == Tail::Hole) {
          int r = pick(rng, 4);
          if (r == 0) continue;
          es.emplace(l, r == 1 ? vary(Pattern::hole(), e, rng) : e);
        } else {
          es.emplace(l, e);
        }
      }
      if (p.tail() == Tail::Hole) {
        Type et = element_type(v);
        if (et.kind() != Type::Kind::Unknown) {
          for (int i = 1; i <= fresh_pool; ++i) {
            Label l = fresh_label(i);
            if (chance(rng, 0.3) && !overlaps_prefix(es, l)) es.emplace(l, random_value(et, rng));
          }
        }
      }
      return Value::collection(std::move(es));
    }
  }
  return v;
}

}  // namespace detail

// An environment that agrees with env wherever rho requires. Throws
// PatternMismatch if some rho(x) does not match env(x).
inline Environment vary_env(const PatternEnv& rho, const Environment& env, std::uint64_t seed) {
  Rng rng(seed);
  Environment out;
  for (const auto& [x, v] : env) {
    Pattern p = lookup(rho, x);
    if (!matches(p, v)) throw Error(ErrorCode::PatternMismatch, "pattern for " + x + " does not match its value");
    Value w = detail::vary(p, v, rng);
    if (!equiv_at(p, v, w)) throw Error(ErrorCode::PatternMismatch, "variation of " + x + " escaped its pattern");
    out.emplace(x, std::move(w));
  }
  return out;
}

namespace detail {

// Replaces constants and sometimes flips recorded branches; the type is kept.
inline Trace mutate_trace(const Trace& t, Rng& rng) {
  return std::visit(
      nrc::detail::overloaded{
          [&](const tr::Const& n) {
            if (!chance(rng, 0.5)) return t;
            Constant c = n.value.index() == 0 ? int_const(pick(rng, 5)) : bool_const(chance(rng, 0.5));
            return tr::make(tr::Const{c});
          },
          [&](const tr::Prim& n) {
            std::vector<Trace> args;
            for (const auto& a : n.args) args.push_back(mutate_trace(a, rng));
            return tr::make(tr::Prim{n.op, std::move(args)});
          },
          [&](const tr::Let& n) { return tr::make(tr::Let{n.var, mutate_trace(n.bound, rng), mutate_trace(n.body, rng)}); },
          [&](const tr::Record& n) {
            std::vector<std::pair<std::string, Trace>> fs;
            for (const auto& [k, f] : n.fields) fs.emplace_back(k, mutate_trace(f, rng));
            return tr::make(tr::Record{std::move(fs)});
          },
          [&](const tr::Field& n) { return tr::make(tr::Field{mutate_trace(n.record, rng), n.field}); },
          [&](const tr::If& n) {
            bool taken = chance(rng, 0.2) ? !n.taken : n.taken;
            return tr::make(tr::If{mutate_trace(n.test, rng), n.then_branch, n.else_branch, taken, mutate_trace(n.branch, rng)});
          },
          [&](const tr::Singleton& n) { return tr::make(tr::Singleton{mutate_trace(n.element, rng)}); },
          [&](const tr::Union& n) { return tr::make(tr::Union{mutate_trace(n.left, rng), mutate_trace(n.right, rng)}); },
          [&](const tr::Comp& n) {
            TraceSet es;
            for (const auto& [l, s] : n.elements) es.emplace_hint(es.end(), l, mutate_trace(s, rng));
            return tr::make(tr::Comp{n.body, n.var, mutate_trace(n.source, rng), std::move(es)});
          },
          [&](const tr::Sum& n) { return tr::make(tr::Sum{mutate_trace(n.arg, rng)}); },
          [&](const tr::IsEmpty& n) { return tr::make(tr::IsEmpty{mutate_trace(n.arg, rng)}); },
          [&](const auto&) { return t; },
      },
      t.node().data);
}

// A random trace of type t. Conditionals store freshly generated branches.
inline Trace random_trace(const TypeContext& ctx, const Type& t, int depth, Rng& rng) {
  QueryGen qg(rng);
  auto vars_of = [&](const Type& want) {
    std::vector<std::string> xs;
    for (const auto& [x, xt] : ctx)
      if (xt == want) xs.push_back(x);
    return xs;
  };
  std::vector<std::string> vs = vars_of(t);
  if (!vs.empty() && chance(rng, 0.4)) return tr::make(tr::Var{vs[static_cast<std::size_t>(pick(rng, static_cast<int>(vs.size())))]});
  if (depth > 0 && chance(rng, 0.2)) {
    Expr e1 = qg.gen(ctx, t, 1), e2 = qg.gen(ctx, t, 1);
    return tr::make(tr::If{random_trace(ctx, Type::boolean(), depth - 1, rng), e1, e2, chance(rng, 0.5),
                           random_trace(ctx, t, depth - 1, rng)});
  }
  switch (t.kind()) {
    case Type::Kind::Int:
      if (depth > 0 && chance(rng, 0.3))
        return tr::make(tr::Prim{PrimOp::Add, {random_trace(ctx, t, depth - 1, rng), random_trace(ctx, t, depth - 1, rng)}});
      if (depth > 0 && chance(rng, 0.2)) return tr::make(tr::Sum{random_trace(ctx, Type::set(Type::integer()), depth - 1, rng)});
      return tr::make(tr::Const{int_const(pick(rng, 5))});
    case Type::Kind::Bool:
      if (depth > 0 && chance(rng, 0.4))
        return tr::make(tr::Prim{PrimOp::Lt, {random_trace(ctx, Type::integer(), depth - 1, rng),
                                              random_trace(ctx, Type::integer(), depth - 1, rng)}});
      return tr::make(tr::Const{bool_const(chance(rng, 0.5))});
    case Type::Kind::Record: {
      std::vector<std::pair<std::string, Trace>> fs;
      for (const auto& [k, ft] : t.fields()) fs.emplace_back(k, random_trace(ctx, ft, depth - 1, rng));
      return tr::make(tr::Record{std::move(fs)});
    }
    case Type::Kind::Set: {
      int r = pick(rng, 3);
      if (depth > 0 && r == 0) return tr::make(tr::Singleton{random_trace(ctx, t.element(), depth - 1, rng)});
      if (depth > 0 && r == 1)
        return tr::make(tr::Union{random_trace(ctx, t, depth - 1, rng), random_trace(ctx, t, depth - 1, rng)});
      return tr::make(tr::Empty{std::nullopt});
    }
    case Type::Kind::Unknown: break;
  }
  return tr::make(tr::Empty{std::nullopt});
}

class HoleFiller {
 public:
  explicit HoleFiller(std::uint64_t seed) : rng_(seed) {}

  Trace fill(const TypeContext& ctx, const Trace& s, const Trace& orig) {
    if (s.is_hole()) return replacement(ctx, orig);
    return std::visit([&](const auto& n) { return step(ctx, n, orig); }, s.node().data);
  }

 private:
  Trace replacement(const TypeContext& ctx, const Trace& orig) {
    int r = pick(rng_, 4);
    if (r <= 1) return orig;
    if (r == 2) return mutate_trace(orig, rng_);
    return random_trace(ctx, typecheck_trace(ctx, orig), 2, rng_);
  }

  template <class T>
  static const T& as(const Trace& orig) {
    const T* n = std::get_if<T>(&orig.node().data);
    if (!n) throw Error(ErrorCode::PatternMismatch, "slice is not a prefix of the original trace");
    return *n;
  }

  Trace step(const TypeContext&, const tr::Const&, const Trace& orig) { return orig; }
  Trace step(const TypeContext&, const tr::Var&, const Trace& orig) { return orig; }
  Trace step(const TypeContext&, const tr::Empty&, const Trace& orig) { return orig; }
  Trace step(const TypeContext&, const tr::Hole&, const Trace& orig) { return orig; }

  Trace step(const TypeContext& ctx, const tr::Prim& n, const Trace& orig) {
    const auto& o = as<tr::Prim>(orig);
    std::vector<Trace> args;
    for (std::size_t i = 0; i < n.args.size(); ++i) args.push_back(fill(ctx, n.args[i], o.args[i]));
    return tr::make(tr::Prim{n.op, std::move(args)});
  }
  Trace step(const TypeContext& ctx, const tr::Let& n, const Trace& orig) {
    const auto& o = as<tr::Let>(orig);
    Trace bound = fill(ctx, n.bound, o.bound);
    TypeContext inner = nrc::detail::extend(ctx, n.var, typecheck_trace(ctx, o.bound));
    return tr::make(tr::Let{n.var, bound, fill(inner, n.body, o.body)});
  }
  Trace step(const TypeContext& ctx, const tr::Record& n, const Trace& orig) {
    const auto& o = as<tr::Record>(orig);
    std::vector<std::pair<std::string, Trace>> fs;
    for (std::size_t i = 0; i < n.fields.size(); ++i) fs.emplace_back(n.fields[i].first, fill(ctx, n.fields[i].second, o.fields[i].second));
    return tr::make(tr::Record{std::move(fs)});
  }
  Trace step(const TypeContext& ctx, const tr::Field& n, const Trace& orig) {
    return tr::make(tr::Field{fill(ctx, n.record, as<tr::Field>(orig).record), n.field});
  }
  Trace step(const TypeContext& ctx, const tr::If& n, const Trace& orig) {
    const auto& o = as<tr::If>(orig);
    return tr::make(tr::If{fill(ctx, n.test, o.test), n.then_branch, n.else_branch, n.taken, fill(ctx, n.branch, o.branch)});
  }
  Trace step(const TypeContext& ctx, const tr::Singleton& n, const Trace& orig) {
    return tr::make(tr::Singleton{fill(ctx, n.element, as<tr::Singleton>(orig).element)});
  }
  Trace step(const TypeContext& ctx, const tr::Union& n, const Trace& orig) {
    const auto& o = as<tr::Union>(orig);
    return tr::make(tr::Union{fill(ctx, n.left, o.left), fill(ctx, n.right, o.right)});
  }
  Trace step(const TypeContext& ctx, const tr::Sum& n, const Trace& orig) {
    return tr::make(tr::Sum{fill(ctx, n.arg, as<tr::Sum>(orig).arg)});
  }
  Trace step(const TypeContext& ctx, const tr::IsEmpty& n, const Trace& orig) {
    return tr::make(tr::IsEmpty{fill(ctx, n.arg, as<tr::IsEmpty>(orig).arg)});
  }
  Trace step(const TypeContext& ctx, const tr::Comp& n, const Trace& orig) {
    const auto& o = as<tr::Comp>(orig);
    Trace source = fill(ctx, n.source, o.source);
    Type src_type = typecheck_trace(ctx, o.source);
    Type elem = src_type.kind() == Type::Kind::Set ? src_type.element() : Type::unknown();
    TypeContext inner = nrc::detail::extend(ctx, n.var, elem);
    TraceSet es;
    for (const auto& [l, ot] : o.elements) {
      auto it = n.elements.find(l);
      if (it != n.elements.end())
        es.emplace_hint(es.end(), l, fill(inner, it->second, ot));
      else if (chance(rng_, 0.85))
        es.emplace_hint(es.end(), l, replacement(inner, ot));
    }
    Type body = unify(typecheck_expr(inner, n.body), Type::set(Type::unknown()));
    if (elem.kind() != Type::Kind::Unknown) {
      for (int i = 1; i <= fresh_pool; ++i) {
        Label l = fresh_label(i);
        if (chance(rng_, 0.5) && !overlaps_prefix(es, l)) es.emplace(l, random_trace(inner, body, 2, rng_));
      }
    }
    return tr::make(tr::Comp{n.body, n.var, source, std::move(es)});
  }

  Rng rng_;
};

inline Expr mutate_expr(const Expr& e, Rng& rng) {
  if (const auto* c = std::get_if<ex::Const>(&e.node().data)) {
    if (!chance(rng, 0.5)) return e;
    return ex::constant(c->value.index() == 0 ? int_const(pick(rng, 5)) : bool_const(chance(rng, 0.5)));
  }
  return e;
}

inline bool fully_known(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::Unknown: return false;
    case Type::Kind::Set: return fully_known(t.element());
    case Type::Kind::Record:
      for (const auto& [k, f] : t.fields())
        if (!fully_known(f)) return false;
      return true;
    default: return true;
  }
}

class ExprHoleFiller {
 public:
  explicit ExprHoleFiller(std::uint64_t seed) : rng_(seed) {}

  Expr fill(const TypeContext& ctx, const Expr& s, const Expr& orig) {
    if (s.is_hole()) return replacement(ctx, orig);
    return std::visit([&](const auto& n) { return step(ctx, n, orig); }, s.node().data);
  }

 private:
  Expr replacement(const TypeContext& ctx, const Expr& orig) {
    int r = pick(rng_, 4);
    if (r <= 1) return orig;
    if (r == 2) return mutate_expr(orig, rng_);
    Type t = typecheck_expr(ctx, orig);
    if (!fully_known(t)) return orig;
    return QueryGen(rng_).gen(ctx, t, 2);
  }

  template <class T>
  static const T& as(const Expr& orig) {
    const T* n = std::get_if<T>(&orig.node().data);
    if (!n) throw Error(ErrorCode::PatternMismatch, "slice is not a prefix of the original query");
    return *n;
  }

  Expr step(const TypeContext&, const ex::Const&, const Expr& orig) { return orig; }
  Expr step(const TypeContext&, const ex::Var&, const Expr& orig) { return orig; }
  Expr step(const TypeContext&, const ex::Empty&, const Expr& orig) { return orig; }
  Expr step(const TypeContext&, const ex::Hole&, const Expr& orig) { return orig; }
  Expr step(const TypeContext& ctx, const ex::Prim& n, const Expr& orig) {
    const auto& o = as<ex::Prim>(orig);
    std::vector<Expr> args;
    for (std::size_t i = 0; i < n.args.size(); ++i) args.push_back(fill(ctx, n.args[i], o.args[i]));
    return ex::prim(n.op, std::move(args));
  }
  Expr step(const TypeContext& ctx, const ex::Let& n, const Expr& orig) {
    const auto& o = as<ex::Let>(orig);
    TypeContext inner = nrc::detail::extend(ctx, n.var, typecheck_expr(ctx, o.bound));
    return ex::let(n.var, fill(ctx, n.bound, o.bound), fill(inner, n.body, o.body));
  }
  Expr step(const TypeContext& ctx, const ex::Record& n, const Expr& orig) {
    const auto& o = as<ex::Record>(orig);
    std::vector<std::pair<std::string, Expr>> fs;
    for (std::size_t i = 0; i < n.fields.size(); ++i) fs.emplace_back(n.fields[i].first, fill(ctx, n.fields[i].second, o.fields[i].second));
    return ex::record(std::move(fs));
  }
  Expr step(const TypeContext& ctx, const ex::Field& n, const Expr& orig) {
    return ex::field(fill(ctx, n.record, as<ex::Field>(orig).record), n.field);
  }
  Expr step(const TypeContext& ctx, const ex::If& n, const Expr& orig) {
    const auto& o = as<ex::If>(orig);
    return ex::if_(fill(ctx, n.test, o.test), fill(ctx, n.then_branch, o.then_branch), fill(ctx, n.else_branch, o.else_branch));
  }
  Expr step(const TypeContext& ctx, const ex::Singleton& n, const Expr& orig) {
    return ex::singleton(fill(ctx, n.element, as<ex::Singleton>(orig).element));
  }
  Expr step(const TypeContext& ctx, const ex::Union& n, const Expr& orig) {
    const auto& o = as<ex::Union>(orig);
    return ex::union_(fill(ctx, n.left, o.left), fill(ctx, n.right, o.right));
  }
  Expr step(const TypeContext& ctx, const ex::Sum& n, const Expr& orig) { return ex::sum(fill(ctx, n.arg, as<ex::Sum>(orig).arg)); }
  Expr step(const TypeContext& ctx, const ex::IsEmpty& n, const Expr& orig) {
    return ex::is_empty(fill(ctx, n.arg, as<ex::IsEmpty>(orig).arg));
  }
  Expr step(const TypeContext& ctx, const ex::Comp& n, const Expr& orig) {
    const auto& o = as<ex::Comp>(orig);
    Type src = typecheck_expr(ctx, o.source);
    Type elem = src.kind() == Type::Kind::Set ? src.element() : Type::unknown();
    return ex::comp(fill(nrc::detail::extend(ctx, n.var, elem), n.body, o.body), n.var, fill(ctx, n.source, o.source));
  }

  Rng rng_;
};

}  // namespace detail

// A hole-free trace T' with is_subtrace(slice, T'). Holes are filled with
// the original subtrace, a mutated copy of it, or a random trace of the same
// type; comprehensions may lose unlisted elements and gain fresh ones.
inline Trace fill_holes(const TypeContext& ctx, const Trace& slice, const Trace& original, std::uint64_t seed) {
  return detail::HoleFiller(seed).fill(ctx, slice, original);
}

// A hole-free query e' with expr_leq(slice, e').
inline Expr fill_expr_holes(const TypeContext& ctx, const Expr& slice, const Expr& original, std::uint64_t seed) {
  return detail::ExprHoleFiller(seed).fill(ctx, slice, original);
}

}  // namespace nrc::harness
