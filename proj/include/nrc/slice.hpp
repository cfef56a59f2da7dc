#pragma once

#include "nrc/expr_order.hpp"
#include "nrc/pattern.hpp"
#include "nrc/trace.hpp"

namespace nrc {

namespace detail {

[[noreturn]] inline void mismatch(const std::string& why) { throw Error(ErrorCode::PatternMismatch, why); }

inline void require_value_pattern(const Pattern& p, const char* what) {
  if (p.kind() != Pattern::Kind::Diamond && p.kind() != Pattern::Kind::Constant)
    mismatch(std::string(what) + " yields a constant, pattern asks for a structure");
}

// Backward slicing walk shared by trace slicing and query slicing. The
// output policy decides what each visited trace node becomes: a sliced
// trace node or a partial query expression.
template <class Out>
class Slicer {
 public:
  using Result = typename Out::Result;
  using SetResult = typename Out::SetResult;

  struct Sliced {
    PatternEnv env;
    Result out;
  };
  struct SetSliced {
    PatternEnv env;
    SetResult out;
    Pattern source;
  };

  Sliced run(const Pattern& p, const Trace& t) {
    if (p.is_hole()) return {{}, Out::hole()};
    return std::visit([&](const auto& n) { return step(p, t, n); }, t.node().data);
  }

  SetSliced set(const Pattern& p, const std::string& x, const TraceSet& theta) {
    if (!p.is_set_shaped()) mismatch("comprehension yields a collection, pattern is not a set pattern");
    if (p.is_hole()) return {{}, Out::empty_set(), Pattern::hole()};
    bool open = p.kind() == Pattern::Kind::Set && p.tail() == Tail::Hole;
    if (p.kind() == Pattern::Kind::Set) {
      for (const auto& [k, q] : p.elements()) {
        auto it = theta.upper_bound(k);
        if (it == theta.begin() || !std::prev(it)->first.is_prefix_of(k))
          throw Error(ErrorCode::MissingTraceLabel, "pattern element " + to_string(k) + " has no recorded trace");
      }
    }
    PatternEnv env;
    SetResult out = Out::empty_set();
    ElementPatterns source;
    for (const auto& [l, sub] : theta) {
      Pattern pl = p;
      if (p.kind() == Pattern::Kind::Set) {
        auto it = p.elements().lower_bound(l);
        bool listed = it != p.elements().end() && l.is_prefix_of(it->first);
        if (!listed && p.tail() == Tail::Hole) continue;
        pl = label_project(p, l);
      }
      Sliced r = run(pl, sub);
      source.emplace_hint(source.end(), l, take(r.env, x));
      lub_into(env, r.env);
      Out::add_element(out, l, std::move(r.out));
    }
    return {std::move(env), std::move(out), Pattern::set(std::move(source), open ? Tail::Hole : Tail::Closed)};
  }

 private:
  Sliced step(const Pattern&, const Trace&, const tr::Hole&) {
    throw Error(ErrorCode::HoleEncountered, "trace hole under a non-hole pattern");
  }

  Sliced step(const Pattern& p, const Trace& t, const tr::Const& n) {
    if (p.kind() == Pattern::Kind::Constant ? !(p.as_constant() == n.value) : !p.is_diamond())
      mismatch("constant " + to_string(n.value) + " does not match the pattern");
    return {{}, Out::constant(t, n)};
  }

  Sliced step(const Pattern& p, const Trace&, const tr::Prim& n) {
    require_value_pattern(p, "operator");
    PatternEnv env;
    std::vector<Result> args;
    for (const auto& a : n.args) {
      Sliced r = run(Pattern::diamond(), a);
      lub_into(env, r.env);
      args.push_back(std::move(r.out));
    }
    return {std::move(env), Out::prim(n, std::move(args))};
  }

  Sliced step(const Pattern& p, const Trace& t, const tr::Var& n) {
    PatternEnv env;
    env.emplace(n.name, p);
    return {std::move(env), Out::var(t, n)};
  }

  Sliced step(const Pattern& p, const Trace&, const tr::Let& n) {
    Sliced body = run(p, n.body);
    Pattern px = take(body.env, n.var);
    Sliced bound = run(px, n.bound);
    lub_into(bound.env, body.env);
    return {std::move(bound.env), Out::let(n, std::move(bound.out), std::move(body.out))};
  }

  Sliced step(const Pattern& p, const Trace&, const tr::Record& n) {
    if (p.kind() == Pattern::Kind::Record) {
      for (const auto& [k, q] : p.fields()) {
        bool present = std::any_of(n.fields.begin(), n.fields.end(), [&](const auto& f) { return f.first == k; });
        if (!present) mismatch("record has no field " + k);
      }
      if (p.tail() == Tail::Closed && p.fields().size() != n.fields.size())
        mismatch("closed record pattern lists fewer fields than the record has");
    } else if (!p.is_diamond()) {
      mismatch("record does not match the pattern");
    }
    PatternEnv env;
    std::vector<std::pair<std::string, Result>> fields;
    for (const auto& [k, sub] : n.fields) {
      Sliced r = run(field_project(p, k), sub);
      lub_into(env, r.env);
      fields.emplace_back(k, std::move(r.out));
    }
    return {std::move(env), Out::record(std::move(fields))};
  }

  Sliced step(const Pattern& p, const Trace&, const tr::Field& n) {
    FieldPatterns fs;
    fs.emplace(n.field, p);
    Sliced r = run(Pattern::record(std::move(fs), Tail::Hole), n.record);
    return {std::move(r.env), Out::field(n, std::move(r.out))};
  }

  Sliced step(const Pattern& p, const Trace&, const tr::If& n) {
    Sliced test = run(Pattern::constant(bool_const(n.taken)), n.test);
    Sliced branch = run(p, n.branch);
    lub_into(test.env, branch.env);
    return {std::move(test.env), Out::if_(n, std::move(test.out), std::move(branch.out))};
  }

  Sliced step(const Pattern& p, const Trace& t, const tr::Empty& n) {
    bool ok = p.is_diamond() || (p.kind() == Pattern::Kind::Set && p.elements().empty());
    if (!ok) mismatch("empty collection does not match the pattern");
    return {{}, Out::empty(t, n)};
  }

  Sliced step(const Pattern& p, const Trace&, const tr::Singleton& n) {
    if (!p.is_set_shaped()) mismatch("singleton does not match a non-set pattern");
    if (p.kind() == Pattern::Kind::Set) {
      const auto& es = p.elements();
      if (es.size() != 1 || !es.begin()->first.empty()) mismatch("singleton has only the empty label");
    }
    Sliced r = run(singleton_extract(p), n.element);
    return {std::move(r.env), Out::singleton(std::move(r.out))};
  }

  Sliced step(const Pattern& p, const Trace&, const tr::Union& n) {
    if (!p.is_set_shaped()) mismatch("union does not match a non-set pattern");
    if (p.kind() == Pattern::Kind::Set) {
      for (const auto& [k, q] : p.elements())
        if (k.empty() || !(k[0] == nat(1) || k[0] == nat(2)))
          mismatch("union result has no element " + to_string(k));
    }
    static const Label one = Label::of(nat(1));
    static const Label two = Label::of(nat(2));
    Sliced left = run(label_project(p, one), n.left);
    Sliced right = run(label_project(p, two), n.right);
    lub_into(left.env, right.env);
    return {std::move(left.env), Out::union_(std::move(left.out), std::move(right.out))};
  }

  Sliced step(const Pattern& p, const Trace&, const tr::Comp& n) {
    SetSliced s = set(p, n.var, n.elements);
    Sliced src = run(s.source, n.source);
    lub_into(s.env, src.env);
    return {std::move(s.env), Out::comp(n, std::move(src.out), std::move(s.out))};
  }

  Sliced step(const Pattern& p, const Trace&, const tr::Sum& n) {
    require_value_pattern(p, "sum");
    Sliced r = run(Pattern::diamond(), n.arg);
    return {std::move(r.env), Out::sum(std::move(r.out))};
  }

  Sliced step(const Pattern& p, const Trace&, const tr::IsEmpty& n) {
    require_value_pattern(p, "emptiness test");
    Sliced r = run(Pattern::diamond(), n.arg);
    return {std::move(r.env), Out::is_empty(std::move(r.out))};
  }
};

struct TraceOut {
  using Result = Trace;
  using SetResult = TraceSet;
  static Trace hole() { return tr::hole(); }
  static TraceSet empty_set() { return {}; }
  static void add_element(TraceSet& s, const Label& l, Trace t) { s.emplace_hint(s.end(), l, std::move(t)); }
  static Trace constant(const Trace& t, const tr::Const&) { return t; }
  static Trace var(const Trace& t, const tr::Var&) { return t; }
  static Trace empty(const Trace& t, const tr::Empty&) { return t; }
  static Trace prim(const tr::Prim& n, std::vector<Trace> args) { return tr::make(tr::Prim{n.op, std::move(args)}); }
  static Trace let(const tr::Let& n, Trace a, Trace b) { return tr::make(tr::Let{n.var, std::move(a), std::move(b)}); }
  static Trace record(std::vector<std::pair<std::string, Trace>> fs) { return tr::make(tr::Record{std::move(fs)}); }
  static Trace field(const tr::Field& n, Trace r) { return tr::make(tr::Field{std::move(r), n.field}); }
  static Trace if_(const tr::If& n, Trace test, Trace branch) {
    return tr::make(tr::If{std::move(test), n.then_branch, n.else_branch, n.taken, std::move(branch)});
  }
  static Trace singleton(Trace t) { return tr::make(tr::Singleton{std::move(t)}); }
  static Trace union_(Trace a, Trace b) { return tr::make(tr::Union{std::move(a), std::move(b)}); }
  static Trace comp(const tr::Comp& n, Trace source, TraceSet elems) {
    return tr::make(tr::Comp{n.body, n.var, std::move(source), std::move(elems)});
  }
  static Trace sum(Trace t) { return tr::make(tr::Sum{std::move(t)}); }
  static Trace is_empty(Trace t) { return tr::make(tr::IsEmpty{std::move(t)}); }
};

struct QueryOut {
  using Result = Expr;
  using SetResult = Expr;
  static Expr hole() { return ex::hole(); }
  static Expr empty_set() { return ex::hole(); }
  static void add_element(Expr& body, const Label&, Expr e) { body = lub_expr(body, e); }
  static Expr constant(const Trace&, const tr::Const& n) { return ex::constant(n.value); }
  static Expr var(const Trace&, const tr::Var& n) { return ex::var(n.name); }
  static Expr empty(const Trace&, const tr::Empty& n) { return ex::empty(n.element); }
  static Expr prim(const tr::Prim& n, std::vector<Expr> args) { return ex::prim(n.op, std::move(args)); }
  static Expr let(const tr::Let& n, Expr a, Expr b) { return ex::let(n.var, std::move(a), std::move(b)); }
  static Expr record(std::vector<std::pair<std::string, Expr>> fs) { return ex::record(std::move(fs)); }
  static Expr field(const tr::Field& n, Expr r) { return ex::field(std::move(r), n.field); }
  static Expr if_(const tr::If& n, Expr test, Expr branch) {
    return n.taken ? ex::if_(std::move(test), std::move(branch), ex::hole())
                   : ex::if_(std::move(test), ex::hole(), std::move(branch));
  }
  static Expr singleton(Expr e) { return ex::singleton(std::move(e)); }
  static Expr union_(Expr a, Expr b) { return ex::union_(std::move(a), std::move(b)); }
  static Expr comp(const tr::Comp& n, Expr source, Expr body) { return ex::comp(std::move(body), n.var, std::move(source)); }
  static Expr sum(Expr e) { return ex::sum(std::move(e)); }
  static Expr is_empty(Expr e) { return ex::is_empty(std::move(e)); }
};

// Projection helpers signal misuse with ShapeError; inside slicing that
// always means the pattern does not fit the traced value.
template <class F>
auto as_mismatch(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ShapeError) throw Error(ErrorCode::PatternMismatch, e.detail());
    throw;
  }
}

}  // namespace detail

struct TraceSlice {
  PatternEnv env;
  Trace trace;
};

struct TraceSetSlice {
  PatternEnv env;
  TraceSet traces;
  Pattern source;
};

struct QuerySlice {
  PatternEnv env;
  Expr query;
};

struct QuerySetSlice {
  PatternEnv env;
  Expr body;
  Pattern source;
};

template <class T>
struct Diff {
  T inner;
  T outer;
};

struct DiffSlice {
  Diff<PatternEnv> env;
  Diff<Trace> trace;
};

struct DiffQuerySlice {
  Diff<PatternEnv> env;
  Diff<Expr> query;
};

// The part of the input and of the trace needed to reproduce the part of
// the output described by p.
inline TraceSlice backward_slice(const Pattern& p, const Trace& t) {
  return detail::as_mismatch([&] {
    auto r = detail::Slicer<detail::TraceOut>().run(p, t);
    return TraceSlice{std::move(r.env), std::move(r.out)};
  });
}

inline TraceSetSlice slice_trace_set(const Pattern& p, const std::string& x, const TraceSet& theta) {
  return detail::as_mismatch([&] {
    auto r = detail::Slicer<detail::TraceOut>().set(p, x, theta);
    return TraceSetSlice{std::move(r.env), std::move(r.out), std::move(r.source)};
  });
}

// Like backward_slice, but produces the part of the query needed.
inline QuerySlice query_slice(const Pattern& p, const Trace& t) {
  return detail::as_mismatch([&] {
    auto r = detail::Slicer<detail::QueryOut>().run(p, t);
    return QuerySlice{std::move(r.env), std::move(r.out)};
  });
}

inline QuerySetSlice query_slice_set(const Pattern& p, const std::string& x, const TraceSet& theta) {
  return detail::as_mismatch([&] {
    auto r = detail::Slicer<detail::QueryOut>().set(p, x, theta);
    return QuerySetSlice{std::move(r.env), std::move(r.out), std::move(r.source)};
  });
}

namespace detail {
inline void require_nested(const Pattern& inner, const Pattern& outer) {
  if (!leq(inner, outer)) throw Error(ErrorCode::PatternMismatch, "inner pattern is not below the outer pattern");
}
}  // namespace detail

// Slices with the outer pattern, then slices that slice with the inner one.
// The part of the outer slice missing from the inner one is what the outer
// pattern needs beyond the inner.
inline DiffSlice diff_slice(const Pattern& inner, const Pattern& outer, const Trace& t) {
  detail::require_nested(inner, outer);
  TraceSlice o = backward_slice(outer, t);
  TraceSlice i = backward_slice(inner, o.trace);
  return {{std::move(i.env), std::move(o.env)}, {std::move(i.trace), std::move(o.trace)}};
}

inline DiffQuerySlice diff_query_slice(const Pattern& inner, const Pattern& outer, const Trace& t) {
  detail::require_nested(inner, outer);
  TraceSlice narrowed = backward_slice(outer, t);
  QuerySlice o = query_slice(outer, narrowed.trace);
  QuerySlice i = query_slice(inner, narrowed.trace);
  return {{std::move(i.env), std::move(o.env)}, {std::move(i.query), std::move(o.query)}};
}

}  // namespace nrc
