#pragma once

#include "nrc/eval.hpp"

namespace nrc {

struct ReplayOptions {
  // Also fail when the trace records comprehension elements that the new
  // input no longer has. By default such extra entries are ignored.
  bool exact_labels = false;
};

namespace detail {

class Replayer {
 public:
  Replayer(const Environment& env, ReplayOptions opts) : env_(env), opts_(opts) {}

  Value run(const Trace& t, const Scope* s) {
    return std::visit([&](const auto& n) { return step(n, s); }, t.node().data);
  }

  Value comp(const std::string& var, const Value& source, const TraceSet& traces, const Scope* s) {
    Elements out;
    const Elements& elems = elements_of(source, "comprehension");
    for (const auto& [l, elem] : elems) {
      auto it = traces.find(l);
      path_.emplace_back(&var, &l);
      if (it == traces.end()) fail(ErrorCode::MissingTraceLabel, "no recorded trace for element " + to_string(l));
      Scope frame{&var, &elem, s};
      Value r = run(it->second, &frame);
      for (const auto& [l2, v2] : elements_of(r, "comprehension body")) append_element(out, l + l2, v2);
      path_.pop_back();
    }
    if (opts_.exact_labels && traces.size() != elems.size()) {
      for (const auto& [l, t] : traces)
        if (!elems.count(l)) fail(ErrorCode::ControlFlowMismatch, "recorded element " + to_string(l) + " is gone");
    }
    return Value::collection(std::move(out));
  }

 private:
  [[noreturn]] void fail(ErrorCode code, const std::string& msg) const {
    std::vector<std::string> path;
    for (const auto& [var, label] : path_)
      path.push_back(var ? *var + to_string(*label) : std::string("if"));
    throw Error(code, msg, std::move(path));
  }

  Value step(const tr::Const& c, const Scope*) { return Value::constant(c.value); }

  Value step(const tr::Prim& p, const Scope* s) {
    std::vector<Constant> args;
    args.reserve(p.args.size());
    for (const auto& a : p.args) args.push_back(constant_of(run(a, s), symbol(p.op)));
    return Value::constant(apply_prim(p.op, args));
  }

  Value step(const tr::Var& x, const Scope* s) { return lookup(env_, s, x.name); }

  Value step(const tr::Let& l, const Scope* s) {
    Value v1 = run(l.bound, s);
    Scope frame{&l.var, &v1, s};
    return run(l.body, &frame);
  }

  Value step(const tr::Record& r, const Scope* s) {
    Fields fs;
    for (const auto& [k, f] : r.fields)
      if (!fs.emplace(k, run(f, s)).second) throw Error(ErrorCode::TypeStuck, "duplicate field " + k);
    return Value::record(std::move(fs));
  }

  Value step(const tr::Field& f, const Scope* s) { return field_of(run(f.record, s), f.field); }

  Value step(const tr::If& i, const Scope* s) {
    path_.emplace_back(nullptr, nullptr);
    bool b = test_value(run(i.test, s));
    if (b != i.taken)
      fail(ErrorCode::ControlFlowMismatch,
           std::string("test now evaluates to ") + (b ? "true" : "false") + ", trace took the " +
               (i.taken ? "then" : "else") + " branch");
    Value v = run(i.branch, s);
    path_.pop_back();
    return v;
  }

  Value step(const tr::Empty&, const Scope*) { return Value::empty(); }
  Value step(const tr::Singleton& e, const Scope* s) { return singleton_value(run(e.element, s)); }
  Value step(const tr::Union& u, const Scope* s) {
    Value a = run(u.left, s);
    return union_values(a, run(u.right, s));
  }
  Value step(const tr::Comp& c, const Scope* s) { return comp(c.var, run(c.source, s), c.elements, s); }
  Value step(const tr::Sum& e, const Scope* s) { return Value::integer(sum_of(run(e.arg, s))); }
  Value step(const tr::IsEmpty& e, const Scope* s) {
    return Value::boolean(elements_of(run(e.arg, s), "empty").empty());
  }
  Value step(const tr::Hole&, const Scope*) { fail(ErrorCode::HoleEncountered, "trace contains a hole"); }

  const Environment& env_;
  ReplayOptions opts_;
  std::vector<std::pair<const std::string*, const Label*>> path_;
};

}  // namespace detail

// Recomputes the value of the traced computation on a new input, following
// the recorded control flow.
inline Value replay(const Environment& env, const Trace& t, ReplayOptions opts = {}) {
  return detail::Replayer(env, opts).run(t, nullptr);
}

inline Value replay_comp(const Environment& env, const std::string& var, const Value& coll, const TraceSet& traces,
                         ReplayOptions opts = {}) {
  return detail::Replayer(env, opts).comp(var, coll, traces, nullptr);
}

}  // namespace nrc
