#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nrc/harness.hpp"
#include "nrc/print.hpp"
#include "nrc/replay.hpp"
#include "nrc/slice.hpp"

// Randomized checks over generated tables and well-typed queries. Each
// property counts the cases it looked at, how many of those actually
// exercised the implication (e.g. a perturbed replay that succeeded), and
// the violations, keeping the first as a readable counterexample.
namespace nrc::checks {

struct PropertyReport {
  std::string name;
  std::size_t cases = 0;
  std::size_t exercised = 0;
  std::size_t violations = 0;
  std::string counterexample = {};

  void fail(const std::string& why) {
    if (violations++ == 0) counterexample = why;
  }
};

struct Case {
  std::uint64_t seed = 0;
  harness::Tables tables;
  Expr query;
  Evaluation ev;
};

inline std::string describe(const Case& c) {
  std::string out = "seed " + std::to_string(c.seed) + "\nquery: " + render_expr(c.query) + "\n";
  for (const auto& [x, v] : c.tables.env) out += x + " = " + render_value(v) + "\n";
  return out;
}

// A generated case, or nullopt when evaluation fails. Queries that do not
// typecheck are generator bugs and are reported through `bad`.
inline std::optional<Case> make_case(std::uint64_t seed, std::string* bad = nullptr) {
  harness::Rng rng(seed);
  harness::Tables tables = harness::random_tables(rng);
  harness::QueryGen gen(rng);
  int depth = 1 + harness::pick(rng, 5);
  Expr query = gen.any(tables.types, depth);
  try {
    typecheck_expr(tables.types, query);
  } catch (const Error& e) {
    if (bad) *bad = "ill-typed query from generator: " + render_expr(query) + " (" + e.detail() + ")";
    return std::nullopt;
  }
  try {
    Evaluation ev = eval(tables.env, query);
    return Case{seed, std::move(tables), std::move(query), std::move(ev)};
  } catch (const Error&) {
    return std::nullopt;
  }
}

inline bool all_prefix_labeled(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Constant: return true;
    case Value::Kind::Record:
      for (const auto& [k, f] : v.fields())
        if (!all_prefix_labeled(f)) return false;
      return true;
    case Value::Kind::Collection: {
      std::vector<Label> ls;
      for (const auto& [l, e] : v.elements()) {
        if (!all_prefix_labeled(e)) return false;
        ls.push_back(l);
      }
      return is_prefix_code(ls);
    }
  }
  return false;
}

inline bool env_below_input(const PatternEnv& rho, const Environment& env) {
  for (const auto& [x, p] : rho) {
    auto it = env.find(x);
    if (it == env.end() || !matches(p, it->second)) return false;
  }
  return true;
}

template <class T, class F>
std::optional<T> try_run(F&& f, std::string* error = nullptr) {
  try {
    return f();
  } catch (const Error& e) {
    if (error) *error = std::string(to_string(e.code())) + ": " + e.detail();
    return std::nullopt;
  }
}

struct SuiteOptions {
  std::size_t cases = 500;
  std::uint64_t seed = 1;
  int perturbations = 5;
};

class Suite {
 public:
  explicit Suite(SuiteOptions opts) : opts_(opts) {
    for (const char* n : {"determinacy", "consistency", "fidelity", "prefix codes", "slicing correctness",
                          "query slicing correctness", "monotonicity"})
      reports_.push_back({n});
  }

  std::vector<PropertyReport> run() {
    std::uint64_t seed = opts_.seed;
    std::size_t done = 0;
    std::size_t attempts = 0;
    while (done < opts_.cases && attempts < opts_.cases * 20) {
      ++attempts;
      std::string bad;
      auto c = make_case(seed++, &bad);
      if (!bad.empty()) generator_.fail(bad);
      if (!c) continue;
      ++done;
      check_case(*c);
    }
    std::vector<PropertyReport> out = reports_;
    if (generator_.violations) out.push_back(generator_);
    return out;
  }

 private:
  PropertyReport& report(std::size_t i) { return reports_[i]; }

  void check_case(const Case& c) {
    determinacy(c);
    consistency(c);
    fidelity(c);
    prefix_codes(c);
    harness::Rng rng(c.seed * 7919 + 1);
    slicing(c, rng);
    query_slicing(c, rng);
    monotonicity(c, rng);
  }

  void determinacy(const Case& c) {
    auto& r = report(0);
    ++r.cases;
    Evaluation again = eval(c.tables.env, c.query);
    ++r.exercised;
    if (!(again.value == c.ev.value && again.trace == c.ev.trace)) r.fail(describe(c));
  }

  void consistency(const Case& c) {
    auto& r = report(1);
    ++r.cases;
    auto v = try_run<Value>([&] { return replay(c.tables.env, c.ev.trace); });
    ++r.exercised;
    if (!v || !(*v == c.ev.value)) r.fail(describe(c));
  }

  // Replaying on a changed input reproduces evaluation exactly when the
  // trace comes out the same.
  void fidelity(const Case& c) {
    auto& r = report(2);
    ++r.cases;
    harness::Rng rng(c.seed ^ 0x5bd1e995);
    for (int k = 0; k < opts_.perturbations; ++k) {
      PatternEnv rho;
      for (const auto& [x, v] : c.tables.env)
        if (harness::chance(rng, 0.7)) rho.emplace(x, harness::random_pattern_below(v, rng));
      Environment changed = harness::vary_env(rho, c.tables.env, rng());
      auto fresh = try_run<Evaluation>([&] { return eval(changed, c.query); });
      auto exact = try_run<Value>([&] { return replay(changed, c.ev.trace, ReplayOptions{true}); });
      auto lenient = try_run<Value>([&] { return replay(changed, c.ev.trace); });
      bool same_trace = fresh && fresh->trace == c.ev.trace;
      if (same_trace || exact) ++r.exercised;
      std::string where = describe(c) + "changed input:\n";
      for (const auto& [x, v] : changed) where += x + " = " + render_value(v) + "\n";
      if (same_trace && !(exact && *exact == fresh->value)) r.fail(where + "evaluation kept the trace but replay disagrees");
      if (exact && !(same_trace && fresh->value == *exact)) r.fail(where + "replay succeeded but evaluation took another path");
      if (exact && !(lenient && *lenient == *exact)) r.fail(where + "lenient replay disagrees with exact replay");
    }
  }

  void prefix_codes(const Case& c) {
    auto& r = report(3);
    ++r.cases;
    ++r.exercised;
    if (!all_prefix_labeled(c.ev.value)) r.fail(describe(c) + "value: " + render_value(c.ev.value));
  }

  void slicing(const Case& c, harness::Rng& rng) {
    auto& r = report(4);
    ++r.cases;
    Pattern p = harness::random_pattern_below(c.ev.value, rng);
    std::string where = describe(c) + "pattern: " + render_pattern(p) + "\n";
    std::string error;
    auto sliced = try_run<TraceSlice>([&] { return backward_slice(p, c.ev.trace); }, &error);
    if (!sliced) return r.fail(where + "slicing failed: " + error);
    const TraceSlice& s = *sliced;
    if (!env_below_input(s.env, c.tables.env)) return r.fail(where + "sliced input does not match the input");
    if (!is_subtrace(s.trace, c.ev.trace)) r.fail(where + "slice is not a subtrace");
    for (int k = 0; k < opts_.perturbations; ++k) {
      std::uint64_t seed = rng();
      Environment changed = harness::vary_env(s.env, c.tables.env, seed);
      Trace filled = harness::fill_holes(c.tables.types, s.trace, c.ev.trace, seed);
      if (!is_subtrace(s.trace, filled)) r.fail(where + "filled trace is not above the slice");
      auto v = try_run<Value>([&] { return replay(changed, filled); });
      if (!v) continue;
      ++r.exercised;
      if (!equiv_at(p, *v, c.ev.value))
        r.fail(where + "slice: " + render_trace(s.trace) + "\nfilled: " + render_trace(filled) + "\nreplayed: " + render_value(*v));
    }
  }

  void query_slicing(const Case& c, harness::Rng& rng) {
    auto& r = report(5);
    ++r.cases;
    Pattern p = harness::random_pattern_below(c.ev.value, rng);
    std::string where = describe(c) + "pattern: " + render_pattern(p) + "\n";
    std::string error;
    auto sliced = try_run<QuerySlice>([&] { return query_slice(p, c.ev.trace); }, &error);
    if (!sliced) return r.fail(where + "query slicing failed: " + error);
    const QuerySlice& s = *sliced;
    if (!env_below_input(s.env, c.tables.env)) return r.fail(where + "sliced input does not match the input");
    if (!expr_leq(s.query, c.query)) r.fail(where + "query slice is not below the query");
    for (int k = 0; k < opts_.perturbations; ++k) {
      std::uint64_t seed = rng();
      Environment changed = harness::vary_env(s.env, c.tables.env, seed);
      Expr filled = harness::fill_expr_holes(c.tables.types, s.query, c.query, seed);
      if (!expr_leq(s.query, filled)) r.fail(where + "filled query is not above the slice");
      std::string ill;
      if (!try_run<Type>([&] { return typecheck_expr(c.tables.types, filled); }, &ill))
        r.fail(where + "filled query is ill-typed: " + render_expr(filled) + " (" + ill + ")");
      auto v = try_run<Value>([&] { return eval_value(changed, filled); });
      if (!v) continue;
      ++r.exercised;
      if (!equiv_at(p, *v, c.ev.value))
        r.fail(where + "slice: " + render_expr(s.query) + "\nfilled: " + render_expr(filled) + "\nresult: " + render_value(*v));
    }
  }

  void monotonicity(const Case& c, harness::Rng& rng) {
    auto& r = report(6);
    ++r.cases;
    Pattern big = harness::random_pattern_below(c.ev.value, rng);
    Pattern small = harness::random_weakening(big, rng);
    std::string where = describe(c) + "patterns: " + render_pattern(small) + " below " + render_pattern(big) + "\n";
    if (!leq(small, big)) {
      r.fail(where + "weakening is not below");
      return;
    }
    try {
      TraceSlice outer = backward_slice(big, c.ev.trace);
      TraceSlice inner = backward_slice(small, c.ev.trace);
      TraceSlice again = backward_slice(small, outer.trace);
      QuerySlice qouter = query_slice(big, c.ev.trace);
      QuerySlice qinner = query_slice(small, c.ev.trace);
      ++r.exercised;
      if (!leq_env(inner.env, outer.env)) r.fail(where + "input slices are not ordered");
      if (!is_subtrace(inner.trace, outer.trace)) r.fail(where + "trace slices are not ordered");
      if (!(again.env == inner.env && again.trace == inner.trace)) r.fail(where + "re-slicing the larger slice differs");
      if (!leq_env(qinner.env, qouter.env) || !expr_leq(qinner.query, qouter.query))
        r.fail(where + "query slices are not ordered");
    } catch (const Error& e) {
      r.fail(where + "slicing failed: " + std::string(to_string(e.code())) + " " + e.detail());
    }
  }

  SuiteOptions opts_;
  std::vector<PropertyReport> reports_;
  PropertyReport generator_{"generator"};
};

inline std::vector<PropertyReport> run_properties(SuiteOptions opts = {}) { return Suite(opts).run(); }

}  // namespace nrc::checks
