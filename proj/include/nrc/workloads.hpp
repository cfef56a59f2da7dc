#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "nrc/eval.hpp"
#include "nrc/parse.hpp"
#include "nrc/slice.hpp"

// Tables and queries of the running example and of the four larger examples,
// plus the Pythagorean-triple workload used for benchmarking.
namespace nrc::workloads {

inline Value row(std::int64_t a, std::int64_t b, std::int64_t c) {
  return Value::record({{"A", Value::integer(a)}, {"B", Value::integer(b)}, {"C", Value::integer(c)}});
}

inline Label lab(std::initializer_list<const char*> atoms) {
  std::vector<Atom> as;
  for (const char* a : atoms) as.push_back(parse_atom(a));
  return Label(std::move(as));
}

inline Value table_r() {
  return Value::collection({{lab({"r1"}), row(1, 2, 7)}, {lab({"r2"}), row(2, 3, 8)}, {lab({"r3"}), row(4, 3, 9)}});
}

inline Value table_s() {
  Elements es;
  auto bc = [](std::int64_t b, std::int64_t c) {
    return Value::record({{"B", Value::integer(b)}, {"C", Value::integer(c)}});
  };
  es.emplace(lab({"s1"}), bc(2, 4));
  es.emplace(lab({"s2"}), bc(3, 4));
  es.emplace(lab({"s3"}), bc(4, 5));
  return Value::collection(std::move(es));
}

inline Environment running_env() { return {{"R", table_r()}}; }
inline Environment join_env() { return {{"R", table_r()}, {"S", table_s()}}; }

inline const char* running_query = "for x in R return if x.B = 3 then {<A: x.A, B: x.C>} else {}";

// Rows with A <= B are kept on the left of the union, the others are
// swapped on the right.
inline const char* swap_query =
    "union {for x in R where x.A <= x.B return {x},\n"
    "       for x in R where x.A > x.B return {<A: x.B, B: x.A, C: x.C>}}";

inline const char* union_query = "union {for x in R return {<B: x.B>}, {<B: 3>}}";

inline const char* join_query = "for x in R, y in S where x.B = y.B return {<A: x.A, B: y.C>}";

inline const char* pythagoras_query =
    "for x in T, y in T, z in U where x < y, x * x + y * y = z * z return {x * y}";

// T = {t1.1, ..., tn.n} and U = {u1.1, ..., un.n}.
inline Environment pythagoras_env(int n) {
  Elements t, u;
  for (int i = 1; i <= n; ++i) {
    t.emplace(Label::of(sym("t" + std::to_string(i))), Value::integer(i));
    u.emplace(Label::of(sym("u" + std::to_string(i))), Value::integer(i));
  }
  return {{"T", Value::collection(std::move(t))}, {"U", Value::collection(std::move(u))}};
}

// Number of triples (x, y, z) with x < y <= n, z <= n and x² + y² = z².
inline std::size_t pythagoras_oracle(int n) {
  std::size_t count = 0;
  for (int x = 1; x <= n; ++x)
    for (int y = x + 1; y <= n; ++y)
      for (int z = 1; z <= n; ++z)
        if (x * x + y * y == z * z) ++count;
  return count;
}

struct BenchResult {
  int n = 0;
  std::size_t iterations = 0;
  std::size_t results = 0;
  std::size_t trace_nodes = 0;
  std::size_t simple_slice_nodes = 0;
  std::size_t enriched_slice_nodes = 0;
  double eval_ms = 0;
  double simple_slice_ms = 0;
  double enriched_slice_ms = 0;
  Label target;
};

inline double millis_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

// Slices the trace for the result at target twice: with the complete set
// pattern that lists every result, and with the enriched pattern that
// mentions only the target. Timings are the best of `repeats` runs.
inline BenchResult bench_pythagoras(int n, const Label& target, int repeats = 3) {
  BenchResult r;
  r.n = n;
  r.target = target;
  r.iterations = static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  Environment env = pythagoras_env(n);
  Expr q = parse_query(pythagoras_query);

  auto start = std::chrono::steady_clock::now();
  Evaluation ev = eval(env, q);
  r.eval_ms = millis_since(start);
  r.results = ev.value.elements().size();
  r.trace_nodes = trace_size(ev.trace);

  auto it = ev.value.elements().find(target);
  if (it == ev.value.elements().end()) throw Error(ErrorCode::PatternMismatch, "no result at " + to_string(target));

  ElementPatterns listed;
  for (const auto& [l, v] : ev.value.elements()) listed.emplace(l, l == target ? Pattern::of(v) : Pattern::hole());
  Pattern simple = Pattern::set(std::move(listed), Tail::Closed);
  Pattern enriched = Pattern::set({{target, Pattern::of(it->second)}}, Tail::Hole);

  r.simple_slice_ms = r.enriched_slice_ms = 1e300;
  for (int i = 0; i < repeats; ++i) {
    start = std::chrono::steady_clock::now();
    TraceSlice s = backward_slice(simple, ev.trace);
    r.simple_slice_ms = std::min(r.simple_slice_ms, millis_since(start));
    r.simple_slice_nodes = trace_size(s.trace);

    start = std::chrono::steady_clock::now();
    TraceSlice e = backward_slice(enriched, ev.trace);
    r.enriched_slice_ms = std::min(r.enriched_slice_ms, millis_since(start));
    r.enriched_slice_nodes = trace_size(e.trace);
  }
  return r;
}

}  // namespace nrc::workloads
