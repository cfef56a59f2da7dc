#pragma once

#include <optional>

#include "nrc/json_io.hpp"
#include "nrc/print.hpp"
#include "nrc/slice.hpp"

namespace nrc {

struct SliceStats {
  std::size_t before = 0;
  std::size_t after = 0;
};

struct SliceReport {
  Pattern pattern;
  PatternEnv sliced_env;
  std::optional<Trace> sliced_trace;
  std::optional<Expr> sliced_query;
  SliceStats stats;
};

inline SliceReport trace_report(const Pattern& p, const Trace& t) {
  TraceSlice s = backward_slice(p, t);
  return {p, s.env, s.trace, std::nullopt, {trace_size(t), trace_size(s.trace)}};
}

inline SliceReport query_report(const Pattern& p, const Trace& t, const Expr& original) {
  QuerySlice s = query_slice(p, t);
  return {p, s.env, std::nullopt, s.query, {expr_size(original), expr_size(s.query)}};
}

inline Json report_to_json(const SliceReport& r) {
  Json out = Json::object();
  out["pattern"] = render_pattern(r.pattern);
  out["env"] = env_to_json(r.sliced_env);
  if (r.sliced_trace) out["trace"] = trace_to_json(*r.sliced_trace);
  if (r.sliced_query) out["query"] = render_expr(*r.sliced_query);
  out["stats"] = {{"before", r.stats.before}, {"after", r.stats.after}};
  return out;
}

inline std::string render_report(const SliceReport& r, bool with_stats) {
  std::string out = render_env(r.sliced_env);
  if (r.sliced_trace) out += render_trace(*r.sliced_trace) + "\n";
  if (r.sliced_query) out += render_expr(*r.sliced_query) + "\n";
  if (with_stats) out += "nodes: " + std::to_string(r.stats.before) + " -> " + std::to_string(r.stats.after) + "\n";
  return out;
}

}  // namespace nrc
