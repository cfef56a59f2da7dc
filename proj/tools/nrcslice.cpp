// nrcslice: evaluate, replay and slice NRC queries over JSON tables.
#include <CLI11.hpp>

#include <iostream>

#include "nrc/nrc.hpp"

using namespace nrc;

namespace {

struct Inputs {
  std::vector<std::string> tables;
  std::string query_path;
  std::string query_text;
  std::string out;
  std::string format = "pretty";

  Environment environment() const {
    std::vector<TableFile> files;
    for (const auto& spec : tables) {
      auto eq = spec.find('=');
      TableFile t = load_table(eq == std::string::npos ? spec : spec.substr(eq + 1));
      if (eq != std::string::npos) t.name = spec.substr(0, eq);
      files.push_back(std::move(t));
    }
    return table_environment(files);
  }

  Expr query() const {
    if (!query_text.empty()) return parse_query(query_text);
    if (query_path.empty()) throw Error(ErrorCode::IoError, "no query given (use --query or -e)");
    return parse_query(read_file(query_path));
  }

  bool json() const { return format == "json"; }

  void emit(const std::string& text) const {
    if (out.empty())
      std::cout << text << (text.empty() || text.back() == '\n' ? "" : "\n");
    else
      write_file(out, text);
  }
};

void add_inputs(CLI::App* cmd, Inputs& in, bool needs_query = true) {
  cmd->add_option("--table", in.tables, "Table as name=path.json (repeatable)");
  if (needs_query) {
    cmd->add_option("--query", in.query_path, "File holding the query");
    cmd->add_option("-e,--expr", in.query_text, "Query text");
  }
  cmd->add_option("--out", in.out, "Write output here instead of stdout");
  cmd->add_option("--format", in.format, "Output format")->check(CLI::IsMember({"pretty", "json"}));
}

Evaluation run(const Environment& env, const Expr& q) {
  typecheck_expr(type_context(env), q);
  return eval(env, q);
}

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::FormatError:
    case ErrorCode::SchemaError:
    case ErrorCode::IoError: return 2;
    case ErrorCode::TypeError: return 3;
    case ErrorCode::ControlFlowMismatch:
    case ErrorCode::MissingTraceLabel:
    case ErrorCode::HoleEncountered: return 4;
    case ErrorCode::PatternMismatch:
    case ErrorCode::Incompatible: return 5;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Traced evaluation, replay and slicing for NRC queries"};
  app.require_subcommand(1);
  Inputs in;
  std::string pattern, inner, outer, trace_path;
  bool stats = false;
  int n = 50;

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a query and print its value");
  add_inputs(eval_cmd, in);
  auto* trace_cmd = app.add_subcommand("trace", "Evaluate a query and print its trace");
  add_inputs(trace_cmd, in);
  auto* check_cmd = app.add_subcommand("check", "Typecheck a query and print its type");
  add_inputs(check_cmd, in);

  auto* replay_cmd = app.add_subcommand("replay", "Replay a JSON trace on the given tables");
  add_inputs(replay_cmd, in, false);
  replay_cmd->add_option("--trace", trace_path, "Trace file written by `trace --format json`")->required();
  bool exact = false;
  replay_cmd->add_flag("--exact", exact, "Fail if a table lost labels recorded in the trace");

  auto* slice_cmd = app.add_subcommand("slice", "Backward trace slice for an output pattern");
  auto* qslice_cmd = app.add_subcommand("qslice", "Query slice for an output pattern");
  for (auto* cmd : {slice_cmd, qslice_cmd}) {
    add_inputs(cmd, in);
    cmd->add_option("--pattern", pattern, "Output pattern, e.g. \"{[r2].<B:8;_>} U _\"")->required();
    cmd->add_flag("--stats", stats, "Print node counts before and after slicing");
  }

  auto* dslice_cmd = app.add_subcommand("dslice", "Differential query slice for nested patterns");
  add_inputs(dslice_cmd, in);
  dslice_cmd->add_option("--inner", inner, "Inner pattern")->required();
  dslice_cmd->add_option("--outer", outer, "Outer pattern")->required();

  auto* bench_cmd = app.add_subcommand("bench-q4", "Pythagorean triple slicing benchmark");
  bench_cmd->add_option("--n", n, "Table size")->check(CLI::Range(1, 200));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bench_cmd) {
      auto b = workloads::bench_pythagoras(n, workloads::lab({"t3", "t4", "u5"}));
      Json j = {{"n", b.n},
                {"iterations", b.iterations},
                {"results", b.results},
                {"oracle_results", workloads::pythagoras_oracle(n)},
                {"target", to_string(b.target)},
                {"trace_nodes", b.trace_nodes},
                {"eval_ms", b.eval_ms},
                {"simple_slice", {{"nodes", b.simple_slice_nodes}, {"ms", b.simple_slice_ms}}},
                {"enriched_slice", {{"nodes", b.enriched_slice_nodes}, {"ms", b.enriched_slice_ms}}}};
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    Environment env = in.environment();

    if (*replay_cmd) {
      Trace t = trace_from_json(parse_json(read_file(trace_path)));
      Value v = replay(env, t, ReplayOptions{exact});
      in.emit(in.json() ? value_to_json(v).dump(2) : render_value(v));
      return 0;
    }

    Expr q = in.query();
    if (*check_cmd) {
      in.emit(render_type(typecheck_expr(type_context(env), q)));
      return 0;
    }

    Evaluation ev = run(env, q);
    if (*eval_cmd) {
      in.emit(in.json() ? value_to_json(ev.value).dump(2) : render_value(ev.value));
    } else if (*trace_cmd) {
      in.emit(in.json() ? trace_to_json(ev.trace).dump(2) : render_trace(ev.trace));
    } else if (*slice_cmd || *qslice_cmd) {
      Pattern p = parse_pattern(pattern);
      SliceReport r = *slice_cmd ? trace_report(p, ev.trace) : query_report(p, ev.trace, q);
      in.emit(in.json() ? report_to_json(r).dump(2) : render_report(r, stats));
    } else if (*dslice_cmd) {
      Pattern pi = parse_pattern(inner), po = parse_pattern(outer);
      DiffQuerySlice d = diff_query_slice(pi, po, ev.trace);
      if (in.json()) {
        Json j = {{"inner", {{"env", env_to_json(d.env.inner)}, {"query", render_expr(d.query.inner)}}},
                  {"outer", {{"env", env_to_json(d.env.outer)}, {"query", render_expr(d.query.outer)}}}};
        in.emit(j.dump(2));
      } else {
        in.emit(render_env_diff(d.env.inner, d.env.outer) + render_expr_diff(d.query.inner, d.query.outer));
      }
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  }
}
