#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "nrc/harness.hpp"
#include "nrc/json_io.hpp"
#include "nrc/parse.hpp"
#include "nrc/print.hpp"
#include "nrc/typing.hpp"
#include "nrc/workloads.hpp"
#include "support/expected.hpp"
#include "support/printing.hpp"

using namespace nrc;

namespace {

const std::string samples = NRC_SAMPLES;

Error error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error raised";
  return Error(ErrorCode::IoError, "");
}

std::string temp_file(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("nrc_test_" + name);
  write_file(path.string(), text);
  return path.string();
}

}  // namespace

TEST(Parse, Errors) {
  Error empty = error_of([] { parse_query(""); });
  EXPECT_EQ(empty.code(), ErrorCode::ParseError);
  Error dup = error_of([] { parse_query("<A: 1,\n  A: 2>"); });
  EXPECT_EQ(dup.code(), ErrorCode::ParseError);
  EXPECT_EQ(dup.line(), 2);
  EXPECT_EQ(dup.column(), 3);
  EXPECT_EQ(error_of([] { parse_query("for x in R"); }).code(), ErrorCode::ParseError);
  EXPECT_EQ(error_of([] { parse_query("1 + $"); }).code(), ErrorCode::ParseError);
  EXPECT_EQ(error_of([] { parse_value("{[a].1, [a].2}"); }).code(), ErrorCode::ParseError);
  EXPECT_EQ(error_of([] { parse_value("<A: _>"); }).code(), ErrorCode::ParseError);
  EXPECT_EQ(error_of([] { parse_pattern("{[a]._, [a,b]._}"); }).code(), ErrorCode::PrefixViolation);
}

TEST(Parse, SugarDesugars) {
  EXPECT_EQ(parse_query("for x in R where x.B = 3 return {x}"), parse_query("for x in R return if x.B = 3 then {x} else {}"));
  EXPECT_EQ(parse_query("for x in R, y in S return {x}"), parse_query("for x in R return for y in S return {x}"));
  EXPECT_EQ(parse_query("-- comment\n1 -- more\n"), parse_query("1"));
}

TEST(Parse, Patterns) {
  Pattern p = parse_pattern("{[r2].<B: 8; _>} U _");
  EXPECT_EQ(p.kind(), Pattern::Kind::Set);
  EXPECT_EQ(p.tail(), Tail::Hole);
  EXPECT_EQ(render_pattern(p), "{[r2].<B: 8; _>} U _");
  EXPECT_EQ(render_pattern(parse_pattern("{[r1].*, [r2].<A: *; *>} U *")), "{[r1].*, [r2].<A: *; *>} U *");
  EXPECT_EQ(render_pattern_diff(parse_pattern("<A: _; _>"), parse_pattern("<A: 1; _>")), "<A: [[1]]; _>");
}

TEST(RoundTrip, GeneratedQueriesValuesAndPatterns) {
  harness::Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    harness::Tables tables = harness::random_tables(rng);
    Expr q = harness::QueryGen(rng).any(tables.types, 1 + harness::pick(rng, 4));
    ASSERT_EQ(parse_query(render_expr(q)), q) << render_expr(q);
    for (const auto& [x, v] : tables.env) {
      ASSERT_EQ(parse_value(render_value(v)), v) << render_value(v);
      Pattern p = harness::random_pattern_below(v, rng);
      ASSERT_EQ(parse_pattern(render_pattern(p)), p) << render_pattern(p);
      ASSERT_EQ(value_from_json(value_to_json(v)), v);
    }
  }
}

TEST(RoundTrip, TraceJson) {
  expected::Running r;
  for (const Trace& t : {r.full(), r.enriched_slice(), r.simple_slice()}) {
    Json j = trace_to_json(t);
    EXPECT_EQ(trace_from_json(parse_json(j.dump())), t);
  }
  Evaluation ev = eval(workloads::join_env(), parse_query(workloads::join_query));
  EXPECT_EQ(trace_from_json(trace_to_json(ev.trace)), ev.trace);
}

TEST(Tables, LoadSamples) {
  TableFile r = load_table(samples + "/R.json");
  TableFile s = load_table(samples + "/S.json");
  EXPECT_EQ(r.name, "R");
  EXPECT_EQ(r.value(), workloads::table_r());
  EXPECT_EQ(s.value(), workloads::table_s());
  EXPECT_EQ(render_type(r.schema), "<A: int, B: int, C: int>");
  Environment env = table_environment({r, s});
  EXPECT_EQ(env, workloads::join_env());
  EXPECT_EQ(parse_query(read_file(samples + "/running.nrc")), parse_query(workloads::running_query));
  EXPECT_EQ(table_from_json(table_to_json(r)).value(), r.value());
}

TEST(Tables, Errors) {
  EXPECT_EQ(error_of([] { load_table("/nonexistent/table.json"); }).code(), ErrorCode::IoError);
  EXPECT_EQ(error_of([] { load_table(temp_file("bad.json", "{ not json")); }).code(), ErrorCode::FormatError);
  std::string wrong = R"({"name": "R", "schema": {"rec": {"A": "int"}},
    "rows": [{"id": "r1", "value": {"rec": {"A": {"bool": true}}}}]})";
  EXPECT_EQ(error_of([&] { load_table(temp_file("schema.json", wrong)); }).code(), ErrorCode::SchemaError);
  std::string dup = R"({"name": "R", "schema": "int",
    "rows": [{"id": "r1", "value": {"int": 1}}, {"id": "r1", "value": {"int": 2}}]})";
  EXPECT_EQ(error_of([&] { load_table(temp_file("dup.json", dup)); }).code(), ErrorCode::FormatError);
  std::string missing = R"({"name": "R", "rows": []})";
  EXPECT_EQ(error_of([&] { load_table(temp_file("missing.json", missing)); }).code(), ErrorCode::FormatError);
}

TEST(Harness, FillHolesIsDeterministicAndAboveTheSlice) {
  expected::Running r;
  TypeContext ctx = type_context(workloads::running_env());
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Trace a = harness::fill_holes(ctx, r.enriched_slice(), r.full(), seed);
    EXPECT_EQ(a, harness::fill_holes(ctx, r.enriched_slice(), r.full(), seed));
    EXPECT_TRUE(is_subtrace(r.enriched_slice(), a));
    Expr sliced = parse_query("for x in R return if x.B = 3 then {<A: _, B: x.C>} else _");
    Expr e = harness::fill_expr_holes(ctx, sliced, r.query, seed);
    EXPECT_TRUE(expr_leq(sliced, e));
    EXPECT_NO_THROW(typecheck_expr(ctx, e));
  }
}

TEST(Harness, VaryEnvStaysEquivalent) {
  PatternEnv rho = {{"R", parse_pattern("{[r2].<B: *, C: 8; _>} U _")}};
  Environment env = workloads::running_env();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Environment w = harness::vary_env(rho, env, seed);
    EXPECT_EQ(w, harness::vary_env(rho, env, seed));
    EXPECT_TRUE(equiv_at(rho.at("R"), env.at("R"), w.at("R")));
  }
}
