#include <gtest/gtest.h>

#include "nrc/eval.hpp"
#include "nrc/expr_order.hpp"
#include "nrc/parse.hpp"
#include "nrc/print.hpp"
#include "nrc/slice.hpp"
#include "nrc/workloads.hpp"
#include "support/printing.hpp"

using namespace nrc;

namespace {

Pattern P(std::string_view s) { return parse_pattern(s); }
Expr Q(std::string_view s) { return parse_query(s); }

std::string qslice(const char* query, const Environment& env, const char* pattern) {
  Evaluation ev = eval(env, Q(query));
  return render_expr(query_slice(P(pattern), ev.trace).query);
}

}  // namespace

TEST(ExprOrder, LubOfQuerySlices) {
  EXPECT_EQ(lub_expr(Q("_"), Q("x + 1")), Q("x + 1"));
  EXPECT_EQ(lub_expr(Q("x + _"), Q("_ + 1")), Q("x + 1"));
  EXPECT_EQ(lub_expr(Q("if x then {_} else _"), Q("if x then _ else {}")), Q("if x then {_} else {}"));
  EXPECT_EQ(lub_expr(Q("for x in R return _"), Q("for x in _ return {x}")), Q("for x in R return {x}"));
  EXPECT_THROW(lub_expr(Q("x"), Q("y")), Error);
  EXPECT_TRUE(expr_leq(Q("_"), Q("x")));
  EXPECT_TRUE(expr_leq(Q("<A: _, B: x.C>"), Q("<A: x.A, B: x.C>")));
  EXPECT_FALSE(expr_leq(Q("<A: x.A, B: x.C>"), Q("<A: _, B: x.C>")));
  EXPECT_EQ(expr_size(Q("_")), 1u);
}

TEST(QuerySlice, RunningExample) {
  EXPECT_EQ(qslice(workloads::running_query, workloads::running_env(), "{[r2].<B: 8; _>} U _"),
            "for x in R return if x.B = 3 then {<A: _, B: x.C>} else _");
  EXPECT_EQ(qslice(workloads::running_query, workloads::running_env(), "{[r2].<A: _, B: 8>, [r3]._}"),
            "for x in R where x.B = 3 return {<A: _, B: x.C>}");
  EXPECT_EQ(qslice(workloads::running_query, workloads::running_env(), "_"), "_");
}

TEST(QuerySlice, UnionBranches) {
  EXPECT_EQ(qslice(workloads::union_query, workloads::running_env(), "{[1,r2].<B: 3>} U _"),
            "union {for x in R return {<B: x.B>}, _}");
  EXPECT_EQ(qslice(workloads::union_query, workloads::running_env(), "{[2].<B: 3>} U _"), "union {_, {<B: 3>}}");
  EXPECT_EQ(qslice(workloads::swap_query, workloads::running_env(), "{[1,r1].<B: 2; _>} U _"),
            "union {for x in R return if x.A <= x.B then {x} else _, _}");
}

TEST(QuerySlice, Join) {
  EXPECT_EQ(qslice(workloads::join_query, workloads::join_env(), "{[r1,s1].<A: 1; _>, [r2,s2].<B: 4; _>} U _"),
            "for x in R, y in S return if x.B = y.B then {<A: x.A, B: y.C>} else _");
  EXPECT_EQ(qslice(workloads::join_query, workloads::join_env(), "{[r2,s2].<B: 4; _>} U _"),
            "for x in R, y in S return if x.B = y.B then {<A: _, B: y.C>} else _");
}

TEST(QuerySlice, SetRules) {
  Evaluation ev = eval(workloads::running_env(), Q(workloads::running_query));
  const auto& c = std::get<tr::Comp>(ev.trace.node().data);
  QuerySetSlice none = query_slice_set(Pattern::hole(), "x", c.elements);
  EXPECT_TRUE(none.body.is_hole());
  EXPECT_EQ(none.source, Pattern::hole());
  QuerySetSlice one = query_slice_set(P("{[r2].<B: 8; _>} U _"), "x", c.elements);
  EXPECT_EQ(render_expr(one.body), "if x.B = 3 then {<A: _, B: x.C>} else _");
  EXPECT_EQ(one.source, P("{[r2].<B: *, C: 8; _>} U _"));
}

TEST(QuerySlice, Differential) {
  Evaluation ev = eval(workloads::running_env(), Q(workloads::running_query));
  DiffQuerySlice d = diff_query_slice(P("{[r2].<B: _; _>} U _"), P("{[r2].<B: 8; _>} U _"), ev.trace);
  EXPECT_EQ(render_expr_diff(d.query.inner, d.query.outer),
            "for x in R return if x.B = 3 then {<A: _, B: [[x.C]]>} else _");
  EXPECT_TRUE(expr_leq(d.query.inner, d.query.outer));
}

TEST(QuerySlice, Pythagoras) {
  Environment env = workloads::pythagoras_env(10);
  Evaluation ev = eval(env, Q(workloads::pythagoras_query));
  EXPECT_EQ(ev.value, parse_value("{[t3,t4,u5].12, [t6,t8,u10].48}"));

  TraceSlice s = backward_slice(P("{[t3,t4,u5].12} U _"), ev.trace);
  EXPECT_EQ(s.env.at("T"), P("{[t3].*, [t4].*} U _"));
  EXPECT_EQ(s.env.at("U"), P("{[u5].*} U _"));

  QuerySlice q = query_slice(P("{[t3,t4,u5].12} U _"), ev.trace);
  EXPECT_EQ(render_expr(q.query), "for x in T, y in T, z in U return if x < y then if x * x + y * y = z * z then {x * y} else _ else _");

  DiffQuerySlice d = diff_query_slice(P("{[t3,t4,u5]._} U _"), P("{[t3,t4,u5].12} U _"), ev.trace);
  EXPECT_EQ(render_expr_diff(d.query.inner, d.query.outer),
            "for x in T, y in T, z in U return if x < y then if x * x + y * y = z * z then {[[x * y]]} else _ else _");
}

TEST(QuerySlice, PythagorasBenchmarkShape) {
  auto b = workloads::bench_pythagoras(12, workloads::lab({"t3", "t4", "u5"}), 1);
  EXPECT_EQ(b.results, workloads::pythagoras_oracle(12));
  EXPECT_LT(b.enriched_slice_nodes * 100, b.simple_slice_nodes);
  EXPECT_GT(b.simple_slice_nodes, b.trace_nodes * 9 / 10);
}
