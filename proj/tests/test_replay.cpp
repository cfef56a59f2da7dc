#include <gtest/gtest.h>

#include "nrc/eval.hpp"
#include "nrc/parse.hpp"
#include "nrc/print.hpp"
#include "nrc/replay.hpp"
#include "support/expected.hpp"
#include "support/printing.hpp"

using namespace nrc;

namespace {

Error error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error raised";
  return Error(ErrorCode::IoError, "");
}

Environment with_row(const char* id, Value row) {
  Elements es = workloads::table_r().elements();
  es.insert_or_assign(workloads::lab({id}), std::move(row));
  return {{"R", Value::collection(std::move(es))}};
}

struct ReplayTest : ::testing::Test {
  Expr query = parse_query(workloads::running_query);
  Evaluation ev = eval(workloads::running_env(), query);
};

}  // namespace

TEST_F(ReplayTest, ReproducesTheOriginalValue) { EXPECT_EQ(replay(workloads::running_env(), ev.trace), ev.value); }

TEST_F(ReplayTest, IrrelevantChangeReplays) {
  Environment changed = with_row("r1", workloads::row(1, 5, 7));
  Value v = replay(changed, ev.trace);
  EXPECT_EQ(v, eval_value(changed, query));
  EXPECT_EQ(v, parse_value("{[r2].<A: 2, B: 8>, [r3].<A: 4, B: 9>}"));
}

TEST_F(ReplayTest, ChangedTestFailsWithPath) {
  Error e = error_of([&] { replay(with_row("r2", workloads::row(2, 4, 8)), ev.trace); });
  EXPECT_EQ(e.code(), ErrorCode::ControlFlowMismatch);
  EXPECT_EQ(e.path(), (std::vector<std::string>{"x[r2]", "if"}));
}

TEST_F(ReplayTest, FreshRowIsMissingFromTheTrace) {
  Elements es = workloads::table_r().elements();
  es.emplace(workloads::lab({"r9"}), workloads::row(0, 0, 0));
  Error e = error_of([&] { replay({{"R", Value::collection(std::move(es))}}, ev.trace); });
  EXPECT_EQ(e.code(), ErrorCode::MissingTraceLabel);
  EXPECT_EQ(e.path(), (std::vector<std::string>{"x[r9]"}));
}

TEST_F(ReplayTest, DeletedRowsReplayUnlessExact) {
  Elements es = workloads::table_r().elements();
  es.erase(workloads::lab({"r1"}));
  es.erase(workloads::lab({"r3"}));
  Environment fewer = {{"R", Value::collection(std::move(es))}};
  EXPECT_EQ(replay(fewer, ev.trace), parse_value("{[r2].<A: 2, B: 8>}"));
  EXPECT_EQ(error_of([&] { replay(fewer, ev.trace, ReplayOptions{true}); }).code(), ErrorCode::ControlFlowMismatch);
}

TEST_F(ReplayTest, ReplayCompOnSubcollection) {
  const auto& c = std::get<tr::Comp>(ev.trace.node().data);
  Value only_r2 = Value::collection({{workloads::lab({"r2"}), workloads::row(2, 3, 8)}});
  EXPECT_EQ(replay_comp({}, "x", only_r2, c.elements), parse_value("{[r2].<A: 2, B: 8>}"));
  EXPECT_EQ(replay_comp({}, "x", Value::empty(), c.elements), Value::empty());
  Value fresh = Value::collection({{workloads::lab({"r9"}), workloads::row(2, 3, 8)}});
  EXPECT_EQ(error_of([&] { replay_comp({}, "x", fresh, c.elements); }).code(), ErrorCode::MissingTraceLabel);
}

TEST_F(ReplayTest, HolesCannotBeReplayed) {
  Environment only_r2 = {{"R", Value::collection({{workloads::lab({"r2"}), workloads::row(2, 3, 8)}})}};
  Error e = error_of([&] { replay(only_r2, expected::Running().enriched_slice()); });
  EXPECT_EQ(e.code(), ErrorCode::HoleEncountered);
  EXPECT_EQ(e.path(), (std::vector<std::string>{"x[r2]", "if"}));
  // r1 is not in the sliced trace at all.
  EXPECT_EQ(error_of([&] { replay(workloads::running_env(), expected::Running().enriched_slice()); }).code(),
            ErrorCode::MissingTraceLabel);
  EXPECT_EQ(error_of([&] { replay({}, tr::hole()); }).code(), ErrorCode::HoleEncountered);
}

TEST_F(ReplayTest, TraceSetsReplaySubsets) {
  Value q2 = replay(workloads::running_env(), eval(workloads::running_env(), parse_query(workloads::union_query)).trace);
  EXPECT_EQ(q2, parse_value("{[1,r1].<B: 2>, [1,r2].<B: 3>, [1,r3].<B: 3>, [2].<B: 3>}"));
}

TEST(Subtrace, Relation) {
  expected::Running r;
  Trace full = r.full();
  EXPECT_TRUE(is_subtrace(tr::hole(), full));
  EXPECT_TRUE(is_subtrace(full, full));
  EXPECT_TRUE(is_subtrace(r.enriched_slice(), full));
  EXPECT_TRUE(is_subtrace(r.displayed_simple_slice(), r.simple_slice()));
  EXPECT_TRUE(is_subtrace(r.simple_slice(), full));
  EXPECT_FALSE(is_subtrace(full, r.simple_slice()));
  Trace t = r.branch(true, tr::hole());
  Trace f = r.branch(false, tr::hole());
  EXPECT_FALSE(is_subtrace(t, f));
  EXPECT_FALSE(is_subtrace(expected::num(1), expected::num(2)));
}

TEST(TraceSize, CountsNodesAndStoredExpressions) {
  EXPECT_EQ(trace_size(expected::num(1)), 1u);
  EXPECT_EQ(trace_size(expected::sng(expected::num(1))), 2u);
  EXPECT_EQ(trace_size(tr::hole()), 1u);
  Expr branch = parse_query("{x}");
  Trace t = tr::make(tr::If{expected::num(1), branch, branch, true, tr::hole()});
  EXPECT_EQ(trace_size(t), 1u + 1u + 2u + 2u + 1u);
}
