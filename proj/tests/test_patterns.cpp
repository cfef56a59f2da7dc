#include <gtest/gtest.h>

#include "nrc/parse.hpp"
#include "nrc/pattern.hpp"
#include "nrc/print.hpp"
#include "nrc/workloads.hpp"
#include "support/printing.hpp"

using namespace nrc;

namespace {

Pattern P(std::string_view s) { return parse_pattern(s); }
Value V(std::string_view s) { return parse_value(s); }
Label L(std::string_view s) { return parse_label(s); }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::IoError;
}

}  // namespace

TEST(Patterns, Normalization) {
  EXPECT_EQ(P("{} U _"), Pattern::hole());
  EXPECT_EQ(P("{} U *"), Pattern::diamond());
  EXPECT_EQ(P("{}").kind(), Pattern::Kind::Set);
  EXPECT_EQ(P("<;_>").kind(), Pattern::Kind::Record);
  EXPECT_EQ(code_of([] { P("{[a]._, [a,b]._}"); }), ErrorCode::PrefixViolation);
}

TEST(Patterns, Equivalence) {
  EXPECT_TRUE(equiv_at(Pattern::hole(), V("1"), V("{[a].2}")));
  EXPECT_TRUE(equiv_at(Pattern::diamond(), V("<A: 1>"), V("<A: 1>")));
  EXPECT_FALSE(equiv_at(Pattern::diamond(), V("1"), V("2")));
  EXPECT_TRUE(equiv_at(P("{[r2].<B: 8; _>} U _"), V("{[r2].<A: 2, B: 8>, [r3].<A: 4, B: 9>}"), V("{[r2].<A: 99, B: 8>}")));
  EXPECT_FALSE(equiv_at(P("{[r2].<B: 8; _>} U _"), V("{[r2].<A: 2, B: 8>}"), V("{[r2].<A: 2, B: 9>}")));
  EXPECT_FALSE(equiv_at(P("{[r2].<B: 8; _>} U _"), V("{[r2].<A: 2, B: 8>}"), V("{[r3].<A: 2, B: 8>}")));
  EXPECT_TRUE(equiv_at(P("{[a].1} U *"), V("{[a].1, [b].2}"), V("{[a].1, [b].2}")));
  EXPECT_FALSE(equiv_at(P("{[a].1} U *"), V("{[a].1, [b].2}"), V("{[a].1, [b].3}")));
  EXPECT_FALSE(equiv_at(P("{[a].1} U *"), V("{[a].1, [b].2}"), V("{[a].1}")));
  EXPECT_TRUE(equiv_at(P("<A: 1; *>"), V("<A: 1, B: 2>"), V("<A: 1, B: 2>")));
  EXPECT_FALSE(equiv_at(P("<A: 1; *>"), V("<A: 1, B: 2>"), V("<A: 1, B: 3>")));
  EXPECT_FALSE(equiv_at(P("{[a]._}"), V("{[a].1}"), V("{[a].1, [b].1}")));
}

TEST(Patterns, Matching) {
  Value q = V("{[r2].<A: 2, B: 8>, [r3].<A: 4, B: 9>}");
  EXPECT_TRUE(matches(Pattern::hole(), q));
  EXPECT_TRUE(matches(P("{[r2].<A: _, B: 8>, [r3]._}"), q));
  EXPECT_FALSE(matches(P("<A: 1>"), V("<A: 1, B: 2>")));
  EXPECT_TRUE(matches(P("<A: 1; _>"), V("<A: 1, B: 2>")));
  EXPECT_FALSE(matches(P("{[r2]._}"), q));
  EXPECT_FALSE(matches(P("{[r9]._} U _"), q));
  EXPECT_FALSE(matches(P("1"), V("true")));
}

TEST(Patterns, LeastUpperBound) {
  Pattern p = P("{[r2].<A: _, B: 8>, [r3]._}");
  EXPECT_EQ(lub(Pattern::hole(), p), p);
  EXPECT_EQ(code_of([] { lub(P("1"), P("2")); }), ErrorCode::Incompatible);
  EXPECT_EQ(lub(Pattern::diamond(), P("{[a]._}")), P("{[a].*}"));
  EXPECT_EQ(lub(P("{[a].<A: 1; _>, [b]._}"), P("{[a].<B: 2; _>} U *")), P("{[a].<A: 1, B: 2; _>, [b].*}"));
  EXPECT_EQ(lub(P("{[a].1} U _"), P("{[b].2} U _")), P("{[a].1, [b].2} U _"));
  EXPECT_EQ(lub(P("{[a].1} U _"), P("{[b].2} U *")), P("{[a].1, [b].2} U *"));
  EXPECT_EQ(code_of([] { lub(P("{[a].1}"), P("{[b].2} U _")); }), ErrorCode::Incompatible);
  EXPECT_EQ(code_of([] { lub(P("{}"), P("{[a]._} U _")); }), ErrorCode::Incompatible);
  EXPECT_EQ(code_of([] { lub(P("{[a]._} U _"), P("{[a,b]._} U _")); }), ErrorCode::Incompatible);
  EXPECT_EQ(code_of([] { lub(P("<A: 1>"), P("{[a].1}")); }), ErrorCode::Incompatible);
}

TEST(Patterns, Ordering) {
  Pattern p = P("{[a].1, [b].2}");
  EXPECT_TRUE(leq(Pattern::hole(), p));
  EXPECT_TRUE(leq(p, p));
  EXPECT_TRUE(leq(P("{[a]._} U _"), p));
  EXPECT_FALSE(leq(p, P("{[a]._} U _")));
  EXPECT_TRUE(leq(P("<A: _; _>"), P("<A: 1, B: 2>")));
  EXPECT_FALSE(leq(P("1"), P("2")));
}

TEST(Patterns, DisjointUnion) {
  EXPECT_EQ(pattern_union(Pattern::diamond(), Pattern::diamond()), Pattern::diamond());
  EXPECT_EQ(pattern_union(Pattern::hole(), Pattern::diamond()), Pattern::hole());
  EXPECT_EQ(pattern_union(P("{[a].1}"), P("{[b].2} U *")), P("{[a].1, [b].2} U *"));
  EXPECT_EQ(pattern_union(P("{[a].1} U *"), P("{[b].2} U _")), P("{[a].1, [b].2} U _"));
  EXPECT_EQ(pattern_union(P("{[a].1} U _"), P("{}")), P("{[a].1} U _"));
  EXPECT_EQ(pattern_union(P("{}"), P("{[a].1}")), P("{[a].1}"));
  EXPECT_EQ(code_of([] { pattern_union(P("{[a].1}"), P("{[a,b].2}")); }), ErrorCode::DomainOverlap);
  EXPECT_EQ(code_of([] { pattern_union(P("1"), P("{}")); }), ErrorCode::ShapeError);
}

TEST(Patterns, Diamondize) {
  EXPECT_EQ(diamondize(P("<A: {[a]._}; _>")), P("<A: {[a].*}; *>"));
  EXPECT_EQ(diamondize(P("3")), P("3"));
  EXPECT_EQ(diamondize(P("{[a]._} U _")), P("{[a].*} U *"));
  EXPECT_EQ(diamondize(Pattern::hole()), Pattern::diamond());
}

TEST(Patterns, SingletonExtraction) {
  EXPECT_EQ(singleton_extract(P("{[].7}")), P("7"));
  EXPECT_EQ(singleton_extract(Pattern::hole()), Pattern::hole());
  EXPECT_EQ(singleton_extract(Pattern::diamond()), Pattern::diamond());
  EXPECT_EQ(singleton_extract(P("{[].<A: 1>} U _")), P("<A: 1>"));
  EXPECT_EQ(code_of([] { singleton_extract(P("{[a].1}")); }), ErrorCode::ShapeError);
  EXPECT_EQ(code_of([] { singleton_extract(P("<A: 1>")); }), ErrorCode::ShapeError);
}

TEST(Patterns, LabelProjection) {
  EXPECT_EQ(label_project(P("{[1,a].5}"), L("[1]")), P("{[a].5}"));
  EXPECT_EQ(label_project(P("{[1,a].5, [2].6}"), L("[2]")), P("{[].6}"));
  EXPECT_EQ(label_project(Pattern::hole(), L("[1]")), Pattern::hole());
  EXPECT_EQ(label_project(P("{[1,a]._} U _"), L("[1]")), P("{[a]._} U _"));
  EXPECT_EQ(label_project(P("{[1,a]._} U _"), L("[2]")), Pattern::hole());
  EXPECT_EQ(label_project(P("{[1,a]._}"), L("[2]")), P("{}"));
  EXPECT_EQ(code_of([] { label_project(P("3"), L("[1]")); }), ErrorCode::ShapeError);
}

TEST(Patterns, Restriction) {
  EXPECT_EQ(restrict(P("{[a].1, [b].2}"), std::vector<Label>{L("[a]")}), P("{[a].1}"));
  EXPECT_EQ(restrict(Pattern::diamond(), std::vector<Label>{L("[a]")}), Pattern::diamond());
  EXPECT_EQ(restrict(P("{[a].1, [b].2} U *"), std::vector<Label>{L("[a]")}), P("{[a].1} U *"));
  EXPECT_EQ(restrict(P("{[a,x].1, [b].2}"), std::vector<Label>{L("[a]")}), P("{[a,x].1}"));
}

TEST(Patterns, FieldProjection) {
  EXPECT_EQ(field_project(P("<A: 1, B: 2>"), "A"), P("1"));
  EXPECT_EQ(field_project(P("<A: 1; _>"), "B"), Pattern::hole());
  EXPECT_EQ(field_project(P("<A: 1; *>"), "B"), Pattern::diamond());
  EXPECT_EQ(field_project(Pattern::diamond(), "A"), Pattern::diamond());
  EXPECT_EQ(code_of([] { field_project(P("<A: 1>"), "B"); }), ErrorCode::ShapeError);
}

TEST(Patterns, Prepend) {
  EXPECT_EQ(prepend_pattern(L("[r2]"), P("{[].7}")), P("{[r2].7}"));
  EXPECT_EQ(prepend_pattern(L("[1]"), Pattern::hole()), Pattern::hole());
  EXPECT_EQ(prepend_pattern(L("[1]"), P("{[a]._} U *")), P("{[1,a]._} U *"));
}

TEST(Patterns, Environments) {
  PatternEnv rho = {{"x", P("{[a].1}")}};
  EXPECT_EQ(lub_env({}, rho), rho);
  EXPECT_EQ(lub_env({{"x", Pattern::hole()}}, {{"x", P("3")}}), (PatternEnv{{"x", P("3")}}));
  EXPECT_EQ(lub_env(rho, {{"y", Pattern::diamond()}}), (PatternEnv{{"x", P("{[a].1}")}, {"y", Pattern::diamond()}}));
  EXPECT_EQ(lookup(rho, "z"), Pattern::hole());
  EXPECT_TRUE(leq_env({}, rho));
}

TEST(Patterns, FillDiamondsShowsInputValues) {
  Value r = workloads::table_r();
  EXPECT_EQ(fill_diamonds(P("{[r2].<B: *, C: 8; _>} U _"), r), P("{[r2].<B: 3, C: 8; _>} U _"));
  EXPECT_EQ(fill_diamonds(P("{[r1].<A: 1; *>} U _"), r), P("{[r1].<A: 1, B: 2, C: 7>} U _"));
  EXPECT_EQ(close_tails(P("{[r2].<B: 3; _>} U _"), r), P("{[r1]._, [r2].<A: _, B: 3, C: _>, [r3]._}"));
}
