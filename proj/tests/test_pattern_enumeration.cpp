#include <gtest/gtest.h>

#include "support/enumeration.hpp"
#include "support/printing.hpp"

using namespace nrc;

namespace {

const std::vector<enumeration::LawReport>& reports() {
  static const std::vector<enumeration::LawReport> r = enumeration::run_laws();
  return r;
}

const enumeration::LawReport& law(const std::string& name) {
  for (const auto& r : reports())
    if (r.name == name) return r;
  throw std::runtime_error("no law " + name);
}

void expect_holds(const std::string& name) {
  const auto& r = law(name);
  EXPECT_GT(r.checks, 0u);
  EXPECT_EQ(r.violations, 0u) << r.counterexample;
}

}  // namespace

TEST(PatternLaws, UniverseShape) {
  auto u = enumeration::small_universe();
  EXPECT_EQ(u.constants.size(), 2u);
  EXPECT_EQ(u.records.size(), 9u);
  EXPECT_EQ(u.sets.size(), 17u);
  EXPECT_EQ(enumeration::patterns_below(Value::integer(1)).size(), 3u);
  // <A:c> gives _, *, c's three patterns under three tails, and <;_>, <;*>.
  EXPECT_EQ(enumeration::patterns_below(parse_value("<A: 1>")).size(), 2u + 9u + 2u);
}

TEST(PatternLaws, LubSoundness) { expect_holds("lub soundness"); }
TEST(PatternLaws, LubExistenceAndLeastness) { expect_holds("lub existence and leastness"); }
TEST(PatternLaws, DiamondSubstitution) { expect_holds("diamond substitution"); }
TEST(PatternLaws, UnionLemma) { expect_holds("union lemma"); }
TEST(PatternLaws, ProjectionAndMatching) { expect_holds("projection and matching"); }
TEST(PatternLaws, ProjectionAndEquivalence) { expect_holds("projection and equivalence"); }
TEST(PatternLaws, Restriction) { expect_holds("restriction lemma"); }
TEST(PatternLaws, PartialOrder) { expect_holds("partial order laws"); }
