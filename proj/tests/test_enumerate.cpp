#include <gtest/gtest.h>

#include <chrono>
#include <string>

#include "epscan/enumerate.hpp"
#include "epscan/eval.hpp"
#include "test_support.hpp"

using namespace epscan;

namespace {

class EnumerateAgainstEvaluator : public ::testing::TestWithParam<std::string> {};

TEST_P(EnumerateAgainstEvaluator, TablesMatchDirectSemantics) {
  auto m = test::load(GetParam());
  FormulaEnumerator en({&m}, 2);
  ASSERT_FALSE(en.formulas().empty());
  Evaluator ev(m);
  for (const auto& f : en.formulas())
    for (Element x = 0; x < m.size(); ++x)
      for (Element y = 0; y < m.size(); ++y) {
        Assignment a{x, y};
        ASSERT_EQ(ev.formula(f.expr, a), en.holds(f, 0, x, y)) << to_string(f.expr);
      }
  for (const auto& t : en.terms())
    for (Element x = 0; x < m.size(); ++x)
      for (Element y = 0; y < m.size(); ++y) {
        Assignment a{x, y};
        ASSERT_EQ(ev.term(t.expr, a), en.value(t, 0, x, y)) << to_string(t.expr);
      }
}

INSTANTIATE_TEST_SUITE_P(Corpus, EnumerateAgainstEvaluator,
                         ::testing::Values("b2.struct", "b4.struct", "z3_cycle.struct",
                                           "ca1_simple4.struct", "b2_table.struct",
                                           "point.struct"),
                         [](const auto& info) {
                           std::string s = info.param;
                           return s.substr(0, s.find('.'));
                         });

TEST(Enumerate, DepthsAreSyntactic) {
  auto m = test::load("b4.struct");
  FormulaEnumerator en({&m}, 3);
  for (const auto& f : en.formulas()) EXPECT_EQ(depth(f.expr), f.depth) << to_string(f.expr);
  for (const auto& t : en.terms()) EXPECT_EQ(depth(t.expr), t.depth) << to_string(t.expr);
}

TEST(Enumerate, JointViewsSeparateMoreFormulas) {
  auto b2 = test::load("b2.struct");
  auto b4 = test::load("b4.struct");
  FormulaEnumerator one({&b2}, 2), both({&b2, &b4}, 2);
  EXPECT_LT(one.formulas().size(), both.formulas().size());
}

TEST(Enumerate, CoreModeHasNoSugar) {
  auto m = test::load("b4.struct");
  FormulaEnumerator en({&m}, 3, false);
  for (const auto& f : en.formulas()) EXPECT_FALSE(f.expr.has_sugar());
}

TEST(Enumerate, CapSetsTruncated) {
  auto m = test::load("b4.struct");
  FormulaEnumerator en({&m}, 3, true, {.max_terms = 50, .max_formulas = 100});
  EXPECT_TRUE(en.truncated());
  EXPECT_LE(en.formulas().size(), 100u);
}

TEST(UnaryDefinable, B4ReachesEverySubsetByDepthFour) {
  auto m = test::load("b4.struct");
  auto sets = unary_definable_sets(m, 4);
  for (Subset s = 0; s < 16; ++s) EXPECT_TRUE(sets[s]) << subset_to_string(s);
}

TEST(UnaryDefinable, DepthZeroIsAtomic) {
  auto m = test::load("z3_cycle.struct");
  // no constants: only v0 = v0 and succ^k(v0) = v0 style atoms
  auto sets = unary_definable_sets(m, 0);
  EXPECT_TRUE(sets[full_set(3)]);
  EXPECT_TRUE(sets[0]);
  EXPECT_FALSE(sets[singleton(0)]);
}

TEST(UnaryDefinable, MonotoneInDepth) {
  auto m = test::load("ca1_simple4.struct");
  auto lo = unary_definable_sets(m, 1), hi = unary_definable_sets(m, 2);
  for (std::size_t s = 0; s < lo.size(); ++s)
    if (lo[s]) {
      EXPECT_TRUE(hi[s]);
    }
}

TEST(Enumerate, B16DepthThreeTiming) {
  auto m = test::load("b16.struct");
  auto t0 = std::chrono::steady_clock::now();
  FormulaEnumerator en({&m}, 3);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0).count();
  RecordProperty("formulas", std::to_string(en.formulas().size()));
  std::printf("b16 depth 3: %zu terms, %zu formulas, truncated=%d, %lld ms\n",
              en.terms().size(), en.formulas().size(), en.truncated(), (long long)ms);
}

}  // namespace
