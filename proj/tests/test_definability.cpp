#include <gtest/gtest.h>

#include <string>

#include "epscan/definability.hpp"
#include "epscan/parser.hpp"
#include "test_support.hpp"

using namespace epscan;

namespace {

TEST(Definability, B2) {
  auto m = test::load("b2.struct");
  auto fam = definable_closure(m, 1);
  EXPECT_TRUE(fam.saturated());
  EXPECT_EQ(fam.element_set(), full_set(2));
  EXPECT_EQ(fam.sets(), (std::vector<Subset>{0, 1, 2, 3}));
  EXPECT_EQ(to_string(witness_formula(fam, 0b10)), "(= v0 one)");
  EXPECT_EQ(to_string(witness_formula(fam, 0)), "(not (= v0 v0))");
  EXPECT_FALSE(verify_family(m, fam));
}

TEST(Definability, B4Trace) {
  auto m = test::load("b4.struct");
  auto fam = definable_closure(m, 2);
  EXPECT_TRUE(fam.saturated());
  EXPECT_EQ(fam.element_set(), full_set(4));
  EXPECT_EQ(fam.set_count(), 16u);
  // Seeded by the constants, then choice({1,2}) in round 1.
  ASSERT_GE(fam.elements().size(), 3u);
  EXPECT_EQ(fam.elements()[0].origin, "constant");
  EXPECT_EQ(fam.elements()[1].origin, "constant");
  const auto& one = fam.element(1);
  EXPECT_EQ(one.round, 1u);
  EXPECT_EQ(to_string(one.term),
            "(eps v0 (and (not (= v0 zero)) (not (= v0 one))))");
  EXPECT_FALSE(verify_family(m, fam));
}

TEST(Definability, WitnessOfUndefinableSetThrows) {
  auto m = test::load("b8.struct");
  auto fam = definable_closure(m, 1, 1);  // one round only
  EXPECT_FALSE(fam.saturated());
  bool threw = false;
  for (Subset s = 0; s < 256 && !threw; ++s)
    if (!fam.contains(s)) {
      EXPECT_THROW(witness_formula(fam, s), DefinabilityError);
      threw = true;
    }
  EXPECT_TRUE(threw);
}

// With equality every element ends up denotable: the complement of E is
// defined by excluding each named element, and its choice is new.
class CorpusDefinability : public ::testing::TestWithParam<std::string> {};

TEST_P(CorpusDefinability, SaturatesToEverything) {
  auto m = test::load(GetParam());
  for (int dim : {1, 2}) {
    auto fam = definable_closure(m, dim);
    EXPECT_TRUE(fam.saturated());
    EXPECT_EQ(fam.element_set(), m.carrier());
    EXPECT_TRUE(fam.full_power_set());
    EXPECT_FALSE(verify_family(m, fam)) << *verify_family(m, fam);
  }
}

TEST_P(CorpusDefinability, MonotoneInRounds) {
  auto m = test::load(GetParam());
  DefinableFamily prev = definable_closure(m, 1, 1);
  for (std::size_t r = 2; r <= 6; ++r) {
    auto cur = definable_closure(m, 1, r);
    EXPECT_EQ(cur.element_set() & prev.element_set(), prev.element_set());
    for (Subset s : prev.sets()) EXPECT_TRUE(cur.contains(s));
    prev = std::move(cur);
  }
}

TEST_P(CorpusDefinability, ChoiceClosure) {
  auto m = test::load(GetParam());
  auto fam = definable_closure(m, 2);
  for (Subset s : fam.sets()) EXPECT_TRUE(fam.denotable(m.choose(s)));
}

INSTANTIATE_TEST_SUITE_P(Corpus, CorpusDefinability,
                         ::testing::Values("b2.struct", "b4.struct", "b8.struct", "b16.struct",
                                           "ca1_simple4.struct", "ca1_ident8.struct",
                                           "ca1_prod4.struct", "z3_cycle.struct",
                                           "point.struct", "b2_table.struct"),
                         [](const auto& info) {
                           std::string s = info.param;
                           return s.substr(0, s.find('.'));
                         });

TEST(Definability, TwoVariableStageIsSound) {
  for (auto file : {"b4.struct", "z3_cycle.struct", "ca1_simple4.struct"}) {
    auto m = test::load(file);
    DefinabilityOptions opt;
    opt.stop_when_maximal = false;
    opt.relation_cap = 300;
    auto fam = definable_closure(m, opt);
    EXPECT_GT(fam.relation_count(), 0u) << file;
    bool has_eps_function = false;
    for (const auto& f : fam.functions())
      has_eps_function = has_eps_function || f.term.kind() == Kind::Eps;
    EXPECT_TRUE(has_eps_function) << file;
    EXPECT_FALSE(verify_family(m, fam)) << file << ": " << *verify_family(m, fam);
  }
}

TEST(Definability, TransitiveConstantFreeStartsFromChoice) {
  // z3_cycle has no constants; the first element comes from choice over a
  // set definable without parameters.
  auto m = test::load("z3_cycle.struct");
  auto fam = definable_closure(m, 1);
  ASSERT_FALSE(fam.elements().empty());
  EXPECT_EQ(fam.elements()[0].origin, "choice");
  EXPECT_EQ(fam.elements()[0].round, 1u);
  EXPECT_EQ(fam.element_set(), full_set(3));
}

TEST(Stability, SmallCorpusAgreesWithBruteForce) {
  for (auto file : {"b2.struct", "b4.struct", "ca1_simple4.struct", "ca1_ident4.struct",
                    "ca1_prod4.struct", "z3_cycle.struct", "point.struct",
                    "b2_table.struct"}) {
    auto r = stability_check(test::load(file), 4);
    EXPECT_TRUE(r.dims_agree) << file;
    EXPECT_TRUE(r.brute_force_ran) << file;
    EXPECT_TRUE(r.brute_force_agrees) << file;
  }
}

TEST(Stability, BruteForceSkippedAboveLimit) {
  auto r = stability_check(test::load("b16.struct"), 4);
  EXPECT_FALSE(r.brute_force_ran);
  EXPECT_TRUE(r.dims_agree);
}

}  // namespace
