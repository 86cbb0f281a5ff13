#include <gtest/gtest.h>

#include <string>

#include "epscan/algebra.hpp"
#include "epscan/canonical.hpp"
#include "test_support.hpp"

using namespace epscan;

namespace {

// Isomorphism through eta: same tables after relabeling.
void expect_eta_isomorphism(const CanonicalModel& c) {
  ASSERT_EQ(c.size(), c.source.size());
  EXPECT_TRUE(check_eta(c).pass());
}

TEST(Canonical, B2) {
  auto m = test::load("b2.struct");
  auto c = build_canonical_model(m);
  EXPECT_EQ(c.size(), 2u);
  expect_eta_isomorphism(c);
  auto eta = canonical_injection(c);
  EXPECT_EQ(eta, (std::vector<Element>{0, 1}));
}

TEST(Canonical, B4EtaIsANontrivialPermutation) {
  auto m = test::load("b4.struct");
  auto c = build_canonical_model(m);
  EXPECT_EQ(c.size(), 4u);
  expect_eta_isomorphism(c);
  EXPECT_EQ(canonical_injection(c), (std::vector<Element>{0, 3, 1, 2}));
  // Representatives are closed epsilon terms.
  for (const auto& e : c.elements) {
    EXPECT_EQ(e.rep.kind(), Kind::Eps);
    EXPECT_TRUE(e.rep.closed());
  }
}

TEST(Canonical, RequiresSaturatedFamily) {
  auto m = test::load("b8.struct");
  auto fam = definable_closure(m, 1, 1);
  EXPECT_THROW(build_canonical_model(m, fam), CanonicalError);
}

TEST(Canonical, TransitiveConstantFreeIsFull) {
  auto c = build_canonical_model(test::load("z3_cycle.struct"));
  EXPECT_EQ(c.size(), 3u);
  expect_eta_isomorphism(c);
}

class CorpusCanonical : public ::testing::TestWithParam<std::string> {};

TEST_P(CorpusCanonical, AtomicEtaElementary) {
  auto m = test::load(GetParam());
  auto c = build_canonical_model(m);
  auto atomic = check_atomic(c);
  EXPECT_TRUE(atomic.pass);
  EXPECT_EQ(atomic.checked, c.size());
  EXPECT_TRUE(check_eta(c).pass());
  auto el = check_elementary(c, 2, 100, 3, 7);
  EXPECT_TRUE(el.pass) << (el.counterexample ? to_string(el.counterexample->formula) : "");
  EXPECT_FALSE(el.exhaustive_truncated);
}

TEST_P(CorpusCanonical, CanonicalOfCanonicalSameSize) {
  auto c = build_canonical_model(test::load(GetParam()));
  auto cc = build_canonical_model(c.structure);
  EXPECT_EQ(cc.size(), c.size());
}

TEST_P(CorpusCanonical, TruthLemmaForSentences) {
  auto m = test::load(GetParam());
  if (m.size() > 8) GTEST_SKIP() << "depth-3 enumeration kept to small carriers here";
  auto c = build_canonical_model(m);
  FormulaEnumerator en({&c.structure, &c.source}, 3);
  for (const auto& f : en.formulas()) {
    if (!f.expr.closed()) continue;
    EXPECT_EQ(en.holds(f, 0, 0, 0), en.holds(f, 1, 0, 0)) << to_string(f.expr);
  }
}

TEST_P(CorpusCanonical, ExtensionalityInstance) {
  // Any two witnesses of a definable set give the same epsilon value.
  auto m = test::load(GetParam());
  auto fam = definable_closure(m);
  Evaluator ev(m);
  for (const auto& [s, phi] : fam.direct_witnesses()) {
    Assignment a, b;
    EXPECT_EQ(ev.term(mk::eps(0, phi), a), ev.term(mk::eps(0, fam.witness_formula(s)), b));
    EXPECT_EQ(ev.term(mk::eps(0, phi), a), m.choose(s));
  }
}

INSTANTIATE_TEST_SUITE_P(Corpus, CorpusCanonical,
                         ::testing::Values("b2.struct", "b4.struct", "b8.struct", "b16.struct",
                                           "ca1_simple4.struct", "ca1_simple8.struct",
                                           "ca1_ident4.struct", "ca1_ident8.struct",
                                           "ca1_prod4.struct", "z3_cycle.struct",
                                           "point.struct", "b2_table.struct"),
                         [](const auto& info) {
                           std::string s = info.param;
                           return s.substr(0, s.find('.'));
                         });

TEST(Elementary, DetectsABrokenModel) {
  auto c = build_canonical_model(test::load("b4.struct"));
  // Swap two canonical elements' eta values: equality atoms still agree but
  // the constants do not.
  std::swap(c.elements[0].value, c.elements[2].value);
  EXPECT_FALSE(check_elementary(c, 2, 0).pass);
  EXPECT_FALSE(check_eta(c).pass());
}

TEST(Hom, ParseAndValidate) {
  auto h = load_hom(test::corpus("b4_to_b2.hom"), 4, 2);
  EXPECT_EQ(h, (std::vector<Element>{0, 1, 0, 1}));
  EXPECT_THROW(parse_hom("0 -> 0\n", 2, 2), StructureError);      // not total
  EXPECT_THROW(parse_hom("0 -> 5\n1 -> 0\n", 2, 2), StructureError);
  EXPECT_THROW(parse_hom("0 => 1\n", 1, 2), StructureError);
  EXPECT_NO_THROW(parse_hom("# c\n0 -> 1 # x\n1 -> 0\n", 2, 2));
}

TEST(Lift, IdentityOnB2) {
  auto c = build_canonical_model(test::load("b2.struct"));
  auto r = lift_hom({0, 1}, c, c);
  EXPECT_TRUE(r.pass());
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(r.lifted[i], i);
}

TEST(Lift, B4ToB2) {
  auto c4 = build_canonical_model(test::load("b4.struct"));
  auto c2 = build_canonical_model(test::load("b2.struct"));
  auto h = load_hom(test::corpus("b4_to_b2.hom"), 4, 2);
  auto r = lift_hom(h, c4, c2);
  EXPECT_TRUE(r.homomorphism);
  EXPECT_TRUE(r.range_ok);
  EXPECT_TRUE(r.functional);
  EXPECT_TRUE(r.square_commutes);
  // Not a homomorphism: swaps zero and one.
  EXPECT_FALSE(lift_hom({1, 0, 1, 0}, c4, c2).homomorphism);
}

TEST(Lift, RangeViolationHasWitness) {
  auto c4 = build_canonical_model(test::load("b4.struct"));
  auto c2 = build_canonical_model(test::load("b2.struct"));
  // Drop value 1 from the target universe by hand.
  for (std::size_t j = 0; j < c2.size(); ++j)
    if (c2.elements[j].value == 1) c2.elements.erase(c2.elements.begin() + j);
  auto h = load_hom(test::corpus("b4_to_b2.hom"), 4, 2);
  auto r = lift_hom(h, c4, c2);
  EXPECT_FALSE(r.range_ok);
  ASSERT_TRUE(r.range_witness);
  EXPECT_EQ(h[*r.range_witness], 1u);
  EXPECT_FALSE(r.functional);
}

}  // namespace

namespace {

TEST(Lift, OracleAgreesOnCorpusPairs) {
  auto c4 = build_canonical_model(test::load("b4.struct"));
  auto c2 = build_canonical_model(test::load("b2.struct"));
  auto check = [](const std::vector<Element>& h, const CanonicalModel& a, const CanonicalModel& b) {
    auto r = lift_hom(h, a, b);
    auto o = lift_oracle(h, a, b);
    EXPECT_EQ(r.range_ok, o.range_ok);
    EXPECT_EQ(r.functional, o.functional);
    EXPECT_EQ(r.square_commutes, o.square_commutes);
  };
  check({0, 1}, c2, c2);
  check({0, 1, 2, 3}, c4, c4);
  check(load_hom(test::corpus("b4_to_b2.hom"), 4, 2), c4, c2);
  check({0, 0, 1, 1}, c4, c2);  // the other homomorphism
}

TEST(Lift, OracleSeesARangeViolation) {
  auto c4 = build_canonical_model(test::load("b4.struct"));
  auto c2 = build_canonical_model(test::load("b2.struct"));
  for (std::size_t j = 0; j < c2.size(); ++j)
    if (c2.elements[j].value == 1) c2.elements.erase(c2.elements.begin() + j);
  auto o = lift_oracle(load_hom(test::corpus("b4_to_b2.hom"), 4, 2), c4, c2);
  EXPECT_FALSE(o.functional);
  EXPECT_EQ(o.functional, lift_hom(load_hom(test::corpus("b4_to_b2.hom"), 4, 2), c4, c2).functional);
}

}  // namespace
