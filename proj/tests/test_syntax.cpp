#include <gtest/gtest.h>

#include <random>

#include "epscan/parser.hpp"
#include "epscan/syntax.hpp"
#include "test_support.hpp"

using namespace epscan;

namespace {

Signature ba() {
  Signature s;
  s.add_function("meet", 2).add_function("join", 2).add_function("compl", 1);
  s.add_constant("zero").add_constant("one");
  s.add_relation("le", 2);
  return s;
}

}  // namespace

TEST(Parse, EqualityWithConstant) {
  auto e = parse("(= v0 zero)", ba());
  EXPECT_EQ(e, mk::equal(mk::var(0), mk::constant("zero")));
  EXPECT_TRUE(e.is_formula());
}

TEST(Parse, EpsilonTerm) {
  auto e = parse("(eps v0 (not (= v0 v0)))", ba());
  EXPECT_EQ(e, mk::eps(0, mk::not_(mk::equal(mk::var(0), mk::var(0)))));
  EXPECT_TRUE(e.is_term());
}

TEST(Parse, ArityMismatchReportsPosition) {
  try {
    parse("(meet v0)", ba());
    FAIL() << "expected arity error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ParseError::Code::ArityMismatch);
    EXPECT_EQ(e.pos().column, 2u);
  }
}

TEST(Parse, Errors) {
  EXPECT_THROW(parse("(= v0 two)", ba()), ParseError);
  EXPECT_THROW(parse("(= v0 zero", ba()), ParseError);
  EXPECT_THROW(parse("(= v0 Zero)", ba()), ParseError);
  EXPECT_THROW(parse("(not v0)", ba()), ParseError);
  EXPECT_THROW(parse("(= v0 zero) v1", ba()), ParseError);
  EXPECT_THROW(parse_term("(= v0 zero)", ba()), ParseError);
  EXPECT_THROW(parse_formula("v0", ba()), ParseError);
  try {
    parse("(frob v0)", ba());
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ParseError::Code::UndeclaredSymbol);
  }
  try {
    parse("(= v0 $)", ba());
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ParseError::Code::Lexical);
    EXPECT_EQ(e.pos().column, 7u);
  }
}

TEST(Signature, RejectsCollisionsAndBadNames) {
  Signature s;
  s.add_function("f", 1);
  EXPECT_THROW(s.add_constant("f"), SignatureError);
  EXPECT_THROW(s.add_relation("r", 0), SignatureError);
  EXPECT_THROW(s.add_constant("v3"), SignatureError);
  EXPECT_THROW(s.add_constant("eps"), SignatureError);
  EXPECT_THROW(s.add_constant("Bad"), SignatureError);
}

TEST(FreeVars, Basics) {
  auto sig = ba();
  EXPECT_EQ(free_vars(parse("(eps v0 (= v0 v1))", sig)), std::vector<VarIndex>{1});
  EXPECT_EQ(free_vars(parse("(= v0 zero)", sig)), std::vector<VarIndex>{0});
  EXPECT_TRUE(free_vars(parse("(eps v0 (= v0 zero))", sig)).empty());
}

TEST(Substitute, DirectReplacement) {
  auto sig = ba();
  auto r = substitute(parse("(= v0 zero)", sig), parse("one", sig), 0);
  EXPECT_EQ(to_string(r), "(= one zero)");
}

TEST(Substitute, NotFreeIsUnchanged) {
  auto sig = ba();
  auto phi = parse("(= v1 v1)", sig);
  auto r = substitute(phi, parse("one", sig), 0);
  EXPECT_EQ(r, phi);
  EXPECT_EQ(r.get(), phi.get());
}

TEST(Substitute, RenamesCapturingBinderToSmallestUnused) {
  auto sig = ba();
  // v0 is free in the replacement, so the bound v0 must move; v1 is being
  // replaced and v0 is taken, so the smallest unused index is 2.
  auto phi = parse("(= (eps v0 (= v0 v1)) zero)", sig);
  auto r = substitute(phi, parse("(compl v0)", sig), 1);
  EXPECT_EQ(to_string(r), "(= (eps v2 (= v2 (compl v0))) zero)");
  EXPECT_EQ(free_vars(r), std::vector<VarIndex>{0});
}

TEST(Substitute, BoundOccurrenceUntouched) {
  auto sig = ba();
  auto phi = parse("(ex v0 (= v0 v1))", sig);
  EXPECT_EQ(substitute(phi, parse("one", sig), 0), phi);
}

TEST(Desugar, ExistsUsesEpsilonWitness) {
  auto sig = ba();
  EXPECT_EQ(to_string(desugar(parse("(ex v0 (= v0 zero))", sig))),
            "(= (eps v0 (= v0 zero)) zero)");
}

TEST(Desugar, ForallOfReflexivity) {
  auto sig = ba();
  EXPECT_EQ(to_string(desugar(parse("(all v0 (= v0 v0))", sig))),
            "(= (eps v0 (not (= v0 v0))) (eps v0 (not (= v0 v0))))");
}

TEST(Desugar, AndImpIff) {
  auto sig = ba();
  EXPECT_EQ(to_string(desugar(parse("(and (= v0 zero) (= v1 one))", sig))),
            "(not (or (not (= v0 zero)) (not (= v1 one))))");
  EXPECT_EQ(to_string(desugar(parse("(imp (= v0 zero) (= v1 one))", sig))),
            "(or (not (= v0 zero)) (= v1 one))");
  auto iff = desugar(parse("(iff (= v0 zero) (= v1 one))", sig));
  EXPECT_FALSE(iff.has_sugar());
}

TEST(Desugar, InsideEpsilonBodies) {
  auto sig = ba();
  auto r = desugar(parse("(= (eps v0 (and (= v0 zero) (= v0 one))) zero)", sig));
  EXPECT_FALSE(r.has_sugar());
}

// ---------------------------------------------------------------------------
// Properties over random expressions
// ---------------------------------------------------------------------------

TEST(SyntaxProperties, PrintParseRoundTrip) {
  auto sig = ba();
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    auto e = (i % 3 == 0) ? test::random_term(sig, rng, 6, 3)
                          : test::random_formula(sig, rng, 6, 3);
    auto back = parse(to_string(e), sig);
    ASSERT_EQ(back, e) << to_string(e);
  }
}

TEST(SyntaxProperties, DesugarIsIdempotentAndCore) {
  auto sig = ba();
  std::mt19937_64 rng(12);
  for (int i = 0; i < 1000; ++i) {
    auto phi = test::random_formula(sig, rng, 4, 3);
    auto d = desugar(phi);
    ASSERT_FALSE(d.has_sugar()) << to_string(phi);
    ASSERT_EQ(desugar(d), d);
    ASSERT_EQ(d.free_vars(), phi.free_vars()) << to_string(phi);
  }
}

TEST(SyntaxProperties, FreeVarsOfSubstitution) {
  auto sig = ba();
  std::mt19937_64 rng(13);
  int checked = 0;
  for (int i = 0; i < 3000; ++i) {
    auto phi = test::random_formula(sig, rng, 4, 3);
    auto t = test::random_term(sig, rng, 2, 3);
    VarIndex v = static_cast<VarIndex>(rng() % 3);
    if (!phi.is_free(v)) continue;
    ++checked;
    std::vector<VarIndex> expect;
    for (VarIndex w : phi.free_vars())
      if (w != v) expect.push_back(w);
    std::vector<VarIndex> merged;
    std::set_union(expect.begin(), expect.end(), t.free_vars().begin(),
                   t.free_vars().end(), std::back_inserter(merged));
    ASSERT_EQ(substitute(phi, t, v).free_vars(), merged);
  }
  EXPECT_GT(checked, 500);
}

TEST(SyntaxProperties, SubstitutionComposition) {
  // phi[t/v][s/w] == phi[s/w][t[s/w]/v] when v != w, w not free in t and
  // v not free in s.
  // Compared up to renaming of bound variables via alpha-normal printing.
  auto sig = ba();
  std::mt19937_64 rng(14);
  for (int i = 0; i < 2000; ++i) {
    auto phi = test::random_formula(sig, rng, 4, 3);
    VarIndex v = static_cast<VarIndex>(rng() % 3);
    VarIndex w = static_cast<VarIndex>(rng() % 3);
    if (v == w) continue;
    auto t = test::random_term(sig, rng, 2, 3);
    if (t.is_free(w)) continue;
    auto s = test::random_term(sig, rng, 2, 3);
    if (s.is_free(v)) continue;
    auto lhs = substitute(substitute(phi, t, v), s, w);
    auto rhs = substitute(substitute(phi, s, w), substitute(t, s, w), v);
    ASSERT_TRUE(alpha_equal(lhs, rhs))
        << to_string(phi) << "\n" << to_string(lhs) << "\n" << to_string(rhs);
  }
}
