#include <gtest/gtest.h>

#include <random>
#include <string>

#include "epscan/eval.hpp"
#include "epscan/parser.hpp"
#include "epscan/structure.hpp"
#include "test_support.hpp"

using namespace epscan;

namespace {

const char* kB2Header = R"(signature
fun meet 2
fun join 2
fun compl 1
const zero
const one
end
carrier 2
fun compl
0 -> 1
1 -> 0
end
fun join
0 0 -> 0
0 1 -> 1
1 0 -> 1
1 1 -> 1
end
const zero 0
const one 1
)";

std::string b2_with(const std::string& meet_lines, const std::string& choice) {
  return std::string(kB2Header) + "fun meet\n" + meet_lines + "end\n" + choice;
}

const std::string kFullMeet = "0 0 -> 0\n0 1 -> 0\n1 0 -> 0\n1 1 -> 1\n";

std::string message_of(const std::string& text) {
  try {
    parse_structure(text);
  } catch (const StructureError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Structure, ValidB2) {
  auto m = parse_structure(b2_with(kFullMeet, "choice min\n"));
  EXPECT_EQ(m.size(), 2u);
  EXPECT_EQ(m.choose(0b11), 0u);
  EXPECT_EQ(m.choose(0), 0u);
  auto fi = *m.signature().function_index("meet");
  EXPECT_EQ(m.apply(fi, {1, 1}), 1u);
}

TEST(Structure, ChoiceNotInSet) {
  auto msg = message_of(b2_with(
      kFullMeet, "choice table\n{} -> 0\n{0} -> 0\n{1} -> 0\n{0,1} -> 1\nend\n"));
  EXPECT_NE(msg.find("choice not in set"), std::string::npos) << msg;
}

TEST(Structure, ExplicitTableNotTotal) {
  auto msg = message_of(b2_with(kFullMeet, "choice table\n{} -> 0\n{0} -> 0\nend\n"));
  EXPECT_NE(msg.find("not total"), std::string::npos) << msg;
}

TEST(Structure, FunctionTablePartial) {
  auto msg = message_of(b2_with("0 0 -> 0\n0 1 -> 0\n1 0 -> 0\n", "choice min\n"));
  EXPECT_NE(msg.find("function table partial"), std::string::npos) << msg;
}

TEST(Structure, RelationTupleOutOfRange) {
  auto msg = message_of("signature\nrel p 1\nend\ncarrier 2\nrel p\n2\nend\n");
  EXPECT_NE(msg.find("out of range"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 6"), std::string::npos) << msg;
}

TEST(Structure, ChoiceEmptyDesignatesEmptySetValue) {
  auto m = parse_structure(b2_with(kFullMeet, "choice min\nchoice-empty 1\n"));
  EXPECT_EQ(m.choose(0), 1u);
}

TEST(Structure, WriteReadRoundTrip) {
  for (const char* f : {"b4.struct", "z3_cycle.struct", "b2_table.struct", "point.struct"}) {
    auto m = test::load(f);
    auto text = write_structure(m);
    EXPECT_EQ(write_structure(parse_structure(text)), text) << f;
  }
}

TEST(Eval, EpsilonExamplesOnB2) {
  auto m = test::load("b2.struct");
  const auto& sig = m.signature();
  EXPECT_EQ(eval_term(m, {}, parse_term("(eps v0 (= v0 one))", sig)), 1u);
  EXPECT_EQ(eval_term(m, {}, parse_term("(eps v0 (not (= v0 v0)))", sig)), 0u);
  // Oracle: the extension of (= v0 v0) by direct enumeration, then least index.
  Subset ext = 0;
  for (Element x = 0; x < m.size(); ++x) ext |= singleton(x);
  Element least = 0;
  while (!contains(ext, least)) ++least;
  EXPECT_EQ(eval_term(m, {}, parse_term("(eps v0 (= v0 v0))", sig)), least);
}

TEST(Eval, FormulaExamplesOnB2) {
  auto m = test::load("b2.struct");
  const auto& sig = m.signature();
  EXPECT_TRUE(eval_formula(m, {}, parse_formula("(ex v0 (= v0 zero))", sig)));
  EXPECT_TRUE(eval_formula(
      m, {}, parse_formula("(all v0 (or (= v0 zero) (= v0 one)))", sig)));
  EXPECT_FALSE(eval_formula(m, {}, parse_formula("(= (eps v0 (= v0 one)) zero)", sig)));
}

TEST(Eval, UnboundVariable) {
  auto m = test::load("b2.struct");
  EXPECT_THROW(eval_formula(m, {}, parse_formula("(= v3 zero)", m.signature())),
               EvalError);
  EXPECT_THROW(eval_term(m, {0}, parse_term("(eps v0 (= v0 v1))", m.signature())),
               EvalError);
}

TEST(Eval, TheoryHolds) {
  auto m = test::load("b2.struct");
  const auto& sig = m.signature();
  EXPECT_TRUE(theory_holds(m, parse_formula("(= zero zero)", sig)));
  EXPECT_FALSE(theory_holds(m, parse_formula("(= zero one)", sig)));
  // Oracle: no element of {0,1} differs from both constants.
  bool any = false;
  for (Element x = 0; x < m.size(); ++x) any = any || (x != 0 && x != 1);
  EXPECT_EQ(theory_holds(m, parse_formula(
                                "(ex v0 (and (not (= v0 zero)) (not (= v0 one))))", sig)),
            any);
  EXPECT_THROW(theory_holds(m, parse_formula("(= v0 zero)", sig)), EvalError);
}

TEST(Eval, ExplicitChoiceTable) {
  auto m = test::load("b2_table.struct");
  const auto& sig = m.signature();
  EXPECT_EQ(eval_term(m, {}, parse_term("(eps v0 (= v0 v0))", sig)), 1u);
  EXPECT_EQ(eval_term(m, {}, parse_term("(eps v0 (not (= v0 v0)))", sig)), 0u);
}

// ---------------------------------------------------------------------------
// Axiom properties on random formulas over every corpus structure
// ---------------------------------------------------------------------------

class CorpusSemantics : public ::testing::TestWithParam<const char*> {};

TEST_P(CorpusSemantics, SubstitutionLemma) {
  auto m = test::load(GetParam());
  Evaluator ev(m);
  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    auto phi = test::random_formula(m.signature(), rng, 4, 3);
    auto t = test::random_term(m.signature(), rng, 2, 3);
    VarIndex v = static_cast<VarIndex>(rng() % 3);
    Assignment a;
    for (VarIndex w = 0; w < 3; ++w) a.bind(w, static_cast<Element>(rng() % m.size()));
    bool lhs = ev.formula(substitute(phi, t, v), a);
    Assignment b = a;
    b.bind(v, ev.term(t, a));
    ASSERT_EQ(lhs, ev.formula(phi, b)) << to_string(phi) << " [" << to_string(t) << "/v" << v << "]";
  }
}

TEST_P(CorpusSemantics, TransfinityAndCoherence) {
  auto m = test::load(GetParam());
  Evaluator ev(m);
  std::mt19937_64 rng(22);
  for (int i = 0; i < 200; ++i) {
    auto phi = test::random_formula(m.signature(), rng, 3, 2);
    auto t = test::random_term(m.signature(), rng, 1, 2);
    VarIndex v = static_cast<VarIndex>(rng() % 2);
    auto witness = substitute(phi, mk::eps(v, phi), v);
    auto sugarfree = desugar(phi);
    for (Element x = 0; x < m.size(); ++x)
      for (Element y = 0; y < m.size(); ++y) {
        Assignment a{x, y};
        if (ev.formula(substitute(phi, t, v), a)) {
          ASSERT_TRUE(ev.formula(witness, a)) << to_string(phi);
        }
        ASSERT_EQ(ev.formula(phi, a), ev.formula(sugarfree, a)) << to_string(phi);
      }
  }
}

INSTANTIATE_TEST_SUITE_P(All, CorpusSemantics,
                         ::testing::Values("b2.struct", "b4.struct", "b8.struct",
                                           "ca1_simple4.struct", "ca1_ident8.struct",
                                           "z3_cycle.struct", "b2_table.struct",
                                           "point.struct"));
