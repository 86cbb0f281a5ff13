#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "epscan/algebra.hpp"
#include "test_support.hpp"

using namespace epscan;

namespace {

MonadicAlgebra random_monadic(std::mt19937_64& rng, std::size_t k) {
  std::vector<std::size_t> label(k);
  for (auto& l : label) l = std::uniform_int_distribution<std::size_t>(0, k ? k - 1 : 0)(rng);
  return MonadicAlgebra::from_atom_classes(label);
}

// Oracle: try every atom permutation.
bool iso_by_permutations(const MonadicAlgebra& a, const MonadicAlgebra& b) {
  if (a.atom_count() != b.atom_count()) return false;
  Isomorphism iso{std::vector<std::size_t>(a.atom_count())};
  std::iota(iso.atom_map.begin(), iso.atom_map.end(), 0);
  do {
    bool ok = true;
    for (AlgElem x = 0; x < a.size() && ok; ++x) ok = iso(a.c0(x)) == b.c0(iso(x));
    if (ok) return true;
  } while (std::next_permutation(iso.atom_map.begin(), iso.atom_map.end()));
  return false;
}

// Oracle: union-find closure under all operations.
Partition generated_by_union_find(const MonadicAlgebra& a,
                                  const std::vector<std::pair<AlgElem, AlgElem>>& pairs) {
  const std::size_t n = a.size();
  std::vector<AlgElem> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<AlgElem(AlgElem)> find = [&](AlgElem x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  bool changed = false;
  auto unite = [&](AlgElem x, AlgElem y) {
    x = find(x);
    y = find(y);
    if (x != y) {
      parent[std::max(x, y)] = std::min(x, y);
      changed = true;
    }
  };
  for (auto [x, y] : pairs) unite(x, y);
  do {
    changed = false;
    for (AlgElem x = 0; x < n; ++x) {
      AlgElem r = find(x);
      if (r == x) continue;
      unite(a.compl_(x), a.compl_(r));
      unite(a.c0(x), a.c0(r));
      for (AlgElem y = 0; y < n; ++y) {
        unite(a.meet(x, y), a.meet(r, y));
        unite(a.join(x, y), a.join(r, y));
      }
    }
  } while (changed);
  std::vector<std::uint64_t> labels(n);
  for (AlgElem x = 0; x < n; ++x) labels[x] = find(x);
  return Partition::from_labels(labels);
}

TEST(MonadicAlgebra, LawsRejectBadC0) {
  EXPECT_THROW(MonadicAlgebra::make(1, {1, 1}), AlgebraError);      // c0(0) != 0
  EXPECT_THROW(MonadicAlgebra::make(2, {0, 1, 1, 3}), AlgebraError);  // x <= c0 x fails at 2
  // Not idempotent: c0(1) = 3 but c0(3) ... fine; c0(2)=2 while c0(1)=3 breaks law 3.
  EXPECT_THROW(MonadicAlgebra::make(2, {0, 3, 2, 3}), AlgebraError);
  EXPECT_NO_THROW(MonadicAlgebra::identity(3));
  EXPECT_NO_THROW(MonadicAlgebra::simple(4));
}

TEST(MonadicAlgebra, AtomClassesAlwaysLawful) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    auto a = random_monadic(rng, 1 + i % 5);
    EXPECT_FALSE(MonadicAlgebra::find_law_violation(a.atom_count(), a.c0_table()));
  }
}

TEST(MonadicAlgebra, AtomsExamples) {
  EXPECT_EQ(atoms(MonadicAlgebra::two()), std::vector<AlgElem>{1});
  EXPECT_EQ(atoms(MonadicAlgebra::simple(2)).size(), 2u);
  EXPECT_EQ(atoms(MonadicAlgebra::simple(3)).size(), 3u);
}

TEST(FromStructure, CorpusBAs) {
  for (auto [file, k] : {std::pair{"b2.struct", 1}, {"b4.struct", 2}, {"b8.struct", 3},
                         {"b16.struct", 4}}) {
    auto sa = from_structure(test::load(file), AlgebraKind::BA);
    EXPECT_EQ(sa.algebra.atom_count(), static_cast<std::size_t>(k)) << file;
    EXPECT_TRUE(sa.algebra.synthesized());
    EXPECT_EQ(sa.algebra.c0(0), 0u);
    for (AlgElem x = 1; x < sa.algebra.size(); ++x) EXPECT_EQ(sa.algebra.c0(x), sa.algebra.top());
  }
}

TEST(FromStructure, CorpusCA1s) {
  auto simple = from_structure(test::load("ca1_simple4.struct"), AlgebraKind::CA1).algebra;
  auto ident = from_structure(test::load("ca1_ident4.struct"), AlgebraKind::CA1).algebra;
  EXPECT_FALSE(simple.synthesized());
  EXPECT_TRUE(is_isomorphic(simple, MonadicAlgebra::simple(2)));
  EXPECT_TRUE(is_isomorphic(ident, MonadicAlgebra::identity(2)));
  EXPECT_EQ(detect_kind(test::load("ca1_prod4.struct").signature()), AlgebraKind::CA1);
  EXPECT_EQ(detect_kind(test::load("b4.struct").signature()), AlgebraKind::BA);
}

TEST(FromStructure, RejectsCOfZeroNonzero) {
  auto a = MonadicAlgebra::identity(2);
  auto m = algebra_structure(a, true);
  // Rebuild with c(0) = 1.
  auto sig = m.signature();
  std::vector<std::vector<Element>> funs;
  for (std::size_t i = 0; i < sig.functions().size(); ++i) funs.push_back(m.function_table(i));
  funs[*sig.function_index("c")][0] = 1;
  auto bad = ChoiceStructure::make(sig, 4, {}, funs, m.constants(), MinRule{0});
  try {
    from_structure(bad, AlgebraKind::CA1);
    FAIL() << "expected rejection";
  } catch (const AlgebraError& e) {
    EXPECT_NE(std::string(e.what()).find("c(zero)"), std::string::npos) << e.what();
  }
}

TEST(FromStructure, RejectsMissingSymbols) {
  EXPECT_THROW(from_structure(test::load("z3_cycle.struct"), AlgebraKind::BA), AlgebraError);
  EXPECT_THROW(from_structure(test::load("b4.struct"), AlgebraKind::CA1), AlgebraError);
}

TEST(FromStructure, RelabeledCarrierDecodes) {
  std::vector<Element> perm{3, 1, 0, 2};
  auto m = algebra_structure(MonadicAlgebra::identity(2), true, perm);
  auto sa = from_structure(m, AlgebraKind::CA1);
  for (Element x = 0; x < 4; ++x) EXPECT_EQ(sa.decode[sa.encode[x]], x);
  EXPECT_EQ(sa.encode[3], 0u);  // zero
}

TEST(Nr0, Examples) {
  EXPECT_TRUE(nr0_is_two(MonadicAlgebra::simple(2)));
  EXPECT_EQ(nr0(MonadicAlgebra::identity(2)).algebra.size(), 4u);
  auto prod = from_structure(test::load("ca1_prod4.struct"), AlgebraKind::CA1).algebra;
  EXPECT_EQ(nr0(prod).algebra.size(), 4u);
  auto r = nr0(MonadicAlgebra::from_atom_classes({0, 0, 1}));
  EXPECT_EQ(r.algebra.size(), 4u);
  for (AlgElem y : r.embed) EXPECT_EQ(MonadicAlgebra::from_atom_classes({0, 0, 1}).c0(y), y);
}

TEST(Isomorphism, Examples) {
  auto b4 = from_structure(test::load("b4.struct"), AlgebraKind::BA).algebra;
  auto b4p = from_structure(algebra_structure(b4, false, {2, 0, 3, 1}), AlgebraKind::BA).algebra;
  EXPECT_TRUE(is_isomorphic(b4, b4p));
  auto b8 = from_structure(test::load("b8.struct"), AlgebraKind::BA).algebra;
  EXPECT_FALSE(is_isomorphic(b4, b8));
  auto simple = from_structure(test::load("ca1_simple4.struct"), AlgebraKind::CA1).algebra;
  auto ident = from_structure(test::load("ca1_ident4.struct"), AlgebraKind::CA1).algebra;
  EXPECT_FALSE(is_isomorphic(simple, ident));
}

TEST(Isomorphism, AgreesWithPermutationSearch) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 400; ++i) {
    std::size_t k = 1 + i % 4;
    auto a = random_monadic(rng, k), b = random_monadic(rng, k);
    auto iso = is_isomorphic(a, b);
    EXPECT_EQ(iso.has_value(), iso_by_permutations(a, b));
    if (iso) {
      EXPECT_TRUE(is_isomorphism(a, b, *iso));
    }
  }
}

TEST(Isomorphism, EquivalenceRelationOnCorpus) {
  std::vector<MonadicAlgebra> all;
  for (auto f : {"b2.struct", "b4.struct", "b8.struct", "b16.struct"})
    all.push_back(from_structure(test::load(f), AlgebraKind::BA).algebra);
  for (auto f : {"ca1_simple4.struct", "ca1_simple8.struct", "ca1_ident4.struct",
                 "ca1_ident8.struct", "ca1_prod4.struct"})
    all.push_back(from_structure(test::load(f), AlgebraKind::CA1).algebra);
  for (auto& a : all) EXPECT_TRUE(is_isomorphic(a, a));
  for (auto& a : all)
    for (auto& b : all) {
      EXPECT_EQ(is_isomorphic(a, b).has_value(), is_isomorphic(b, a).has_value());
      for (auto& c : all)
        if (is_isomorphic(a, b) && is_isomorphic(b, c)) {
          EXPECT_TRUE(is_isomorphic(a, c));
        }
    }
}

TEST(Isomorphism, BACardinalityLaw) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    std::size_t ka = 1 + rng() % 4, kb = 1 + rng() % 4;
    auto relabel = [&](std::size_t k) {
      std::vector<Element> perm(std::size_t{1} << k);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      return from_structure(algebra_structure(MonadicAlgebra::simple(k), false, perm),
                            AlgebraKind::BA)
          .algebra;
    };
    auto a = relabel(ka), b = relabel(kb);
    EXPECT_EQ(is_isomorphic(a, b).has_value(), a.size() == b.size());
    EXPECT_EQ(is_isomorphic(a, b).has_value(), iso_by_permutations(a, b));
  }
}

TEST(Congruence, Examples) {
  auto b4 = from_structure(test::load("b4.struct"), AlgebraKind::BA).algebra;
  // Ideal {0, a}: blocks {0,1}, {2,3}, a Boolean congruence. With the simple
  // c0 made genuine it stops being one, since c0 sends 1 to top and 0 to 0.
  auto p = ideal_partition(b4, 1);
  EXPECT_EQ(p.block_sizes(), (std::vector<std::size_t>{2, 2}));
  EXPECT_TRUE(is_congruence(b4, p));
  EXPECT_TRUE(is_congruence(MonadicAlgebra::identity(2), p));
  EXPECT_FALSE(is_congruence(MonadicAlgebra::simple(2), p));
  EXPECT_TRUE(is_congruence(b4, Partition::discrete(4)));
  EXPECT_TRUE(is_congruence(b4, Partition::total(4)));

  // 16 elements split by least atom: sizes 9/4/2/1.
  auto b16 = MonadicAlgebra::simple(4);
  std::vector<std::uint64_t> labels(16);
  for (AlgElem x = 0; x < 16; ++x) labels[x] = x ? std::countr_zero(x) : 0;
  auto q = Partition::from_labels(labels);
  auto sizes = q.block_sizes();
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{1, 2, 4, 9}));
  auto v = check_congruence(b16, q);
  EXPECT_FALSE(v.congruence);
  ASSERT_TRUE(v.violation);
}

void expect_genuine(const MonadicAlgebra& a, const Partition& p, const OperationInstance& v) {
  ASSERT_TRUE(p.same(v.x, v.x2)) << v.describe();
  AlgElem r1, r2;
  if (v.op == "meet") {
    ASSERT_TRUE(p.same(v.y, v.y2));
    r1 = a.meet(v.x, v.y), r2 = a.meet(v.x2, v.y2);
  } else if (v.op == "join") {
    ASSERT_TRUE(p.same(v.y, v.y2));
    r1 = a.join(v.x, v.y), r2 = a.join(v.x2, v.y2);
  } else if (v.op == "compl") {
    r1 = a.compl_(v.x), r2 = a.compl_(v.x2);
  } else {
    r1 = a.c0(v.x), r2 = a.c0(v.x2);
  }
  EXPECT_FALSE(p.same(r1, r2)) << v.describe();
}

TEST(Congruence, FastCheckerAgreesWithBruteForce) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 3000; ++i) {
    std::size_t k = 1 + i % 4;
    auto a = i % 5 == 4 ? MonadicAlgebra::simple(k, true) : random_monadic(rng, k);
    Partition p;
    switch (i % 3) {
      case 0: {  // arbitrary labels
        std::vector<std::uint64_t> labels(a.size());
        for (auto& l : labels) l = rng() % (1 + rng() % a.size());
        p = Partition::from_labels(labels);
        break;
      }
      case 1:  // coset partition of a random element, congruence iff c0-closed
        p = ideal_partition(a, static_cast<AlgElem>(rng() % a.size()));
        break;
      default:
        p = generated_congruence(a, {{static_cast<AlgElem>(rng() % a.size()),
                                      static_cast<AlgElem>(rng() % a.size())}})
                .partition;
    }
    auto fast = check_congruence(a, p);
    auto slow = check_congruence_brute_force(a, p);
    ASSERT_EQ(fast.congruence, slow.congruence) << i;
    if (!fast.congruence) {
      expect_genuine(a, p, *fast.violation);
      expect_genuine(a, p, *slow.violation);
    } else {
      EXPECT_EQ(fast.ideal, slow.ideal);
    }
  }
}

TEST(Congruence, GeneratedMatchesUnionFind) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 500; ++i) {
    std::size_t k = 1 + i % 4;
    auto a = random_monadic(rng, k);
    std::vector<std::pair<AlgElem, AlgElem>> pairs;
    for (std::size_t j = 0, m = rng() % 3; j < m; ++j)
      pairs.emplace_back(rng() % a.size(), rng() % a.size());
    auto g = generated_congruence(a, pairs);
    EXPECT_EQ(g.partition, generated_by_union_find(a, pairs)) << i;
    EXPECT_TRUE(is_congruence(a, g.partition));
  }
}

TEST(Congruence, GeneratedExamples) {
  auto b4 = MonadicAlgebra::identity(2);
  EXPECT_EQ(generated_congruence(b4, {}).partition, Partition::discrete(4));
  EXPECT_EQ(generated_congruence(b4, {{0, 1}}).partition, ideal_partition(b4, 1));
  EXPECT_EQ(generated_congruence(b4, {{0, 3}}).partition, Partition::total(4));
  // In a simple algebra any nontrivial pair collapses everything.
  EXPECT_EQ(generated_congruence(MonadicAlgebra::simple(2), {{0, 1}}).partition,
            Partition::total(4));
}

TEST(Quotient, Examples) {
  auto ba = from_structure(test::load("b4.struct"), AlgebraKind::BA).algebra;
  auto qa = quotient(ba, generated_congruence(ba, {{0, 1}}).partition);
  EXPECT_EQ(qa.algebra.size(), 2u);
  EXPECT_TRUE(qa.algebra.synthesized());
  auto b4 = MonadicAlgebra::identity(2);
  auto q = quotient(b4, ideal_partition(b4, 1));
  EXPECT_EQ(q.algebra.size(), 2u);
  EXPECT_TRUE(is_isomorphic(q.algebra, MonadicAlgebra::two()));
  auto same = quotient(b4, Partition::discrete(4));
  EXPECT_TRUE(is_isomorphic(same.algebra, b4));
  auto one = quotient(b4, Partition::total(4));
  EXPECT_TRUE(one.degenerate);
  EXPECT_EQ(one.algebra.size(), 1u);
  EXPECT_THROW(quotient(MonadicAlgebra::simple(2), ideal_partition(b4, 1)), AlgebraError);
}

TEST(Quotient, KernelOfProjectionIsTheCongruence) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 300; ++i) {
    auto a = random_monadic(rng, 1 + i % 5);
    auto g = generated_congruence(a, {{static_cast<AlgElem>(rng() % a.size()), 0}});
    auto q = quotient(a, g.partition);
    for (AlgElem x = 0; x < a.size(); ++x)
      for (AlgElem y = 0; y < a.size(); ++y)
        ASSERT_EQ(q.project(x) == q.project(y), g.partition.same(x, y));
  }
}

}  // namespace
