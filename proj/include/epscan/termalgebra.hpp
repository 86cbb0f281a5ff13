#pragma once

// The one-variable set algebra of definable sets (Lt1), the map Phi sending a
// definable set to the canonical element chosen from it, the kernel of Phi,
// and the checkers that compare the resulting term algebras with the
// canonical model read as an algebra.

#include <algorithm>
#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "epscan/algebra.hpp"
#include "epscan/canonical.hpp"
#include "epscan/definability.hpp"

namespace epscan {

enum class Verdict { Pass, Fail, Finding, Skipped };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Finding:
      return "finding";
    default:
      return "skipped";
  }
}

/// Definable sets as a monadic algebra. Element y is the union of the family
/// blocks whose bits are set in y; c0 sends nonempty sets to the carrier.
struct Lt1Algebra {
  MonadicAlgebra algebra;
  std::vector<Subset> blocks;
  DefinableFamily family;
  NeatReduct nr0;

  Subset set_of(AlgElem y) const {
    Subset s = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i)
      if (y >> i & 1) s |= blocks[i];
    return s;
  }
  AlgElem element_of(Subset s) const {
    AlgElem y = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i)
      if (s & blocks[i]) y |= AlgElem{1} << i;
    if (set_of(y) != s) throw DefinabilityError("set " + subset_to_string(s) + " is not in Lt1");
    return y;
  }
  Expr witness(AlgElem y) const { return family.witness_formula(set_of(y)); }
  std::size_t size() const { return algebra.size(); }
};

inline Lt1Algebra build_lt1(const DefinableFamily& fam) {
  if (!fam.saturated()) throw DefinabilityError("definable family is not saturated");
  const std::size_t k = fam.blocks().size();
  std::vector<AlgElem> c0(std::size_t{1} << k, static_cast<AlgElem>((std::size_t{1} << k) - 1));
  c0[0] = 0;
  Lt1Algebra l{MonadicAlgebra::make(k, std::move(c0)), fam.blocks(), fam, NeatReduct{}};
  l.nr0 = nr0(l.algebra);
  if (!is_isomorphic(l.nr0.algebra, MonadicAlgebra::two()))
    throw AlgebraError("Nr0 of Lt1 is not the two-element algebra");
  return l;
}

struct PhiMap {
  std::vector<std::uint32_t> value;  // Lt1 element -> canonical index
  Partition kernel;
  bool surjective = true;
  bool transfinite = true;  // Phi(S) lies in S for S nonempty
  std::optional<AlgElem> transfinity_witness;
};

inline PhiMap build_phi(const Lt1Algebra& l, const CanonicalModel& c) {
  PhiMap phi;
  const ChoiceStructure& m = c.source;
  std::vector<std::uint64_t> labels(l.size());
  std::vector<bool> hit(c.size(), false);
  phi.value.resize(l.size());
  for (AlgElem y = 0; y < l.size(); ++y) {
    Subset s = l.set_of(y);
    Element chosen = m.choose(s);
    int idx = c.index_of_value[chosen];
    if (idx < 0) throw CanonicalError("choice of a definable set is not canonical");
    phi.value[y] = static_cast<std::uint32_t>(idx);
    labels[y] = static_cast<std::uint64_t>(idx);
    hit[static_cast<std::size_t>(idx)] = true;
    if (s && !contains(s, c.eta(static_cast<std::size_t>(idx))) && phi.transfinite) {
      phi.transfinite = false;
      phi.transfinity_witness = y;
    }
  }
  for (bool h : hit) phi.surjective = phi.surjective && h;
  phi.kernel = Partition::from_labels(labels);
  return phi;
}

/// The canonical model read as an algebra, when its signature allows.
inline std::optional<StructureAlgebra> canonical_algebra(const CanonicalModel& c,
                                                         std::optional<AlgebraKind> kind = {}) {
  try {
    return from_structure(c.structure, kind.value_or(detect_kind(c.structure.signature())));
  } catch (const AlgebraError&) {
    return std::nullopt;
  }
}

struct FactorCheck {
  bool well_defined = true;  // iota(pi(S)) does not depend on the representative S
  bool bijective = false;
  bool triangle = true;      // iota . pi = Phi pointwise
  std::optional<bool> commutes_with_operations;  // when C reads as an algebra
  std::vector<std::uint32_t> iota;  // quotient element -> canonical index
};

struct KernelReport {
  std::vector<std::size_t> block_sizes;  // descending
  bool congruence = false;
  std::optional<OperationInstance> violation;
  bool brute_force_ran = false;
  bool brute_force_congruence = false;
  bool verdicts_agree = true;
  // Reading (i): quotient by Ker Phi when it is a congruence.
  std::optional<Quotient> kernel_quotient;
  std::optional<FactorCheck> kernel_factor;
  // Reading (ii): quotient by the congruence generated by Ker Phi.
  AlgElem generated_ideal = 0;
  Quotient generated_quotient;
  bool generated_equals_kernel = false;
  bool phi_factors_through_generated = false;
};

namespace detail {

inline FactorCheck factor_through(const Quotient& q, const PhiMap& phi, const CanonicalModel& c,
                                  std::size_t lt1_size) {
  FactorCheck f;
  constexpr std::uint32_t kUnset = 0xffffffffu;
  f.iota.assign(q.algebra.size(), kUnset);
  for (AlgElem y = 0; y < lt1_size; ++y) {
    AlgElem p = q.project(y);
    if (f.iota[p] == kUnset)
      f.iota[p] = phi.value[y];
    else if (f.iota[p] != phi.value[y])
      f.well_defined = false;
  }
  for (AlgElem y = 0; y < lt1_size; ++y)
    if (f.iota[q.project(y)] != phi.value[y]) f.triangle = false;
  std::vector<bool> hit(c.size(), false);
  bool injective = true;
  for (auto v : f.iota) {
    if (v == kUnset) continue;
    if (hit[v]) injective = false;
    hit[v] = true;
  }
  f.bijective = f.well_defined && injective && q.algebra.size() == c.size() &&
                std::find(f.iota.begin(), f.iota.end(), kUnset) == f.iota.end();
  if (f.bijective)
    if (auto ca = canonical_algebra(c, AlgebraKind::BA)) {
      // iota into the canonical algebra must carry the quotient's Boolean
      // operations to the canonical tables.
      auto enc = [&](AlgElem p) { return ca->encode[f.iota[p]]; };
      bool ok = true;
      const auto& qa = q.algebra;
      for (AlgElem a = 0; a < qa.size() && ok; ++a) {
        ok = enc(qa.compl_(a)) == ca->algebra.compl_(enc(a));
        for (AlgElem b = 0; b < qa.size() && ok; ++b)
          ok = enc(qa.meet(a, b)) == (enc(a) & enc(b)) && enc(qa.join(a, b)) == (enc(a) | enc(b));
      }
      f.commutes_with_operations = ok;
    }
  return f;
}

}  // namespace detail

/// Brute-force congruence checking costs |Lt1|^2; it is skipped above
/// `brute_force_max` elements unless the fast check has already found a
/// violation (the brute force then stops at its first inconsistency).
inline KernelReport analyze_kernel(const Lt1Algebra& l, const PhiMap& phi, const CanonicalModel& c,
                                   std::size_t brute_force_max = std::size_t{1} << 12) {
  KernelReport r;
  r.block_sizes = phi.kernel.block_sizes();
  std::sort(r.block_sizes.rbegin(), r.block_sizes.rend());
  auto fast = check_congruence(l.algebra, phi.kernel);
  r.congruence = fast.congruence;
  r.violation = fast.violation;
  if (!fast.congruence || l.size() <= brute_force_max) {
    auto slow = check_congruence_brute_force(l.algebra, phi.kernel);
    r.brute_force_ran = true;
    r.brute_force_congruence = slow.congruence;
    r.verdicts_agree = slow.congruence == fast.congruence;
  }
  if (r.congruence) {
    r.kernel_quotient = quotient(l.algebra, phi.kernel);
    r.kernel_factor = detail::factor_through(*r.kernel_quotient, phi, c, l.size());
  }
  auto gen = generated_congruence(l.algebra, partition_pairs(phi.kernel));
  r.generated_ideal = gen.ideal;
  r.generated_quotient = quotient(l.algebra, gen.partition);
  r.generated_equals_kernel = gen.partition.block == phi.kernel.block;
  // Phi factors through the generated congruence iff each of its blocks sits
  // inside one kernel block.
  r.phi_factors_through_generated = true;
  for (AlgElem y = 0; y < l.size() && r.phi_factors_through_generated; ++y)
    if (phi.value[y] != phi.value[y & ~gen.ideal]) r.phi_factors_through_generated = false;
  return r;
}

// ---------------------------------------------------------------------------
// Richness
// ---------------------------------------------------------------------------

struct RichReport {
  bool nr0_is_two = false;
  std::size_t nr0_size = 0;
  // For every x a Boolean endomorphism b with range in Nr0, fixing Nr0
  // pointwise, and b(x) = c0(x). Witnessed by a choice of one atom inside
  // each Nr0 atom.
  bool rich = true;
  std::optional<AlgElem> rich_witness;
  // Pointwise reading of c0 itself as a Boolean homomorphism onto Nr0.
  bool c0_preserves_join = true;
  bool c0_preserves_complement = true;
  std::optional<AlgElem> complement_witness;
  bool literal_homomorphism() const { return c0_preserves_join && c0_preserves_complement; }
  Verdict verdict() const { return rich && nr0_is_two ? Verdict::Pass : Verdict::Finding; }
};

inline RichReport check_rich(const MonadicAlgebra& a) {
  RichReport r;
  auto n0 = nr0(a);
  r.nr0_size = n0.algebra.size();
  r.nr0_is_two = is_isomorphic(n0.algebra, MonadicAlgebra::two()).has_value();
  std::vector<AlgElem> nr0_atoms;
  for (std::size_t i = 0; i < n0.algebra.atom_count(); ++i)
    nr0_atoms.push_back(n0.embed[AlgElem{1} << i]);

  for (AlgElem x = 0; x < a.size(); ++x) {
    // b(y) = join of the Nr0 atoms beta whose chosen atom lies below y.
    AlgElem bx = 0;
    bool fixes = true;
    for (AlgElem beta : nr0_atoms) {
      AlgElem pick = (x & beta) ? (x & beta) : beta;
      AlgElem alpha = pick & (~pick + 1);  // lowest atom
      if (alpha & x) bx |= beta;
      fixes = fixes && (alpha & beta);
    }
    if (!fixes || bx != a.c0(x)) {
      r.rich = false;
      r.rich_witness = x;
      break;
    }
  }
  // c0 preserves all joins iff it is the join of its values on atoms.
  for (AlgElem x = 0; x < a.size() && r.c0_preserves_join; ++x) {
    AlgElem acc = 0;
    for (std::size_t i = 0; i < a.atom_count(); ++i)
      if (x >> i & 1) acc |= a.c0(AlgElem{1} << i);
    if (acc != a.c0(x)) r.c0_preserves_join = false;
  }
  for (AlgElem x = 0; x < a.size(); ++x)
    if (a.c0(a.compl_(x)) != a.compl_(a.c0(x))) {
      r.c0_preserves_complement = false;
      r.complement_witness = x;
      break;
    }
  return r;
}

struct RichPairReport {
  RichReport lt1;
  std::optional<RichReport> quotient;  // Lt1 / Ker Phi, when that exists
  Verdict verdict() const {
    if (lt1.verdict() != Verdict::Pass) return lt1.verdict();
    return quotient ? quotient->verdict() : Verdict::Pass;
  }
};

inline RichPairReport check_rich(const Lt1Algebra& l, const MonadicAlgebra* quotient_algebra) {
  RichPairReport r{check_rich(l.algebra), std::nullopt};
  if (quotient_algebra) r.quotient = check_rich(*quotient_algebra);
  return r;
}

// ---------------------------------------------------------------------------
// Pipeline and theorem checkers
// ---------------------------------------------------------------------------

struct Pipeline {
  DefinableFamily family;
  CanonicalModel canonical;
  Lt1Algebra lt1;
  PhiMap phi;
  KernelReport kernel;
};

inline Pipeline run_pipeline(const ChoiceStructure& m) {
  auto fam = definable_closure(m);
  auto c = build_canonical_model(m, fam);
  auto l = build_lt1(fam);
  auto phi = build_phi(l, c);
  auto k = analyze_kernel(l, phi, c);
  return {std::move(fam), std::move(c), std::move(l), std::move(phi), std::move(k)};
}

struct TheoremMainReport {
  Verdict verdict = Verdict::Skipped;
  std::string reason;
  AlgebraKind kind = AlgebraKind::BA;
  std::size_t canonical_size = 0;
  // Part (1): Boolean reducts, with both readings of the term algebra.
  std::size_t term_size_generated = 0;
  std::optional<std::size_t> term_size_kernel;
  bool term_degenerate = false;
  bool part1_generated = false;
  std::optional<bool> part1_kernel;
  Verdict part1 = Verdict::Skipped;
  // Part (2), CA1 only.
  std::optional<bool> lhs_isomorphic;  // canonical algebra ~ term algebra
  std::optional<bool> rhs_nr0_two;     // Nr0 of the canonical algebra ~ 2
  std::optional<bool> biconditional;
  Verdict part2 = Verdict::Skipped;
  double seconds = 0;
};

/// Part (1) compares Boolean reducts, which for finite algebras reduces to
/// cardinality. The term algebra is the quotient by Ker Phi when that is a
/// congruence and by the generated congruence otherwise; both are reported.
inline TheoremMainReport check_theorem_main(const ChoiceStructure& m) {
  auto t0 = std::chrono::steady_clock::now();
  TheoremMainReport r;
  r.kind = detect_kind(m.signature());
  std::optional<StructureAlgebra> source;
  try {
    source = from_structure(m, r.kind);
  } catch (const AlgebraError& e) {
    r.reason = e.what();
    return r;
  }
  auto p = run_pipeline(m);
  auto can = canonical_algebra(p.canonical, r.kind);
  if (!can) {
    r.verdict = Verdict::Fail;
    r.reason = "canonical model does not read as an algebra";
    return r;
  }
  r.canonical_size = can->algebra.size();
  const MonadicAlgebra& term =
      p.kernel.kernel_quotient ? p.kernel.kernel_quotient->algebra : p.kernel.generated_quotient.algebra;
  r.term_size_generated = p.kernel.generated_quotient.algebra.size();
  r.term_degenerate = term.degenerate();
  r.part1_generated = r.term_size_generated == r.canonical_size;
  if (p.kernel.kernel_quotient) {
    r.term_size_kernel = p.kernel.kernel_quotient->algebra.size();
    r.part1_kernel = *r.term_size_kernel == r.canonical_size;
  }
  r.part1 = (p.kernel.kernel_quotient ? *r.part1_kernel : r.part1_generated) ? Verdict::Pass
                                                                             : Verdict::Finding;
  if (r.kind == AlgebraKind::CA1) {
    r.lhs_isomorphic = is_isomorphic(can->algebra, term).has_value();
    r.rhs_nr0_two = nr0_is_two(can->algebra);
    r.biconditional = *r.lhs_isomorphic == *r.rhs_nr0_two;
    r.part2 = *r.biconditional ? Verdict::Pass : Verdict::Finding;
  }
  r.verdict = r.part1 == Verdict::Pass && r.part2 != Verdict::Finding ? Verdict::Pass
                                                                       : Verdict::Finding;
  if (r.verdict != Verdict::Pass)
    r.reason = "canonical algebra has " + std::to_string(r.canonical_size) +
               " elements, term algebra " + std::to_string(term.size()) +
               (p.kernel.kernel_quotient ? " (quotient by Ker Phi)" : " (quotient by the generated congruence)");
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

struct SigmaReport {
  Verdict verdict = Verdict::Skipped;
  std::string reason;
  bool lt1_built = false;
  bool nr0_two = false;
  bool kernel_congruence = false;
  std::optional<bool> kernel_quotient_isomorphic;  // reading (i)
  bool generated_quotient_isomorphic = false;      // reading (ii)
  std::size_t canonical_size = 0;
  std::size_t lt1_size = 0;
  double seconds = 0;
};

/// Boolean reducts: Lt1 / Ker Phi against the canonical model. Any structure
/// interpreting the Boolean symbols is read as a BA.
inline SigmaReport check_sigma_prop(const ChoiceStructure& m) {
  auto t0 = std::chrono::steady_clock::now();
  SigmaReport r;
  try {
    from_structure(m, AlgebraKind::BA);
  } catch (const AlgebraError& e) {
    r.reason = e.what();
    return r;
  }
  auto p = run_pipeline(m);
  r.lt1_built = true;
  r.lt1_size = p.lt1.size();
  r.nr0_two = p.lt1.nr0.algebra.size() == 2;
  auto can = canonical_algebra(p.canonical, AlgebraKind::BA);
  if (!can) {
    r.verdict = Verdict::Fail;
    r.reason = "canonical model does not read as a Boolean algebra";
    return r;
  }
  r.canonical_size = can->algebra.size();
  // Compare Boolean reducts: give both sides the synthesized c0.
  auto boolean = [](const MonadicAlgebra& a) { return MonadicAlgebra::simple(a.atom_count(), true); };
  r.kernel_congruence = p.kernel.congruence;
  if (p.kernel.kernel_quotient)
    r.kernel_quotient_isomorphic =
        is_isomorphic(boolean(p.kernel.kernel_quotient->algebra), can->algebra).has_value();
  r.generated_quotient_isomorphic =
      is_isomorphic(boolean(p.kernel.generated_quotient.algebra), can->algebra).has_value();
  if (r.kernel_quotient_isomorphic.value_or(false)) {
    r.verdict = Verdict::Pass;
  } else {
    r.verdict = Verdict::Finding;
    r.reason = !r.kernel_congruence ? "Ker Phi is not a congruence of Lt1"
                                    : "Lt1 / Ker Phi is not isomorphic to the canonical algebra";
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace epscan
