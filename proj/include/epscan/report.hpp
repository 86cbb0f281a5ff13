#pragma once

// Machine-readable reports. Every check becomes a CheckRecord carrying a
// verdict, reproducible witnesses and details; Report bundles the records of
// one structure with its content hash. Key order is insertion order, so the
// JSON is byte-stable for identical inputs once timings are dropped.

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "epscan/algebra.hpp"
#include "epscan/axioms.hpp"
#include "epscan/canonical.hpp"
#include "epscan/definability.hpp"
#include "epscan/termalgebra.hpp"

namespace epscan {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

inline std::string fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline Json set_json(Subset s) {
  Json a = Json::array();
  for (Element e : subset_elements(s)) a.push_back(e);
  return a;
}

struct CheckRecord {
  std::string name;
  Verdict verdict = Verdict::Skipped;
  Json witnesses = Json::array();
  Json details = Json::object();
  double seconds = 0;

  Json to_json(bool timing) const {
    Json j;
    j["name"] = name;
    j["verdict"] = to_string(verdict);
    j["witnesses"] = witnesses;
    j["details"] = details;
    if (timing) j["seconds"] = seconds;
    return j;
  }
};

struct Report {
  std::string file;
  std::string hash;
  std::size_t carrier = 0;
  std::vector<CheckRecord> checks;
  Json stability;  // null when not computed

  Verdict overall() const {
    bool finding = false;
    for (const auto& c : checks) {
      if (c.verdict == Verdict::Fail) return Verdict::Fail;
      finding = finding || c.verdict == Verdict::Finding;
    }
    return finding ? Verdict::Finding : Verdict::Pass;
  }

  Json to_json(bool timing) const {
    Json j;
    j["tool"] = "epscan";
    j["version"] = kVersion;
    j["structure"] = {{"file", file}, {"fnv1a64", hash}, {"carrier", carrier}};
    Json cs = Json::array();
    std::size_t counts[4] = {0, 0, 0, 0};
    for (const auto& c : checks) {
      cs.push_back(c.to_json(timing));
      ++counts[static_cast<int>(c.verdict)];
    }
    j["checks"] = std::move(cs);
    if (!stability.is_null()) j["stability"] = stability;
    j["summary"] = {{"overall", to_string(overall())},
                    {"pass", counts[0]},
                    {"fail", counts[1]},
                    {"finding", counts[2]},
                    {"skipped", counts[3]}};
    return j;
  }
};

namespace detail {

template <class F>
CheckRecord timed(std::string name, F&& body) {
  auto t0 = std::chrono::steady_clock::now();
  CheckRecord r{std::move(name)};
  body(r);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline Json instance_json(const OperationInstance& v, const Lt1Algebra* l) {
  auto show = [&](AlgElem x) -> Json { return l ? set_json(l->set_of(x)) : Json(x); };
  Json j{{"op", v.op}, {"x", show(v.x)}, {"x2", show(v.x2)}};
  if (v.op == "meet" || v.op == "join") {
    j["y"] = show(v.y);
    j["y2"] = show(v.y2);
  }
  return j;
}

}  // namespace detail

inline Json stability_json(const StabilityReport& s) {
  Json j{{"e_dim1", set_json(s.e_dim1)},
         {"e_dim2", set_json(s.e_dim2)},
         {"u_dim1", s.u_dim1},
         {"u_dim2", s.u_dim2},
         {"dims_agree", s.dims_agree},
         {"dim_sensitive", s.dim_sensitive},
         {"saturated", s.saturated},
         {"brute_force_ran", s.brute_force_ran}};
  if (s.brute_force_ran) {
    j["brute_force_depth"] = s.brute_force_depth;
    j["brute_force_sets"] = s.brute_force_sets;
    j["brute_force_agrees"] = s.brute_force_agrees;
    j["brute_force_within_u"] = s.brute_force_within_u;
    if (s.brute_force_missing) j["brute_force_missing"] = set_json(*s.brute_force_missing);
  }
  return j;
}

/// E with witnesses, U as sorted element lists, the blocks of U with their
/// witnesses. Per-set witnesses are listed when U has at most `witness_limit`
/// members.
inline Json family_json(const DefinableFamily& fam, std::size_t witness_limit = 256) {
  Json j;
  j["carrier"] = fam.carrier_size();
  j["max_dim"] = fam.max_dim();
  j["rounds"] = fam.rounds();
  j["saturated"] = fam.saturated();
  j["functions_truncated"] = fam.functions_truncated();
  j["relations_truncated"] = fam.relations_truncated();
  Json e = Json::array();
  for (const auto& d : fam.elements())
    e.push_back({{"value", d.value}, {"term", to_string(d.term)}, {"round", d.round},
                 {"origin", d.origin}});
  j["E"] = std::move(e);
  std::vector<Subset> sets = fam.sets();
  std::sort(sets.begin(), sets.end());
  Json u = Json::array();
  for (Subset s : sets) u.push_back(set_json(s));
  j["U"] = std::move(u);
  Json blocks = Json::array();
  for (Subset b : fam.blocks())
    blocks.push_back({{"set", set_json(b)}, {"witness", to_string(fam.witness_formula(b))}});
  j["U_blocks"] = std::move(blocks);
  if (sets.size() <= witness_limit) {
    Json w = Json::array();
    for (Subset s : sets) w.push_back({{"set", set_json(s)}, {"witness", to_string(fam.witness_formula(s))}});
    j["U_witnesses"] = std::move(w);
  }
  return j;
}

inline Json canonical_json(const CanonicalModel& c) {
  Json els = Json::array();
  for (std::size_t i = 0; i < c.size(); ++i)
    els.push_back({{"index", i}, {"eta", c.eta(i)}, {"rep", to_string(c.elements[i].rep)}});
  return {{"size", c.size()},
          {"elements", std::move(els)},
          {"induced_choices", c.induced_choices},
          {"fallback_choices", c.fallback_choices},
          {"structure", write_structure(c.structure)}};
}

// ---------------------------------------------------------------------------
// Individual checks
// ---------------------------------------------------------------------------

inline CheckRecord axioms_record(const ChoiceStructure& m, const AxiomOptions& opt) {
  return detail::timed("axioms", [&](CheckRecord& r) {
    auto a = check_axioms(m, opt);
    r.verdict = a.pass() ? Verdict::Pass : Verdict::Fail;
    for (const auto& c : a.counterexamples) r.witnesses.push_back(c.describe());
    r.details = {{"exhaustive_depth", opt.exhaustive_depth},
                 {"formula_classes", a.formula_classes},
                 {"term_classes", a.term_classes},
                 {"enumeration_truncated", a.enumeration_truncated},
                 {"random_formulas", opt.random_formulas},
                 {"random_depth", opt.random_depth},
                 {"seed", opt.seed},
                 {"transfinity_instances", a.transfinity_instances},
                 {"extensionality_instances", a.extensionality_instances},
                 {"coherence_instances", a.coherence_instances},
                 {"substitution_instances", a.substitution_instances}};
  });
}

inline CheckRecord atomic_record(const CanonicalModel& c) {
  return detail::timed("atomic", [&](CheckRecord& r) {
    auto a = check_atomic(c);
    r.verdict = a.pass ? Verdict::Pass : Verdict::Fail;
    for (const auto& v : a.violations)
      r.witnesses.push_back({{"element", v.element}, {"rep", to_string(v.rep)}, {"value", v.got}});
    r.details = {{"checked", a.checked}};
  });
}

inline CheckRecord eta_record(const CanonicalModel& c) {
  return detail::timed("eta", [&](CheckRecord& r) {
    auto e = check_eta(c);
    r.verdict = e.pass() ? Verdict::Pass : Verdict::Fail;
    for (const auto& v : e.violations) r.witnesses.push_back(v);
    Json eta = Json::array();
    for (Element v : canonical_injection(c)) eta.push_back(v);
    r.details = {{"eta", std::move(eta)},
                 {"injective", e.injective},
                 {"homomorphism", e.homomorphism},
                 {"representatives", e.representatives}};
  });
}

inline CheckRecord elementary_record(const CanonicalModel& c, std::size_t depth, std::size_t samples,
                                     std::size_t sample_depth, std::uint64_t seed) {
  return detail::timed("elementary", [&](CheckRecord& r) {
    auto e = check_elementary(c, depth, samples, sample_depth, seed);
    r.verdict = e.pass ? Verdict::Pass : Verdict::Fail;
    if (e.counterexample)
      r.witnesses.push_back({{"formula", to_string(e.counterexample->formula)},
                             {"v0", e.counterexample->x},
                             {"v1", e.counterexample->y},
                             {"holds_in_canonical", e.counterexample->in_canonical}});
    r.details = {{"exhaustive_depth", e.exhaustive_depth},
                 {"exhaustive_formulas", e.exhaustive_formulas},
                 {"exhaustive_truncated", e.exhaustive_truncated},
                 {"sample_depth", e.sample_depth},
                 {"samples", e.samples},
                 {"seed", e.seed},
                 {"assignments", e.assignments}};
  });
}

/// The brute-force oracle enumerates formulas over the target, so it only
/// runs when the target carrier is at most `oracle_max_carrier`.
inline CheckRecord naturality_record(const std::vector<Element>& h, const CanonicalModel& c1,
                                     const CanonicalModel& c2, std::size_t oracle_max_carrier = 4) {
  return detail::timed("naturality", [&](CheckRecord& r) {
    auto l = lift_hom(h, c1, c2);
    const bool ran = c2.source.size() <= oracle_max_carrier;
    auto o = ran ? lift_oracle(h, c1, c2) : LiftOracle{};
    bool agree = !ran || (o.range_ok == l.range_ok && o.functional == l.functional &&
                          o.square_commutes == l.square_commutes);
    if (!l.homomorphism || !agree)
      r.verdict = Verdict::Fail;
    else
      r.verdict = l.pass() ? Verdict::Pass : Verdict::Finding;
    if (l.hom_problem) r.witnesses.push_back({{"homomorphism", *l.hom_problem}});
    if (l.range_witness) r.witnesses.push_back({{"range", *l.range_witness}});
    if (l.functional_witness) r.witnesses.push_back({{"functional", *l.functional_witness}});
    if (l.square_witness) r.witnesses.push_back({{"square", *l.square_witness}});
    Json lifted = Json::array();
    for (const auto& x : l.lifted) lifted.push_back(x ? Json(*x) : Json());
    r.details = {{"homomorphism", l.homomorphism},
                 {"range_ok", l.range_ok},
                 {"functional", l.functional},
                 {"square_commutes", l.square_commutes},
                 {"lifted", std::move(lifted)},
                 {"oracle", ran ? Json{{"ran", true},
                                       {"depth", o.depth},
                                       {"range_ok", o.range_ok},
                                       {"functional", o.functional},
                                       {"square_commutes", o.square_commutes},
                                       {"agrees", agree}}
                                : Json{{"ran", false}}}};
  });
}

inline CheckRecord lt_can_record(const Pipeline& p) {
  return detail::timed("lt-can", [&](CheckRecord& r) {
    const auto& k = p.kernel;
    bool sound = p.phi.surjective && p.phi.transfinite && k.verdicts_agree;
    if (k.kernel_factor) {
      const auto& f = *k.kernel_factor;
      sound = sound && f.well_defined && f.triangle && f.bijective &&
              f.commutes_with_operations.value_or(true);
    }
    r.verdict = !sound ? Verdict::Fail : k.congruence ? Verdict::Pass : Verdict::Finding;
    if (k.violation) r.witnesses.push_back(detail::instance_json(*k.violation, &p.lt1));
    if (p.phi.transfinity_witness)
      r.witnesses.push_back({{"transfinity", set_json(p.lt1.set_of(*p.phi.transfinity_witness))}});
    Json sizes = k.block_sizes;
    r.details = {{"lt1_size", p.lt1.size()},
                 {"canonical_size", p.canonical.size()},
                 {"phi_surjective", p.phi.surjective},
                 {"phi_transfinite", p.phi.transfinite},
                 {"kernel_blocks", std::move(sizes)},
                 {"kernel_congruence", k.congruence},
                 {"brute_force_ran", k.brute_force_ran},
                 {"brute_force_agrees", k.verdicts_agree}};
    if (k.kernel_factor) {
      const auto& f = *k.kernel_factor;
      Json ff{{"quotient_size", k.kernel_quotient->algebra.size()},
              {"well_defined", f.well_defined},
              {"bijective", f.bijective},
              {"triangle", f.triangle}};
      if (f.commutes_with_operations) ff["commutes_with_operations"] = *f.commutes_with_operations;
      r.details["kernel_quotient"] = std::move(ff);
    }
    r.details["generated"] = {{"ideal", set_json(p.lt1.set_of(k.generated_ideal))},
                              {"quotient_size", k.generated_quotient.algebra.size()},
                              {"degenerate", k.generated_quotient.degenerate},
                              {"equals_kernel", k.generated_equals_kernel},
                              {"phi_factors", k.phi_factors_through_generated}};
  });
}

inline Json rich_json(const RichReport& x) {
  Json j{{"nr0_size", x.nr0_size},
         {"nr0_is_two", x.nr0_is_two},
         {"rich", x.rich},
         {"c0_preserves_join", x.c0_preserves_join},
         {"c0_preserves_complement", x.c0_preserves_complement}};
  if (x.complement_witness) j["complement_witness"] = *x.complement_witness;
  if (x.rich_witness) j["rich_witness"] = *x.rich_witness;
  return j;
}

inline CheckRecord rich_record(const Pipeline& p) {
  return detail::timed("rich", [&](CheckRecord& r) {
    const MonadicAlgebra* q = p.kernel.kernel_quotient ? &p.kernel.kernel_quotient->algebra : nullptr;
    auto x = check_rich(p.lt1, q);
    r.verdict = x.verdict();
    if (x.lt1.rich_witness) r.witnesses.push_back({{"not_rich_at", set_json(p.lt1.set_of(*x.lt1.rich_witness))}});
    if (!x.lt1.nr0_is_two) r.witnesses.push_back({{"nr0_size", x.lt1.nr0_size}});
    r.details["lt1"] = rich_json(x.lt1);
    if (x.lt1.complement_witness)
      r.details["lt1"]["complement_witness"] = set_json(p.lt1.set_of(*x.lt1.complement_witness));
    if (x.quotient) {
      if (!x.quotient->nr0_is_two)
        r.witnesses.push_back({{"quotient_nr0_size", x.quotient->nr0_size},
                               {"quotient_size", q->size()}});
      r.details["quotient"] = rich_json(*x.quotient);
    }
  });
}

inline CheckRecord main_record(const ChoiceStructure& m) {
  return detail::timed("main", [&](CheckRecord& r) {
    auto t = check_theorem_main(m);
    r.verdict = t.verdict;
    if (!t.reason.empty()) r.witnesses.push_back(t.reason);
    if (t.verdict == Verdict::Skipped) return;
    r.details = {{"kind", to_string(t.kind)},
                 {"canonical_size", t.canonical_size},
                 {"term_size_generated", t.term_size_generated},
                 {"term_degenerate", t.term_degenerate},
                 {"part1", to_string(t.part1)},
                 {"part1_generated", t.part1_generated}};
    if (t.term_size_kernel) {
      r.details["term_size_kernel"] = *t.term_size_kernel;
      r.details["part1_kernel"] = *t.part1_kernel;
    }
    r.details["part2"] = to_string(t.part2);
    if (t.biconditional) {
      r.details["lhs_isomorphic"] = *t.lhs_isomorphic;
      r.details["rhs_nr0_two"] = *t.rhs_nr0_two;
      r.details["biconditional"] = *t.biconditional;
    }
  });
}

inline CheckRecord sigma_record(const ChoiceStructure& m) {
  return detail::timed("sigma", [&](CheckRecord& r) {
    auto s = check_sigma_prop(m);
    r.verdict = s.verdict;
    if (!s.reason.empty()) r.witnesses.push_back(s.reason);
    if (s.verdict == Verdict::Skipped) return;
    r.details = {{"lt1_size", s.lt1_size},
                 {"canonical_size", s.canonical_size},
                 {"lt1_built", s.lt1_built},
                 {"nr0_two", s.nr0_two},
                 {"kernel_congruence", s.kernel_congruence},
                 {"generated_quotient_isomorphic", s.generated_quotient_isomorphic}};
    if (s.kernel_quotient_isomorphic) r.details["kernel_quotient_isomorphic"] = *s.kernel_quotient_isomorphic;
  });
}

}  // namespace epscan
