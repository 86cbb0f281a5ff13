#pragma once

// Semantic checks of the epsilon axioms on one structure:
//   transfinity     phi[t/v] -> phi[(eps v phi)/v]
//   extensionality  equal extensions at v give equal epsilon values
//   coherence       direct quantifier evaluation agrees with desugaring
//   substitution    phi[t/v] under a  ==  phi under a[v := t^a]
//
// The exhaustive pass takes one formula and one term per semantic class over
// v0, v1 (FormulaEnumerator); the sampled pass draws seeded random formulas.

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "epscan/enumerate.hpp"
#include "epscan/eval.hpp"
#include "epscan/random.hpp"
#include "epscan/syntax.hpp"

namespace epscan {

struct AxiomCounterexample {
  std::string axiom;
  Expr phi;
  std::optional<Expr> other;  // t for transfinity/substitution, psi for extensionality
  VarIndex var = 0;
  std::vector<Element> assignment;
  std::string describe() const {
    std::string s = axiom + ": " + to_string(phi);
    if (other) s += " with " + to_string(*other);
    s += " at v" + std::to_string(var) + ", assignment [";
    for (std::size_t i = 0; i < assignment.size(); ++i)
      s += (i ? " " : "") + std::to_string(assignment[i]);
    return s + "]";
  }
};

struct AxiomOptions {
  std::size_t exhaustive_depth = 3;
  std::size_t random_formulas = 1000;
  std::size_t random_depth = 4;
  std::size_t random_term_depth = 2;
  std::size_t substitution_triples = 1000;
  std::uint64_t seed = 0;
};

struct AxiomReport {
  std::size_t formula_classes = 0;
  std::size_t term_classes = 0;
  bool enumeration_truncated = false;
  std::size_t transfinity_instances = 0;
  std::size_t extensionality_instances = 0;
  std::size_t coherence_instances = 0;
  std::size_t substitution_instances = 0;
  std::vector<AxiomCounterexample> counterexamples;  // at most one per axiom
  double seconds = 0;
  bool pass() const { return counterexamples.empty() && !enumeration_truncated; }
};

namespace detail {

class AxiomChecker {
 public:
  AxiomChecker(const ChoiceStructure& m, AxiomReport& r) : m_(m), r_(r) {}

  // phi over free variables among v0, v1; every check runs on all n^2 cells.
  void formula(const Expr& phi, const std::vector<Expr>& terms) {
    Evaluator ev(m_);
    const Expr plain = desugar(phi);
    for (VarIndex v = 0; v < 2; ++v) {
      const Expr witness = substitute(phi, mk::eps(v, phi), v);
      for (const Expr& t : terms) {
        const Expr inst = substitute(phi, t, v);
        for_cells([&](Assignment& a, Element x, Element y) {
          ++r_.transfinity_instances;
          if (ev.formula(inst, a) && !ev.formula(witness, a))
            fail("transfinity", phi, t, v, {x, y});
        });
      }
      // Extensionality: the epsilon value is a function of the extension.
      const VarIndex w = 1 - v;
      for (Element x = 0; x < m_.size(); ++x) {
        Assignment a;
        a.bind(w, x);
        Subset ext = ev.extension(phi, v, a);
        Element val = ev.term(mk::eps(v, phi), a);
        ++r_.extensionality_instances;
        auto [it, fresh] = eps_by_extension_.emplace(ext, std::make_pair(val, phi));
        if (!fresh && it->second.first != val)
          fail("extensionality", phi, it->second.second, v, {x});
      }
    }
    for_cells([&](Assignment& a, Element x, Element y) {
      ++r_.coherence_instances;
      if (ev.formula(phi, a) != ev.formula(plain, a)) fail("coherence", phi, std::nullopt, 0, {x, y});
    });
  }

  void substitution(const Expr& phi, const Expr& t, VarIndex v, Assignment a,
                    std::vector<Element> shown) {
    Evaluator ev(m_);
    ++r_.substitution_instances;
    bool lhs = ev.formula(substitute(phi, t, v), a);
    Assignment b = a;
    b.bind(v, ev.term(t, a));
    if (lhs != ev.formula(phi, b)) fail("substitution", phi, t, v, std::move(shown));
  }

 private:
  template <class F>
  void for_cells(F&& f) {
    for (Element x = 0; x < m_.size(); ++x)
      for (Element y = 0; y < m_.size(); ++y) {
        Assignment a{x, y};
        f(a, x, y);
      }
  }

  void fail(const char* axiom, const Expr& phi, std::optional<Expr> other, VarIndex v,
            std::vector<Element> cell) {
    for (const auto& c : r_.counterexamples)
      if (c.axiom == axiom) return;
    r_.counterexamples.push_back({axiom, phi, std::move(other), v, std::move(cell)});
  }

  const ChoiceStructure& m_;
  AxiomReport& r_;
  std::map<Subset, std::pair<Element, Expr>> eps_by_extension_;
};

}  // namespace detail

/// Transfinity, extensionality and coherence on every formula class of depth
/// <= exhaustive_depth paired with every term class of the same depth, then
/// on random formulas; the substitution lemma on random triples.
inline AxiomReport check_axioms(const ChoiceStructure& m, const AxiomOptions& opt = {}) {
  auto t0 = std::chrono::steady_clock::now();
  AxiomReport r;
  detail::AxiomChecker check(m, r);

  FormulaEnumerator en({&m}, opt.exhaustive_depth);
  r.enumeration_truncated = en.truncated();
  r.formula_classes = en.formulas().size();
  r.term_classes = en.terms().size();
  std::vector<Expr> terms;
  for (const auto& t : en.terms()) terms.push_back(t.expr);
  for (const auto& f : en.formulas()) check.formula(f.expr, terms);

  std::mt19937_64 rng(opt.seed);
  RandomOptions two{.vars = 2};
  for (std::size_t i = 0; i < opt.random_formulas; ++i) {
    Expr phi = random_formula(m.signature(), rng, 1 + rng() % opt.random_depth, two);
    Expr t = random_term(m.signature(), rng, rng() % (opt.random_term_depth + 1), two);
    check.formula(phi, {t});
  }

  RandomOptions three{.vars = 3};
  for (std::size_t i = 0; i < opt.substitution_triples; ++i) {
    Expr phi = random_formula(m.signature(), rng, 1 + rng() % opt.random_depth, three);
    Expr t = random_term(m.signature(), rng, rng() % (opt.random_term_depth + 1), three);
    VarIndex v = static_cast<VarIndex>(rng() % 3);
    Assignment a;
    std::vector<Element> shown;
    for (VarIndex w = 0; w < 3; ++w) {
      shown.push_back(static_cast<Element>(rng() % m.size()));
      a.bind(w, shown.back());
    }
    check.substitution(phi, t, v, a, shown);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace epscan
