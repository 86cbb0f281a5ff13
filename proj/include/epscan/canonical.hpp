#pragma once

// Canonical model over the epsilon-denotations of a finite choice structure,
// the canonical injection eta, and the checkers built on them.
//
// Canonical elements are identified with their values in the source, so the
// universe is {choice(S) : S definable}, each element carrying a closed
// epsilon term as representative. Interpretations are read off by asking the
// source whether sentences about the representatives hold.

#include <cstdlib>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "epscan/definability.hpp"
#include "epscan/enumerate.hpp"
#include "epscan/eval.hpp"
#include "epscan/random.hpp"
#include "epscan/structure.hpp"
#include "epscan/syntax.hpp"

namespace epscan {

class CanonicalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CanonicalElement {
  Expr rep;       // closed epsilon term
  Element value;  // its value in the source; eta of this element
};

struct CanonicalModel {
  ChoiceStructure source;
  ChoiceStructure structure;  // over canonical indices 0..size-1
  std::vector<CanonicalElement> elements;
  std::vector<int> index_of_value;  // source element -> canonical index or -1
  std::size_t induced_choices = 0;  // subsets whose choice comes from the source rule
  std::size_t fallback_choices = 0; // subsets falling back to the least index

  std::size_t size() const { return elements.size(); }
  Element eta(std::size_t i) const { return elements[i].value; }
};

namespace detail {

/// (eps v0 (= v0 t)) for a closed term t.
inline Expr epsilon_of_term(const Expr& t) { return mk::eps(0, mk::equal(mk::var(0), t)); }

inline Expr representative(const DefinableElement& d) {
  return d.term.kind() == Kind::Eps ? d.term : epsilon_of_term(d.term);
}

}  // namespace detail

/// Builds the canonical model; the family must be saturated.
inline CanonicalModel build_canonical_model(const ChoiceStructure& m, const DefinableFamily& fam) {
  if (!fam.saturated()) throw CanonicalError("definable family is not saturated");
  if (fam.carrier_size() != m.size()) throw CanonicalError("family built for another structure");
  CanonicalModel c;
  c.source = m;
  Subset values = 0;
  for (Subset s : fam.sets()) values |= singleton(m.choose(s));
  c.index_of_value.assign(m.size(), -1);
  for (const auto& d : fam.elements()) {
    if (!contains(values, d.value)) continue;
    c.index_of_value[d.value] = static_cast<int>(c.elements.size());
    c.elements.push_back({detail::representative(d), d.value});
  }
  if (subset_elements(values).size() != c.elements.size())
    throw CanonicalError("a chosen element has no epsilon witness");

  const Signature& sig = m.signature();
  const std::size_t n = c.size();
  auto index_of = [&](Element v, const std::string& what) -> Element {
    if (c.index_of_value[v] < 0)
      throw CanonicalError(what + " has value " + std::to_string(v) +
                           " outside the canonical universe");
    return static_cast<Element>(c.index_of_value[v]);
  };

  std::vector<std::vector<std::uint8_t>> rels;
  for (const auto& r : sig.relations()) {
    std::vector<std::uint8_t> t(ChoiceStructure::power(n, r.arity), 0);
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
      std::vector<Expr> args;
      std::size_t rest = idx;
      std::vector<std::size_t> digits(r.arity);
      for (std::size_t i = r.arity; i-- > 0;) {
        digits[i] = rest % n;
        rest /= n;
      }
      for (auto dgt : digits) args.push_back(c.elements[dgt].rep);
      t[idx] = theory_holds(m, mk::rel(r.name, std::move(args))) ? 1 : 0;
    }
    rels.push_back(std::move(t));
  }
  std::vector<std::vector<Element>> funs;
  for (const auto& f : sig.functions()) {
    std::vector<Element> t(ChoiceStructure::power(n, f.arity), 0);
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
      std::vector<Expr> args;
      std::size_t rest = idx;
      std::vector<std::size_t> digits(f.arity);
      for (std::size_t i = f.arity; i-- > 0;) {
        digits[i] = rest % n;
        rest /= n;
      }
      for (auto dgt : digits) args.push_back(c.elements[dgt].rep);
      Expr term = detail::epsilon_of_term(mk::app(f.name, std::move(args)));
      t[idx] = index_of(eval_term(m, {}, term), to_string(term));
    }
    funs.push_back(std::move(t));
  }
  std::vector<Element> consts;
  for (const auto& name : sig.constants()) {
    Expr term = detail::epsilon_of_term(mk::constant(name));
    consts.push_back(index_of(eval_term(m, {}, term), to_string(term)));
  }
  // Induced choice: through eta where the image is definable, else least index.
  std::vector<Element> table(std::size_t{1} << n);
  for (std::size_t t = 0; t < table.size(); ++t) {
    Subset image = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (t >> i & 1) image |= singleton(c.elements[i].value);
    if (fam.contains(image)) {
      table[t] = index_of(m.choose(image), "choice of " + subset_to_string(image));
      ++c.induced_choices;
    } else {
      table[t] = static_cast<Element>(std::countr_zero(static_cast<Subset>(t)));
      ++c.fallback_choices;
    }
  }
  c.structure = ChoiceStructure::make(sig, n, std::move(rels), std::move(funs),
                                      std::move(consts), ExplicitTable{std::move(table)});
  return c;
}

inline CanonicalModel build_canonical_model(const ChoiceStructure& m) {
  return build_canonical_model(m, definable_closure(m));
}

inline std::vector<Element> canonical_injection(const CanonicalModel& c) {
  std::vector<Element> eta;
  for (const auto& e : c.elements) eta.push_back(e.value);
  return eta;
}

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

struct AtomicReport {
  bool pass = true;
  std::size_t checked = 0;
  struct Violation {
    std::size_t element;
    Expr rep;
    Element got;
  };
  std::vector<Violation> violations;
};

/// Every canonical element is the value of its own representative in C.
inline AtomicReport check_atomic(const CanonicalModel& c) {
  AtomicReport r;
  Evaluator ev(c.structure);
  for (std::size_t i = 0; i < c.size(); ++i) {
    Assignment a;
    Element got = ev.term(c.elements[i].rep, a);
    ++r.checked;
    if (got != i) r.violations.push_back({i, c.elements[i].rep, got});
  }
  r.pass = r.violations.empty();
  return r;
}

struct EtaReport {
  bool injective = true;
  bool homomorphism = true;       // relations preserved and reflected, functions, constants
  bool representatives = true;    // eta(i) = value of rep_i in the source
  std::vector<std::string> violations;
  bool pass() const { return injective && homomorphism && representatives; }
};

inline EtaReport check_eta(const CanonicalModel& c) {
  EtaReport r;
  const auto& m = c.source;
  const auto& cs = c.structure;
  const std::size_t n = c.size();
  std::vector<bool> hit(m.size(), false);
  for (std::size_t i = 0; i < n; ++i) {
    if (hit[c.eta(i)]) {
      r.injective = false;
      r.violations.push_back("eta not injective at value " + std::to_string(c.eta(i)));
    }
    hit[c.eta(i)] = true;
    Element v = eval_term(m, {}, c.elements[i].rep);
    if (v != c.eta(i)) {
      r.representatives = false;
      r.violations.push_back("representative of " + std::to_string(i) + " evaluates to " +
                             std::to_string(v));
    }
  }
  const Signature& sig = m.signature();
  std::vector<Element> args, image;
  for (std::size_t ri = 0; ri < sig.relations().size(); ++ri) {
    const std::size_t arity = sig.relations()[ri].arity;
    for (std::size_t idx = 0; idx < ChoiceStructure::power(n, arity); ++idx) {
      args = cs.tuple_at(idx, arity);
      image.clear();
      for (Element a : args) image.push_back(c.eta(a));
      if (cs.holds(ri, args) != m.holds(ri, image)) {
        r.homomorphism = false;
        r.violations.push_back("relation " + sig.relations()[ri].name + " differs at tuple " +
                               std::to_string(idx));
      }
    }
  }
  for (std::size_t fi = 0; fi < sig.functions().size(); ++fi) {
    const std::size_t arity = sig.functions()[fi].arity;
    for (std::size_t idx = 0; idx < ChoiceStructure::power(n, arity); ++idx) {
      args = cs.tuple_at(idx, arity);
      image.clear();
      for (Element a : args) image.push_back(c.eta(a));
      if (c.eta(cs.apply(fi, args)) != m.apply(fi, image)) {
        r.homomorphism = false;
        r.violations.push_back("function " + sig.functions()[fi].name + " differs at tuple " +
                               std::to_string(idx));
      }
    }
  }
  for (std::size_t ci = 0; ci < sig.constants().size(); ++ci)
    if (c.eta(cs.constant(ci)) != m.constant(ci)) {
      r.homomorphism = false;
      r.violations.push_back("constant " + sig.constants()[ci] + " differs");
    }
  return r;
}

struct ElementaryCounterexample {
  Expr formula;
  Element x, y;  // canonical indices bound to v0, v1
  bool in_canonical;
};

struct ElementaryReport {
  bool pass = true;
  std::size_t exhaustive_depth = 0;
  std::size_t exhaustive_formulas = 0;  // semantic classes checked
  bool exhaustive_truncated = false;
  std::size_t sample_depth = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t assignments = 0;
  std::optional<ElementaryCounterexample> counterexample;
};

/// C |= phi[x, y] iff source |= phi[eta x, eta y] for formulas over v0, v1.
/// Exhaustive up to `depth`: the enumerator runs over both structures
/// jointly, so each pair of truth tables is represented and the property,
/// which depends on that pair only, is decided for every formula. Then
/// `samples` random formulas at `sample_depth`.
inline ElementaryReport check_elementary(const CanonicalModel& c, std::size_t depth = 2,
                                         std::size_t samples = 500,
                                         std::size_t sample_depth = 3,
                                         std::uint64_t seed = 0) {
  ElementaryReport r;
  r.exhaustive_depth = depth;
  r.sample_depth = sample_depth;
  r.seed = seed;
  const std::size_t n = c.size();
  FormulaEnumerator en({&c.structure, &c.source}, depth);
  r.exhaustive_formulas = en.formulas().size();
  r.exhaustive_truncated = en.truncated();
  for (const auto& f : en.formulas()) {
    for (Element x = 0; x < n && r.pass; ++x)
      for (Element y = 0; y < n && r.pass; ++y) {
        ++r.assignments;
        bool in_c = en.holds(f, 0, x, y);
        if (in_c != en.holds(f, 1, c.eta(x), c.eta(y))) {
          r.pass = false;
          r.counterexample = ElementaryCounterexample{f.expr, x, y, in_c};
        }
      }
    if (!r.pass) return r;
  }
  std::mt19937_64 rng(seed);
  Evaluator in_c(c.structure), in_m(c.source);
  for (std::size_t s = 0; s < samples; ++s) {
    Expr phi = random_formula(c.source.signature(), rng, sample_depth, {.vars = 2});
    ++r.samples;
    for (Element x = 0; x < n; ++x)
      for (Element y = 0; y < n; ++y) {
        Assignment a{x, y}, b{c.eta(x), c.eta(y)};
        ++r.assignments;
        bool vc = in_c.formula(phi, a);
        if (vc != in_m.formula(phi, b)) {
          r.pass = false;
          r.counterexample = ElementaryCounterexample{phi, x, y, vc};
          return r;
        }
      }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Homomorphisms and naturality
// ---------------------------------------------------------------------------

/// Reads "i -> j" lines; '#' starts a comment. The map must be total on the
/// source carrier and land in the target carrier.
inline std::vector<Element> parse_hom(const std::string& text, std::size_t from_size,
                                      std::size_t to_size) {
  std::vector<int> map(from_size, -1);
  std::istringstream in(text);
  std::string line;
  for (std::size_t ln = 1; std::getline(in, line); ++ln) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string a, arrow, b, extra;
    if (!(ls >> a)) continue;
    if (!(ls >> arrow >> b) || arrow != "->" || (ls >> extra))
      throw StructureError("expected 'i -> j'", ln);
    auto num = [&](const std::string& s, std::size_t bound) {
      std::size_t pos = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(s, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != s.size() || v >= bound)
        throw StructureError("element '" + s + "' out of range", ln);
      return static_cast<Element>(v);
    };
    Element x = num(a, from_size), y = num(b, to_size);
    if (map[x] >= 0 && map[x] != static_cast<int>(y))
      throw StructureError("element " + a + " mapped twice", ln);
    map[x] = static_cast<int>(y);
  }
  std::vector<Element> out;
  for (std::size_t x = 0; x < from_size; ++x) {
    if (map[x] < 0) throw StructureError("map is not total: " + std::to_string(x) + " unmapped");
    out.push_back(static_cast<Element>(map[x]));
  }
  return out;
}

inline std::vector<Element> load_hom(const std::string& path, std::size_t from_size,
                                     std::size_t to_size) {
  std::ifstream in(path);
  if (!in) throw StructureError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_hom(ss.str(), from_size, to_size);
}

/// First place where h fails to be a homomorphism of the first-order part.
inline std::optional<std::string> hom_violation(const ChoiceStructure& a, const ChoiceStructure& b,
                                                const std::vector<Element>& h) {
  if (!(a.signature() == b.signature())) return "signatures differ";
  if (h.size() != a.size()) return "map has wrong domain size";
  const Signature& sig = a.signature();
  std::vector<Element> args, image;
  for (std::size_t fi = 0; fi < sig.functions().size(); ++fi) {
    const std::size_t arity = sig.functions()[fi].arity;
    for (std::size_t idx = 0; idx < ChoiceStructure::power(a.size(), arity); ++idx) {
      args = a.tuple_at(idx, arity);
      image.clear();
      for (Element x : args) image.push_back(h[x]);
      if (h[a.apply(fi, args)] != b.apply(fi, image))
        return "function " + sig.functions()[fi].name + " not preserved at tuple " +
               std::to_string(idx);
    }
  }
  for (std::size_t ri = 0; ri < sig.relations().size(); ++ri) {
    const std::size_t arity = sig.relations()[ri].arity;
    for (std::size_t idx = 0; idx < ChoiceStructure::power(a.size(), arity); ++idx) {
      args = a.tuple_at(idx, arity);
      image.clear();
      for (Element x : args) image.push_back(h[x]);
      if (a.holds(ri, args) && !b.holds(ri, image))
        return "relation " + sig.relations()[ri].name + " not preserved at tuple " +
               std::to_string(idx);
    }
  }
  for (std::size_t ci = 0; ci < sig.constants().size(); ++ci)
    if (h[a.constant(ci)] != b.constant(ci)) return "constant " + sig.constants()[ci] + " not preserved";
  return std::nullopt;
}

struct LiftReport {
  bool homomorphism = true;
  std::optional<std::string> hom_problem;
  bool range_ok = true;
  std::optional<Element> range_witness;  // source-1 value whose image is not denotable in 2
  bool functional = true;                // h* total and single-valued
  std::optional<std::size_t> functional_witness;  // canonical index of C1
  bool square_commutes = true;
  std::optional<std::size_t> square_witness;
  std::vector<std::optional<std::size_t>> lifted;  // h*: C1 index -> C2 index
  bool pass() const { return homomorphism && range_ok && functional && square_commutes; }
};

/// h* relates canonical elements i of C1 and j of C2 when h(eta1 i) = eta2 j.
inline LiftReport lift_hom(const std::vector<Element>& h, const CanonicalModel& c1,
                           const CanonicalModel& c2) {
  LiftReport r;
  r.hom_problem = hom_violation(c1.source, c2.source, h);
  r.homomorphism = !r.hom_problem;
  if (h.size() != c1.source.size()) return r;
  for (std::size_t i = 0; i < c1.size(); ++i) {
    Element target = h[c1.eta(i)];
    bool found = false;
    for (std::size_t j = 0; j < c2.size(); ++j)
      if (c2.eta(j) == target) found = true;
    if (!found && r.range_ok) {
      r.range_ok = false;
      r.range_witness = c1.eta(i);
    }
  }
  r.lifted.assign(c1.size(), std::nullopt);
  for (std::size_t i = 0; i < c1.size(); ++i) {
    std::size_t matches = 0;
    for (std::size_t j = 0; j < c2.size(); ++j)
      if (c2.eta(j) == h[c1.eta(i)]) {
        ++matches;
        r.lifted[i] = j;
      }
    if (matches != 1) {
      r.lifted[i] = std::nullopt;
      if (r.functional) r.functional_witness = i;
      r.functional = false;
    }
  }
  for (std::size_t i = 0; i < c1.size(); ++i) {
    if (!r.lifted[i]) continue;
    if (c2.eta(*r.lifted[i]) != h[c1.eta(i)] && r.square_commutes) {
      r.square_commutes = false;
      r.square_witness = i;
    }
  }
  return r;
}

/// Independent recomputation of the lift verdicts. Denotable values of the
/// target come from brute-force enumeration of one-variable formulas, and
/// canonical elements are identified by evaluating their representatives
/// rather than by stored values.
struct LiftOracle {
  bool range_ok = true;
  bool functional = true;
  bool square_commutes = true;
  std::size_t depth = 0;
};

inline LiftOracle lift_oracle(const std::vector<Element>& h, const CanonicalModel& c1,
                              const CanonicalModel& c2, std::size_t depth = 4) {
  LiftOracle o;
  o.depth = depth;
  const ChoiceStructure& m1 = c1.source;
  const ChoiceStructure& m2 = c2.source;
  auto sets = unary_definable_sets(m2, depth);
  std::vector<bool> denotable(m2.size(), false);
  for (std::size_t s = 0; s < sets.size(); ++s)
    if (sets[s]) denotable[m2.choose(static_cast<Subset>(s))] = true;
  std::vector<Element> rep2;
  for (const auto& e : c2.elements) rep2.push_back(eval_term(m2, {}, e.rep));
  for (const auto& e : c1.elements) {
    Element image = h.at(eval_term(m1, {}, e.rep));
    if (!denotable[image]) o.range_ok = false;
    std::size_t hits = 0, last = 0;
    for (std::size_t j = 0; j < rep2.size(); ++j)
      if (rep2[j] == image) ++hits, last = j;
    if (hits != 1) {
      o.functional = false;
      continue;
    }
    if (eval_term(m2, {}, c2.elements[last].rep) != image) o.square_commutes = false;
  }
  return o;
}

}  // namespace epscan
