#pragma once

// Exhaustive enumeration of formulas modulo semantic equivalence.
//
// FormulaEnumerator walks the language over variables v0, v1 by syntactic
// depth and keeps one representative per extension. Extensions are computed
// compositionally from the tables of the subexpressions, independent of
// Evaluator, and over several structures at once so that a representative
// stands for every formula agreeing with it in all of them.
//
// unary_definable_sets is the brute-force definability oracle: every
// extension of a formula in the single variable v0 up to a logical depth.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "epscan/structure.hpp"
#include "epscan/syntax.hpp"

namespace epscan {

struct EnumeratedTerm {
  Expr expr;
  std::size_t depth;
  std::vector<std::uint8_t> values;  // one per cell, all views concatenated
};

struct EnumeratedFormula {
  Expr expr;
  std::size_t depth;
  std::vector<std::uint64_t> bits;  // one bit per cell, all views concatenated
};

struct EnumerationLimits {
  std::size_t max_terms = 20000;
  std::size_t max_formulas = 200000;
};

class FormulaEnumerator {
 public:
  /// All views must share one signature. Cell (x, y) of a view stands for the
  /// assignment v0 := x, v1 := y.
  FormulaEnumerator(std::vector<const ChoiceStructure*> views, std::size_t depth,
                    bool sugar = true, EnumerationLimits limits = {})
      : views_(std::move(views)), sugar_(sugar), limits_(limits) {
    if (views_.empty()) throw std::invalid_argument("no structures to enumerate over");
    for (const auto* v : views_) {
      if (!(v->signature() == views_[0]->signature()))
        throw std::invalid_argument("enumerator views must share a signature");
      offset_.push_back(cells_);
      cells_ += v->size() * v->size();
    }
    words_ = (cells_ + 63) / 64;
    run(depth);
  }

  const std::vector<EnumeratedTerm>& terms() const { return terms_; }
  const std::vector<EnumeratedFormula>& formulas() const { return formulas_; }
  bool truncated() const { return truncated_; }
  std::size_t views() const { return views_.size(); }

  bool holds(const EnumeratedFormula& f, std::size_t view, Element x, Element y) const {
    std::size_t c = cell(view, x, y);
    return (f.bits[c / 64] >> (c % 64)) & 1u;
  }
  Element value(const EnumeratedTerm& t, std::size_t view, Element x, Element y) const {
    return t.values[cell(view, x, y)];
  }

 private:
  using Bits = std::vector<std::uint64_t>;
  using Values = std::vector<std::uint8_t>;

  std::size_t cell(std::size_t view, Element x, Element y) const {
    return offset_[view] + x * views_[view]->size() + y;
  }

  static std::string key_of(const void* p, std::size_t bytes, char tag) {
    std::string k(static_cast<const char*>(p), bytes);
    k.push_back(tag);
    return k;
  }

  bool get(const Bits& b, std::size_t c) const { return (b[c / 64] >> (c % 64)) & 1u; }
  void set(Bits& b, std::size_t c) const { b[c / 64] |= std::uint64_t{1} << (c % 64); }

  bool add_term(Expr e, std::size_t d, Values v) {
    if (terms_.size() >= limits_.max_terms) {
      truncated_ = true;
      return false;
    }
    if (!term_keys_.insert(key_of(v.data(), v.size(), 't')).second) return false;
    terms_.push_back({std::move(e), d, std::move(v)});
    return true;
  }

  bool add_formula(Expr e, std::size_t d, Bits b) {
    if (formulas_.size() >= limits_.max_formulas) {
      truncated_ = true;
      return false;
    }
    char tag = e.has_sugar() ? 's' : 'c';
    if (!formula_keys_.insert(key_of(b.data(), b.size() * 8, tag)).second) return false;
    formulas_.push_back({std::move(e), d, std::move(b)});
    return true;
  }

  Values var_values(VarIndex v) const {
    Values out(cells_);
    for (std::size_t w = 0; w < views_.size(); ++w) {
      std::size_t n = views_[w]->size();
      for (Element x = 0; x < n; ++x)
        for (Element y = 0; y < n; ++y) out[cell(w, x, y)] = static_cast<std::uint8_t>(v == 0 ? x : y);
    }
    return out;
  }

  Values const_values(std::size_t ci) const {
    Values out(cells_);
    for (std::size_t w = 0; w < views_.size(); ++w) {
      std::size_t n = views_[w]->size();
      for (std::size_t c = 0; c < n * n; ++c)
        out[offset_[w] + c] = static_cast<std::uint8_t>(views_[w]->constant(ci));
    }
    return out;
  }

  Values apply_values(std::size_t fi, const std::vector<const Values*>& args) const {
    Values out(cells_);
    std::vector<Element> buf(args.size());
    for (std::size_t w = 0; w < views_.size(); ++w) {
      std::size_t n = views_[w]->size();
      for (std::size_t c = offset_[w]; c < offset_[w] + n * n; ++c) {
        for (std::size_t i = 0; i < args.size(); ++i) buf[i] = (*args[i])[c];
        out[c] = static_cast<std::uint8_t>(views_[w]->apply(fi, buf.data()));
      }
    }
    return out;
  }

  Values eps_values(VarIndex v, const Bits& body) const {
    Values out(cells_);
    for (std::size_t w = 0; w < views_.size(); ++w) {
      const auto& m = *views_[w];
      std::size_t n = m.size();
      for (Element other = 0; other < n; ++other) {
        Subset s = 0;
        for (Element k = 0; k < n; ++k)
          if (get(body, v == 0 ? cell(w, k, other) : cell(w, other, k))) s |= singleton(k);
        auto val = static_cast<std::uint8_t>(m.choose(s));
        for (Element k = 0; k < n; ++k)
          out[v == 0 ? cell(w, k, other) : cell(w, other, k)] = val;
      }
    }
    return out;
  }

  Bits quant_bits(VarIndex v, const Bits& body, bool exists) const {
    Bits out(words_, 0);
    for (std::size_t w = 0; w < views_.size(); ++w) {
      std::size_t n = views_[w]->size();
      for (Element other = 0; other < n; ++other) {
        bool acc = !exists;
        for (Element k = 0; k < n; ++k) {
          bool b = get(body, v == 0 ? cell(w, k, other) : cell(w, other, k));
          acc = exists ? (acc || b) : (acc && b);
        }
        if (acc)
          for (Element k = 0; k < n; ++k) set(out, v == 0 ? cell(w, k, other) : cell(w, other, k));
      }
    }
    return out;
  }

  Bits equal_bits(const Values& a, const Values& b) const {
    Bits out(words_, 0);
    for (std::size_t c = 0; c < cells_; ++c)
      if (a[c] == b[c]) set(out, c);
    return out;
  }

  Bits rel_bits(std::size_t ri, const std::vector<const Values*>& args) const {
    Bits out(words_, 0);
    std::vector<Element> buf(args.size());
    for (std::size_t w = 0; w < views_.size(); ++w) {
      std::size_t n = views_[w]->size();
      for (std::size_t c = offset_[w]; c < offset_[w] + n * n; ++c) {
        for (std::size_t i = 0; i < args.size(); ++i) buf[i] = (*args[i])[c];
        if (views_[w]->holds(ri, buf.data())) set(out, c);
      }
    }
    return out;
  }

  Bits not_bits(const Bits& a) const {
    Bits out(words_);
    for (std::size_t i = 0; i < words_; ++i) out[i] = ~a[i];
    if (cells_ % 64) out.back() &= (std::uint64_t{1} << (cells_ % 64)) - 1;
    return out;
  }

  template <class Op>
  Bits combine(const Bits& a, const Bits& b, Op op) const {
    Bits out(words_);
    for (std::size_t i = 0; i < words_; ++i) out[i] = op(a[i], b[i]);
    if (cells_ % 64) out.back() &= (std::uint64_t{1} << (cells_ % 64)) - 1;
    return out;
  }

  // Calls fn(args) for every tuple of `arity` indices into [0, limit) that
  // contains at least one index in [fresh, limit).
  template <class Fn>
  static void tuples(std::size_t arity, std::size_t fresh, std::size_t limit, Fn&& fn) {
    std::vector<std::size_t> idx(arity, 0);
    if (limit == 0) return;
    while (true) {
      bool any_fresh = false;
      for (auto i : idx) any_fresh = any_fresh || i >= fresh;
      if (any_fresh) fn(idx);
      std::size_t k = arity;
      while (k > 0) {
        if (++idx[k - 1] < limit) break;
        idx[k - 1] = 0;
        --k;
      }
      if (k == 0) return;
    }
  }

  void run(std::size_t depth) {
    const Signature& sig = views_[0]->signature();
    add_term(mk::var(0), 0, var_values(0));
    add_term(mk::var(1), 0, var_values(1));
    for (std::size_t ci = 0; ci < sig.constants().size(); ++ci)
      add_term(mk::constant(sig.constants()[ci]), 0, const_values(ci));

    // terms_[0, term_mark[d]) have depth <= d, likewise formula_mark.
    std::vector<std::size_t> term_mark{terms_.size()};
    std::vector<std::size_t> formula_mark{0};

    for (std::size_t d = 1; d <= depth; ++d) {
      const std::size_t t_lo = d >= 2 ? term_mark[d - 2] : 0;
      const std::size_t t_hi = term_mark[d - 1];
      const std::size_t f_lo = d >= 2 ? formula_mark[d - 2] : 0;
      const std::size_t f_hi = formula_mark[d - 1];

      // Atoms over terms of depth <= d-1 with at least one of depth d-1.
      for (std::size_t i = 0; i < t_hi; ++i)
        for (std::size_t j = std::max(i, t_lo); j < t_hi; ++j) {
          if (i < t_lo && j < t_lo) continue;
          add_formula(mk::equal(terms_[i].expr, terms_[j].expr), d,
                      equal_bits(terms_[i].values, terms_[j].values));
        }
      for (std::size_t ri = 0; ri < sig.relations().size(); ++ri) {
        const auto& r = sig.relations()[ri];
        tuples(r.arity, t_lo, t_hi, [&](const std::vector<std::size_t>& idx) {
          std::vector<Expr> args;
          std::vector<const Values*> vals;
          for (auto i : idx) {
            args.push_back(terms_[i].expr);
            vals.push_back(&terms_[i].values);
          }
          add_formula(mk::rel(r.name, std::move(args)), d, rel_bits(ri, vals));
        });
      }
      // Connectives over formulas of depth <= d-1 with one of depth d-1.
      for (std::size_t i = f_lo; i < f_hi; ++i) {
        // copies: add_formula may reallocate formulas_
        const Expr e = formulas_[i].expr;
        const Bits b = formulas_[i].bits;
        add_formula(mk::not_(e), d, not_bits(b));
        if (sugar_)
          for (VarIndex v = 0; v < 2; ++v) {
            add_formula(mk::exists(v, e), d, quant_bits(v, b, true));
            add_formula(mk::forall(v, e), d, quant_bits(v, b, false));
          }
      }
      for (std::size_t i = 0; i < f_hi; ++i)
        for (std::size_t j = std::max(i + 1, f_lo); j < f_hi; ++j) {
          const Expr ea = formulas_[i].expr, eb = formulas_[j].expr;
          const Bits ba = formulas_[i].bits, bb = formulas_[j].bits;
          add_formula(mk::or_(ea, eb), d, combine(ba, bb, [](auto x, auto y) { return x | y; }));
          if (sugar_) {
            add_formula(mk::and_(ea, eb), d, combine(ba, bb, [](auto x, auto y) { return x & y; }));
            add_formula(mk::imp(ea, eb), d, combine(ba, bb, [](auto x, auto y) { return ~x | y; }));
            add_formula(mk::iff(ea, eb), d,
                        combine(ba, bb, [](auto x, auto y) { return ~(x ^ y); }));
          }
        }
      formula_mark.push_back(formulas_.size());

      if (d == depth) break;
      // Terms of depth d.
      for (std::size_t fi = 0; fi < sig.functions().size(); ++fi) {
        const auto& f = sig.functions()[fi];
        tuples(f.arity, t_lo, t_hi, [&](const std::vector<std::size_t>& idx) {
          std::vector<Expr> args;
          std::vector<const Values*> vals;
          for (auto i : idx) {
            args.push_back(terms_[i].expr);
            vals.push_back(&terms_[i].values);
          }
          add_term(mk::app(f.name, std::move(args)), d, apply_values(fi, vals));
        });
      }
      for (std::size_t i = f_lo; i < f_hi; ++i)
        for (VarIndex v = 0; v < 2; ++v)
          add_term(mk::eps(v, formulas_[i].expr), d, eps_values(v, formulas_[i].bits));
      term_mark.push_back(terms_.size());
    }
  }

  std::vector<const ChoiceStructure*> views_;
  bool sugar_;
  EnumerationLimits limits_;
  std::vector<std::size_t> offset_;
  std::size_t cells_ = 0;
  std::size_t words_ = 0;
  std::vector<EnumeratedTerm> terms_;
  std::vector<EnumeratedFormula> formulas_;
  std::unordered_set<std::string> term_keys_, formula_keys_;
  bool truncated_ = false;
};

// ---------------------------------------------------------------------------
// Brute-force unary definability
// ---------------------------------------------------------------------------

/// Extensions {m : phi(m)} of all formulas whose only variable is v0 and
/// whose logical depth is at most `depth`. Function application is free, so
/// each level closes the unary term functions under the signature.
/// Returned as a bitmap indexed by subset mask.
inline std::vector<bool> unary_definable_sets(const ChoiceStructure& m,
                                              std::size_t depth,
                                              std::size_t max_functions = 1u << 16) {
  const std::size_t n = m.size();
  const Signature& sig = m.signature();
  using Table = std::vector<Element>;

  struct TableHash {
    std::size_t operator()(const Table& t) const {
      std::size_t h = 1469598103934665603ull;
      for (Element e : t) h = (h ^ e) * 1099511628211ull;
      return h;
    }
  };

  std::vector<bool> named(n, false);
  for (Element c : m.constants()) named[c] = true;

  // Closure of the identity and the named constants under the signature.
  auto term_functions = [&]() {
    std::vector<Table> fns;
    std::unordered_set<Table, TableHash> seen;
    auto push = [&](Table t) {
      if (fns.size() < max_functions && seen.insert(t).second) fns.push_back(std::move(t));
    };
    Table id(n);
    for (Element x = 0; x < n; ++x) id[x] = x;
    push(id);
    for (Element c = 0; c < n; ++c)
      if (named[c]) push(Table(n, c));
    for (bool grew = true; grew;) {
      grew = false;
      std::size_t before = fns.size();
      for (std::size_t fi = 0; fi < sig.functions().size(); ++fi) {
        std::size_t arity = sig.functions()[fi].arity;
        std::vector<std::size_t> idx(arity, 0);
        std::size_t limit = fns.size();
        while (true) {
          Table out(n);
          std::vector<Element> args(arity);
          for (Element x = 0; x < n; ++x) {
            for (std::size_t i = 0; i < arity; ++i) args[i] = fns[idx[i]][x];
            out[x] = m.apply(fi, args.data());
          }
          push(std::move(out));
          std::size_t k = arity;
          while (k > 0 && ++idx[k - 1] == limit) idx[--k] = 0;
          if (k == 0) break;
        }
      }
      grew = fns.size() > before;
    }
    return fns;
  };

  auto atoms = [&](const std::vector<Table>& fns, std::vector<bool>& out) {
    for (std::size_t i = 0; i < fns.size(); ++i)
      for (std::size_t j = i; j < fns.size(); ++j) {
        Subset s = 0;
        for (Element x = 0; x < n; ++x)
          if (fns[i][x] == fns[j][x]) s |= singleton(x);
        out[s] = true;
      }
    for (std::size_t ri = 0; ri < sig.relations().size(); ++ri) {
      std::size_t arity = sig.relations()[ri].arity;
      std::vector<std::size_t> idx(arity, 0);
      while (true) {
        Subset s = 0;
        std::vector<Element> args(arity);
        for (Element x = 0; x < n; ++x) {
          for (std::size_t i = 0; i < arity; ++i) args[i] = fns[idx[i]][x];
          if (m.holds(ri, args.data())) s |= singleton(x);
        }
        out[s] = true;
        std::size_t k = arity;
        while (k > 0 && ++idx[k - 1] == fns.size()) idx[--k] = 0;
        if (k == 0) break;
      }
    }
  };

  const std::size_t total = std::size_t{1} << n;
  const Subset full = full_set(n);
  std::vector<bool> cur(total, false);
  atoms(term_functions(), cur);

  for (std::size_t d = 1; d <= depth; ++d) {
    std::vector<Subset> prev;
    for (Subset s = 0; s < total; ++s)
      if (cur[s]) prev.push_back(s);
    std::vector<bool> next = cur;
    bool new_name = false;
    for (Subset s : prev) {
      next[full & ~s] = true;
      next[s ? full : 0] = true;     // ex v0
      next[s == full ? full : 0] = true;  // all v0
      Element c = m.choose(s);
      if (!named[c]) {
        named[c] = true;
        new_name = true;
      }
    }
    for (std::size_t i = 0; i < prev.size(); ++i)
      for (std::size_t j = i + 1; j < prev.size(); ++j) next[prev[i] | prev[j]] = true;
    if (new_name) atoms(term_functions(), next);
    cur.swap(next);
  }
  return cur;
}

}  // namespace epscan
