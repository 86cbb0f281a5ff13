#pragma once

// Saturation engine for the epsilon-denotable elements (E), the definable
// unary sets (U) and the definable unary functions (F) of a finite choice
// structure, each member carrying a witness expression.
//
// U is kept as the partition of the carrier into its atoms: every definable
// set is a union of blocks, and a new generator set refines the blocks it
// cuts. Sets produced directly by an atomic formula also keep that formula
// as a shorter witness.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "epscan/enumerate.hpp"
#include "epscan/eval.hpp"
#include "epscan/structure.hpp"
#include "epscan/syntax.hpp"

namespace epscan {

class DefinabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DefinabilityOptions {
  int max_dim = 2;
  std::size_t max_rounds = 64;
  std::size_t function_cap = 4096;
  std::size_t relation_cap = 4096;
  /// Once E is the whole carrier and U the whole power set nothing can be
  /// added, so the two-variable stage is skipped.
  bool stop_when_maximal = true;
};

struct DefinableElement {
  Element value;
  Expr term;  // closed
  std::size_t round;
  std::string origin;  // "constant", "choice", "image"
};

struct DefinableFunction {
  std::vector<Element> table;
  Expr term;  // free variables within {v0}
};

class DefinableFamily {
 public:
  std::size_t carrier_size() const { return n_; }
  int max_dim() const { return max_dim_; }
  std::size_t rounds() const { return rounds_; }
  bool saturated() const { return saturated_; }
  bool functions_truncated() const { return functions_truncated_; }
  bool relations_truncated() const { return relations_truncated_; }
  std::size_t relation_count() const { return relation_count_; }

  // E
  const std::vector<DefinableElement>& elements() const { return elements_; }
  bool denotable(Element e) const { return e < n_ && slot_[e] >= 0; }
  const DefinableElement& element(Element e) const {
    if (!denotable(e)) throw DefinabilityError("element " + std::to_string(e) + " is not in E");
    return elements_[static_cast<std::size_t>(slot_[e])];
  }
  Subset element_set() const {
    Subset s = 0;
    for (const auto& d : elements_) s |= singleton(d.value);
    return s;
  }

  // U
  const std::vector<Subset>& blocks() const { return blocks_; }
  bool contains(Subset s) const {
    if (s & ~full_set(n_)) return false;
    for (Subset b : blocks_)
      if ((s & b) && (s & b) != b) return false;
    return true;
  }
  std::size_t set_count() const { return std::size_t{1} << blocks_.size(); }
  /// All members of U in increasing mask order.
  std::vector<Subset> sets() const {
    std::vector<Subset> out;
    out.reserve(set_count());
    for (std::size_t m = 0; m < set_count(); ++m) out.push_back(union_of(m));
    std::sort(out.begin(), out.end());
    return out;
  }
  bool full_power_set() const { return blocks_.size() == n_; }

  /// The stored witness: direct when a generator produced S, else a union of
  /// block witnesses (or the negation of the complement's, if shorter).
  Expr witness_formula(Subset s) const {
    if (!contains(s)) throw DefinabilityError("set " + subset_to_string(s) + " is not definable");
    const Subset full = full_set(n_);
    if (s == 0) return mk::falsity();
    if (s == full) return mk::truth();
    if (auto it = direct_.find(s); it != direct_.end()) return it->second;
    if (auto it = direct_.find(full & ~s); it != direct_.end()) return mk::not_(it->second);
    std::vector<std::size_t> in, out;
    for (std::size_t i = 0; i < blocks_.size(); ++i) (blocks_[i] & s ? in : out).push_back(i);
    if (in.size() <= out.size() + 1) return chain(in);
    return mk::not_(chain(out));
  }
  const std::map<Subset, Expr>& direct_witnesses() const { return direct_; }

  // F
  const std::vector<DefinableFunction>& functions() const { return functions_; }

 private:
  friend class DefinabilityEngine;

  Subset union_of(std::size_t blockmask) const {
    Subset s = 0;
    for (std::size_t i = 0; i < blocks_.size(); ++i)
      if (blockmask >> i & 1) s |= blocks_[i];
    return s;
  }
  Expr chain(const std::vector<std::size_t>& idx) const {
    Expr e = block_witness_[idx.back()];
    for (std::size_t i = idx.size() - 1; i-- > 0;) e = mk::or_(block_witness_[idx[i]], e);
    return e;
  }

  std::size_t n_ = 0;
  int max_dim_ = 1;
  std::size_t rounds_ = 0;
  bool saturated_ = false;
  bool functions_truncated_ = false;
  bool relations_truncated_ = false;
  std::size_t relation_count_ = 0;
  std::vector<DefinableElement> elements_;
  std::vector<int> slot_;
  std::vector<Subset> blocks_;
  std::vector<Expr> block_witness_;
  std::map<Subset, Expr> direct_;
  std::vector<DefinableFunction> functions_;
};

class DefinabilityEngine {
 public:
  DefinabilityEngine(const ChoiceStructure& m, DefinabilityOptions opt) : m_(m), opt_(opt) {
    if (opt.max_dim != 1 && opt.max_dim != 2)
      throw DefinabilityError("max_dim must be 1 or 2");
    fam_.n_ = m.size();
    fam_.max_dim_ = opt.max_dim;
    fam_.slot_.assign(m.size(), -1);
    fam_.blocks_ = {m.carrier()};
    fam_.block_witness_ = {mk::truth()};
  }

  DefinableFamily run() {
    const auto& sig = m_.signature();
    for (std::size_t ci = 0; ci < sig.constants().size(); ++ci)
      add_element(m_.constant(ci), mk::constant(sig.constants()[ci]), 0, "constant");
    std::vector<Element> id(m_.size());
    for (Element x = 0; x < m_.size(); ++x) id[x] = x;
    add_function(std::move(id), mk::var(0));

    for (std::size_t round = 1;; ++round) {
      if (round > opt_.max_rounds) {
        fam_.saturated_ = false;
        break;
      }
      fam_.rounds_ = round;
      bool changed = false;
      for (const auto& d : fam_.elements_) changed |= add_constant_function(d);
      close_functions();
      changed |= generate_sets();
      changed |= grow_elements(round);
      // The two-variable stage runs only once the one-variable rules stall.
      if (!changed && opt_.max_dim == 2 && !(opt_.stop_when_maximal && maximal())) {
        changed |= epsilon_functions();
        close_functions();
        changed |= generate_sets();
        changed |= grow_elements(round);
      }
      if (!changed) {
        fam_.saturated_ = true;
        break;
      }
      if (opt_.stop_when_maximal && maximal()) {
        // Constant functions for the last elements still belong in F.
        for (const auto& d : fam_.elements_) add_constant_function(d);
        close_functions();
        fam_.saturated_ = true;
        break;
      }
    }
    return std::move(fam_);
  }

 private:
  using Table = std::vector<Element>;

  bool maximal() const {
    return fam_.elements_.size() == m_.size() && fam_.full_power_set();
  }

  bool add_element(Element e, Expr term, std::size_t round, const char* origin) {
    if (fam_.slot_[e] >= 0) return false;
    fam_.slot_[e] = static_cast<int>(fam_.elements_.size());
    fam_.elements_.push_back({e, std::move(term), round, origin});
    return true;
  }

  bool add_function(Table t, Expr term, bool force = false) {
    if (function_seen_.count(key(t))) return false;
    if (!force && fam_.functions_.size() >= opt_.function_cap) {
      fam_.functions_truncated_ = true;
      return false;
    }
    function_seen_.emplace(key(t), fam_.functions_.size());
    fam_.functions_.push_back({std::move(t), std::move(term)});
    return true;
  }

  bool add_constant_function(const DefinableElement& d) {
    return add_function(Table(m_.size(), d.value), d.term, true);
  }

  static std::string key(const Table& t) { return std::string(t.begin(), t.end()); }

  /// Closes F under x -> f(e1, .., g(x), .., ek) for signature functions f,
  /// g in F and the other arguments named elements of E. Applications are
  /// re-formed for every g when E has grown since the last pass.
  void close_functions() {
    const auto& sig = m_.signature();
    const std::size_t n = m_.size();
    if (closed_elements_ != fam_.elements_.size()) {
      closed_upto_ = 0;
      closed_elements_ = fam_.elements_.size();
    }
    const std::size_t ne = fam_.elements_.size();
    while (closed_upto_ < fam_.functions_.size()) {
      const std::size_t g = closed_upto_++;
      for (std::size_t fi = 0; fi < sig.functions().size(); ++fi) {
        const std::size_t arity = sig.functions()[fi].arity;
        std::vector<Element> args(arity);
        for (std::size_t pos = 0; pos < arity; ++pos) {
          if (arity > 1 && ne == 0) break;
          std::vector<std::size_t> idx(arity, 0);  // E index per position, pos unused
          while (true) {
            Table out(n);
            for (Element x = 0; x < n; ++x) {
              for (std::size_t i = 0; i < arity; ++i)
                args[i] = i == pos ? fam_.functions_[g].table[x] : fam_.elements_[idx[i]].value;
              out[x] = m_.apply(fi, args.data());
            }
            if (!function_seen_.count(key(out))) {
              std::vector<Expr> terms;
              for (std::size_t i = 0; i < arity; ++i)
                terms.push_back(i == pos ? fam_.functions_[g].term : fam_.elements_[idx[i]].term);
              add_function(std::move(out), mk::app(sig.functions()[fi].name, std::move(terms)));
            }
            std::size_t k = arity;
            while (k > 0) {
              --k;
              if (k == pos) continue;
              if (++idx[k] < ne) break;
              idx[k] = 0;
            }
            bool done = true;
            for (std::size_t i = 0; i < arity; ++i)
              if (i != pos && idx[i] != 0) done = false;
            if (done) break;
          }
        }
      }
    }
  }

  /// Refines the block partition by s; returns whether U grew.
  bool refine(Subset s, const Expr& witness) {
    bool grew = false;
    const Expr truth = mk::truth();
    for (std::size_t i = 0, count = fam_.blocks_.size(); i < count; ++i) {
      Subset b = fam_.blocks_[i];
      Subset in = b & s, out = b & ~s;
      if (!in || !out) continue;
      Expr wb = fam_.block_witness_[i];
      bool top = wb == truth;
      fam_.blocks_[i] = in;
      fam_.block_witness_[i] = top ? witness : mk::and_(wb, witness);
      fam_.blocks_.push_back(out);
      fam_.block_witness_.push_back(top ? mk::not_(witness) : mk::and_(wb, mk::not_(witness)));
      grew = true;
    }
    if (grew) sort_blocks();
    return grew;
  }

  void sort_blocks() {
    std::vector<std::size_t> order(fam_.blocks_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](auto a, auto b) { return fam_.blocks_[a] < fam_.blocks_[b]; });
    std::vector<Subset> blocks;
    std::vector<Expr> witnesses;
    for (auto i : order) {
      blocks.push_back(fam_.blocks_[i]);
      witnesses.push_back(fam_.block_witness_[i]);
    }
    fam_.blocks_ = std::move(blocks);
    fam_.block_witness_ = std::move(witnesses);
  }

  bool offer_set(Subset s, Expr witness) {
    const Subset full = m_.carrier();
    bool grew = false;
    if (s != 0 && s != full) {
      auto it = fam_.direct_.find(s);
      if (it == fam_.direct_.end()) {
        fam_.direct_.emplace(s, witness);
      } else if (witness.size() < it->second.size()) {
        it->second = witness;
      }
      grew = refine(s, witness);
    }
    return grew;
  }

  /// Atomic formulas in v0 over F: g(v0) = h(v0) and r(g1(v0), ...).
  bool generate_sets() {
    const auto& sig = m_.signature();
    const std::size_t n = m_.size(), nf = fam_.functions_.size();
    bool grew = false;
    for (std::size_t i = 0; i < nf; ++i)
      for (std::size_t j = std::max(i + 1, sets_upto_); j < nf; ++j) {
        const auto &g = fam_.functions_[i], &h = fam_.functions_[j];
        Subset s = 0;
        for (Element x = 0; x < n; ++x)
          if (g.table[x] == h.table[x]) s |= singleton(x);
        grew |= offer_set(s, mk::equal(g.term, h.term));
      }
    for (std::size_t ri = 0; ri < sig.relations().size(); ++ri) {
      const std::size_t arity = sig.relations()[ri].arity;
      std::vector<std::size_t> idx(arity, 0);
      std::vector<Element> args(arity);
      if (arity == 0) continue;
      while (true) {
        bool any_fresh = false;
        for (auto i : idx) any_fresh = any_fresh || i >= sets_upto_;
        if (any_fresh) {
          Subset s = 0;
          for (Element x = 0; x < n; ++x) {
            for (std::size_t i = 0; i < arity; ++i) args[i] = fam_.functions_[idx[i]].table[x];
            if (m_.holds(ri, args.data())) s |= singleton(x);
          }
          std::vector<Expr> terms;
          for (auto i : idx) terms.push_back(fam_.functions_[i].term);
          grew |= offer_set(s, mk::rel(sig.relations()[ri].name, std::move(terms)));
        }
        std::size_t k = arity;
        while (k > 0 && ++idx[k - 1] == nf) idx[--k] = 0;
        if (k == 0) break;
      }
    }
    sets_upto_ = nf;
    return grew;
  }

  /// New elements: choice over U (direct witnesses first, shortest first,
  /// then unions of blocks by block count) and images of E under F.
  bool grow_elements(std::size_t round) {
    bool grew = false;
    const Subset full = m_.carrier();
    std::vector<std::pair<Subset, Expr>> direct(fam_.direct_.begin(), fam_.direct_.end());
    direct.emplace_back(0, mk::falsity());
    direct.emplace_back(full, mk::truth());
    std::stable_sort(direct.begin(), direct.end(), [](const auto& a, const auto& b) {
      return a.second.size() < b.second.size();
    });
    std::vector<std::pair<Element, Expr>> found;
    std::vector<bool> taken(m_.size(), false);
    for (Element e = 0; e < m_.size(); ++e) taken[e] = fam_.denotable(e);
    auto offer = [&](Element e, const Expr& phi) {
      if (taken[e]) return;
      taken[e] = true;
      found.emplace_back(e, mk::eps(0, phi));
    };
    for (const auto& [s, phi] : direct) offer(m_.choose(s), phi);
    const std::size_t b = fam_.blocks_.size();
    for (std::size_t c = 1; c <= b; ++c) {
      // masks with exactly c blocks, increasing
      std::uint64_t mask = (std::uint64_t{1} << c) - 1;
      while (mask < (std::uint64_t{1} << b)) {
        Subset s = fam_.union_of(static_cast<std::size_t>(mask));
        Element e = m_.choose(s);
        if (!taken[e]) offer(e, fam_.witness_formula(s));
        std::uint64_t t = mask | (mask - 1);
        mask = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(mask) + 1));
      }
    }
    for (auto& [e, term] : found) grew |= add_element(e, std::move(term), round, "choice");
    // Images g(e): the term g[t_e / v0] is closed.
    const std::size_t known = fam_.elements_.size();
    for (std::size_t i = 0; i < known; ++i) {
      const auto d = fam_.elements_[i];
      for (const auto& g : fam_.functions_) {
        Element v = g.table[d.value];
        if (!fam_.denotable(v))
          grew |= add_element(v, substitute(g.term, d.term, 0), round, "image");
      }
    }
    return grew;
  }

  using Rel = std::vector<std::uint64_t>;

  /// Binary relations in v0, v1 from atoms over F, closed under complement
  /// and union up to the cap; each yields x -> choice({y : R(x, y)}).
  bool epsilon_functions() {
    const auto& sig = m_.signature();
    const std::size_t n = m_.size(), cells = n * n, words = (cells + 63) / 64;
    auto bit = [&](Rel& r, Element x, Element y) {
      std::size_t c = x * n + y;
      r[c / 64] |= std::uint64_t{1} << (c % 64);
    };
    auto test = [&](const Rel& r, Element x, Element y) {
      std::size_t c = x * n + y;
      return (r[c / 64] >> (c % 64)) & 1u;
    };
    std::vector<std::pair<Rel, Expr>> rels;
    std::map<Rel, std::size_t> seen;
    auto push = [&](Rel r, Expr e) {
      if (seen.count(r)) return;
      if (rels.size() >= opt_.relation_cap) {
        fam_.relations_truncated_ = true;
        return;
      }
      seen.emplace(r, rels.size());
      rels.emplace_back(std::move(r), std::move(e));
    };
    const auto& fs = fam_.functions_;
    auto in_v1 = [](const Expr& t) { return rebind_var(t, 0, 1); };
    for (std::size_t i = 0; i < fs.size() && !fam_.relations_truncated_; ++i)
      for (std::size_t j = 0; j < fs.size() && !fam_.relations_truncated_; ++j) {
        Rel r(words, 0);
        for (Element x = 0; x < n; ++x)
          for (Element y = 0; y < n; ++y)
            if (fs[i].table[x] == fs[j].table[y]) bit(r, x, y);
        push(std::move(r), mk::equal(fs[i].term, in_v1(fs[j].term)));
      }
    for (std::size_t ri = 0; ri < sig.relations().size() && !fam_.relations_truncated_; ++ri) {
      const std::size_t arity = sig.relations()[ri].arity;
      if (arity == 0) continue;
      // Each argument is some g in F applied to v0 or v1.
      const std::size_t choices = 2 * fs.size();
      std::vector<std::size_t> idx(arity, 0);
      std::vector<Element> args(arity);
      while (true) {
        Rel r(words, 0);
        for (Element x = 0; x < n; ++x)
          for (Element y = 0; y < n; ++y) {
            for (std::size_t i = 0; i < arity; ++i)
              args[i] = fs[idx[i] / 2].table[idx[i] % 2 ? y : x];
            if (m_.holds(ri, args.data())) bit(r, x, y);
          }
        std::vector<Expr> terms;
        for (auto i : idx) terms.push_back(i % 2 ? in_v1(fs[i / 2].term) : fs[i / 2].term);
        push(std::move(r), mk::rel(sig.relations()[ri].name, std::move(terms)));
        if (fam_.relations_truncated_) break;
        std::size_t k = arity;
        while (k > 0 && ++idx[k - 1] == choices) idx[--k] = 0;
        if (k == 0) break;
      }
    }
    const std::uint64_t tail = cells % 64 ? (std::uint64_t{1} << (cells % 64)) - 1 : ~std::uint64_t{0};
    for (std::size_t done = 0; done < rels.size() && !fam_.relations_truncated_;) {
      const std::size_t limit = rels.size();
      for (std::size_t i = done; i < limit && !fam_.relations_truncated_; ++i) {
        Rel c = rels[i].first;
        for (auto& w : c) w = ~w;
        c.back() &= tail;
        push(std::move(c), mk::not_(rels[i].second));
        for (std::size_t j = 0; j < limit && !fam_.relations_truncated_; ++j) {
          if (j >= done && j <= i) continue;
          Rel u = rels[i].first;
          for (std::size_t w = 0; w < words; ++w) u[w] |= rels[j].first[w];
          push(std::move(u), mk::or_(rels[std::min(i, j)].second, rels[std::max(i, j)].second));
        }
      }
      done = limit;
    }
    fam_.relation_count_ = std::max(fam_.relation_count_, rels.size());

    bool grew = false;
    for (const auto& [r, phi] : rels) {
      Table t(n);
      for (Element x = 0; x < n; ++x) {
        Subset sec = 0;
        for (Element y = 0; y < n; ++y)
          if (test(r, x, y)) sec |= singleton(y);
        t[x] = m_.choose(sec);
      }
      grew |= add_function(std::move(t), mk::eps(1, phi));
    }
    return grew;
  }

  /// Renames free occurrences of variable a to b (b must not be bound inside).
  static Expr rebind_var(const Expr& t, VarIndex a, VarIndex b) {
    return substitute(t, mk::var(b), a);
  }

  const ChoiceStructure& m_;
  DefinabilityOptions opt_;
  DefinableFamily fam_;
  std::unordered_map<std::string, std::size_t> function_seen_;
  std::size_t closed_upto_ = 0;
  std::size_t closed_elements_ = 0;
  std::size_t sets_upto_ = 0;
};

inline DefinableFamily definable_closure(const ChoiceStructure& m, DefinabilityOptions opt = {}) {
  return DefinabilityEngine(m, opt).run();
}

inline DefinableFamily definable_closure(const ChoiceStructure& m, int max_dim,
                                         std::size_t max_rounds = 64) {
  DefinabilityOptions opt;
  opt.max_dim = max_dim;
  opt.max_rounds = max_rounds;
  return definable_closure(m, opt);
}

inline Expr witness_formula(const DefinableFamily& fam, Subset s) {
  return fam.witness_formula(s);
}

/// Re-evaluates every witness. Union witnesses are checked for every set
/// when U is small and on an evenly spaced selection of `union_budget` sets
/// otherwise (block witnesses, from which unions are built, are always
/// checked). Returns the first discrepancy.
inline std::optional<std::string> verify_family(const ChoiceStructure& m,
                                                const DefinableFamily& fam,
                                                std::size_t union_budget = 4096) {
  Evaluator ev(m);
  for (const auto& d : fam.elements()) {
    if (!d.term.closed()) return "element witness is open: " + to_string(d.term);
    Assignment a;
    Element v = ev.term(d.term, a);
    if (v != d.value)
      return "element " + std::to_string(d.value) + " witness " + to_string(d.term) +
             " evaluates to " + std::to_string(v);
  }
  auto check_set = [&](Subset s, const Expr& phi) -> std::optional<std::string> {
    for (VarIndex v : phi.free_vars())
      if (v != 0) return "set witness has free v" + std::to_string(v) + ": " + to_string(phi);
    Assignment a;
    Subset got = ev.extension(phi, 0, a);
    if (got != s)
      return "set " + subset_to_string(s) + " witness " + to_string(phi) + " defines " +
             subset_to_string(got);
    return std::nullopt;
  };
  for (const auto& [s, phi] : fam.direct_witnesses())
    if (auto err = check_set(s, phi)) return err;
  for (Subset b : fam.blocks())
    if (auto err = check_set(b, fam.witness_formula(b))) return err;
  const std::size_t total = fam.set_count();
  const std::size_t step = total <= union_budget ? 1 : total / union_budget;
  auto all = fam.sets();
  for (std::size_t i = 0; i < all.size(); i += step)
    if (auto err = check_set(all[i], fam.witness_formula(all[i]))) return err;
  for (const auto& f : fam.functions()) {
    for (VarIndex v : f.term.free_vars())
      if (v != 0) return "function witness has free v" + std::to_string(v);
    for (Element x = 0; x < m.size(); ++x) {
      Assignment a{x};
      if (ev.term(f.term, a) != f.table[x])
        return "function witness " + to_string(f.term) + " differs at " + std::to_string(x);
    }
  }
  for (Subset s : all)
    if (!fam.denotable(m.choose(s)))
      return "choice of definable set " + subset_to_string(s) + " is not in E";
  return std::nullopt;
}

struct StabilityReport {
  Subset e_dim1 = 0, e_dim2 = 0;
  std::size_t u_dim1 = 0, u_dim2 = 0;
  bool dims_agree = false;
  bool dim_sensitive = false;
  bool saturated = false;
  bool brute_force_ran = false;
  std::size_t brute_force_depth = 0;
  std::size_t brute_force_sets = 0;
  bool brute_force_agrees = false;
  bool brute_force_within_u = false;  // every enumerated extension lies in U
  std::optional<Subset> brute_force_missing;  // in U, not reached by the enumeration
};

/// Runs the closure at dimension 1 and 2 and compares, then compares U with
/// the brute-force extensions of one-variable formulas up to `depth`.
inline StabilityReport stability_check(const ChoiceStructure& m, std::size_t depth = 4,
                                       std::size_t brute_force_max_carrier = 4) {
  StabilityReport r;
  auto f1 = definable_closure(m, 1), f2 = definable_closure(m, 2);
  r.e_dim1 = f1.element_set();
  r.e_dim2 = f2.element_set();
  r.u_dim1 = f1.set_count();
  r.u_dim2 = f2.set_count();
  r.saturated = f1.saturated() && f2.saturated();
  r.dims_agree = r.e_dim1 == r.e_dim2 && f1.blocks() == f2.blocks();
  r.dim_sensitive = !r.dims_agree;
  r.brute_force_depth = depth;
  if (m.size() <= brute_force_max_carrier) {
    r.brute_force_ran = true;
    auto sets = unary_definable_sets(m, depth);
    r.brute_force_within_u = true;
    r.brute_force_agrees = true;
    for (Subset s = 0; s < sets.size(); ++s) {
      if (sets[s]) ++r.brute_force_sets;
      bool in_u = f2.contains(s);
      if (sets[s] && !in_u) r.brute_force_within_u = r.brute_force_agrees = false;
      if (!sets[s] && in_u) {
        r.brute_force_agrees = false;
        if (!r.brute_force_missing) r.brute_force_missing = s;
      }
    }
  }
  return r;
}

}  // namespace epscan
