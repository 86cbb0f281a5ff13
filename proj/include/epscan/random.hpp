#pragma once

// Seeded random terms and formulas for sampled checks and property tests.
// Depth is the syntactic depth computed by epscan::depth().

#include <cstddef>
#include <random>

#include "epscan/syntax.hpp"

namespace epscan {

struct RandomOptions {
  std::size_t vars = 2;  // variables drawn from v0..v{vars-1}
  bool sugar = true;     // allow and/imp/iff/ex/all
  bool epsilon = true;   // allow epsilon terms
};

template <class Rng>
class RandomExprGen {
 public:
  RandomExprGen(const Signature& sig, Rng& rng, RandomOptions opt = {})
      : sig_(sig), rng_(rng), opt_(opt) {}

  Expr term(std::size_t depth) {
    const bool leaf_only = depth == 0 ||
                           (sig_.functions().empty() && !opt_.epsilon);
    if (leaf_only || pick(3) == 0) return leaf();
    bool use_eps = opt_.epsilon && (sig_.functions().empty() || pick(3) == 0);
    if (use_eps) return mk::eps(variable(), formula(depth - 1));
    const auto& f = sig_.functions()[pick(sig_.functions().size())];
    std::vector<Expr> args;
    for (std::size_t i = 0; i < f.arity; ++i) args.push_back(term(depth - 1));
    return mk::app(f.name, std::move(args));
  }

  /// depth >= 1
  Expr formula(std::size_t depth) {
    if (depth <= 1 || pick(4) == 0) return atom(depth == 0 ? 0 : depth - 1);
    const std::size_t choices = opt_.sugar ? 8 : 3;
    switch (pick(choices)) {
      case 0:
        return atom(depth - 1);
      case 1:
        return mk::not_(formula(depth - 1));
      case 2:
        return mk::or_(formula(depth - 1), formula(depth - 1));
      case 3:
        return mk::and_(formula(depth - 1), formula(depth - 1));
      case 4:
        return mk::imp(formula(depth - 1), formula(depth - 1));
      case 5:
        return mk::iff(formula(depth - 1), formula(depth - 1));
      case 6:
        return mk::exists(variable(), formula(depth - 1));
      default:
        return mk::forall(variable(), formula(depth - 1));
    }
  }

 private:
  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  VarIndex variable() { return static_cast<VarIndex>(pick(opt_.vars)); }

  Expr leaf() {
    const auto& cs = sig_.constants();
    if (!cs.empty() && pick(3) == 0) return mk::constant(cs[pick(cs.size())]);
    return mk::var(variable());
  }

  Expr atom(std::size_t term_depth) {
    const auto& rs = sig_.relations();
    if (!rs.empty() && pick(3) == 0) {
      const auto& r = rs[pick(rs.size())];
      std::vector<Expr> args;
      for (std::size_t i = 0; i < r.arity; ++i) args.push_back(term(term_depth));
      return mk::rel(r.name, std::move(args));
    }
    return mk::equal(term(term_depth), term(term_depth));
  }

  const Signature& sig_;
  Rng& rng_;
  RandomOptions opt_;
};

template <class Rng>
Expr random_formula(const Signature& sig, Rng& rng, std::size_t depth,
                    RandomOptions opt = {}) {
  return RandomExprGen<Rng>(sig, rng, opt).formula(depth);
}

template <class Rng>
Expr random_term(const Signature& sig, Rng& rng, std::size_t depth,
                 RandomOptions opt = {}) {
  return RandomExprGen<Rng>(sig, rng, opt).term(depth);
}

}  // namespace epscan
