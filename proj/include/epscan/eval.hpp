#pragma once

// Evaluation of epsilon terms and formulas in a finite choice structure.
// (eps v p) denotes choice({m : p holds with v := m}).

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "epscan/structure.hpp"
#include "epscan/syntax.hpp"

namespace epscan {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Partial map from variable indices to elements.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::initializer_list<Element> values) {
    VarIndex i = 0;
    for (Element e : values) bind(i++, e);
  }

  void bind(VarIndex v, Element e) {
    if (v >= values_.size()) values_.resize(v + 1, kUnbound);
    values_[v] = static_cast<std::int32_t>(e);
  }
  void unbind(VarIndex v) {
    if (v < values_.size()) values_[v] = kUnbound;
  }
  std::optional<Element> get(VarIndex v) const {
    if (v >= values_.size() || values_[v] == kUnbound) return std::nullopt;
    return static_cast<Element>(values_[v]);
  }
  bool bound(VarIndex v) const { return v < values_.size() && values_[v] != kUnbound; }
  /// Raw slot, kUnbound when unset.
  std::int32_t raw(VarIndex v) const {
    return v < values_.size() ? values_[v] : kUnbound;
  }

  static constexpr std::int32_t kUnbound = -1;

 private:
  std::vector<std::int32_t> values_;
};

/// Evaluator bound to one structure. Epsilon values are memoized on the
/// epsilon node and the values of its free variables; the memo keeps the
/// nodes alive, so an evaluator can be reused across unrelated expressions.
class Evaluator {
 public:
  explicit Evaluator(const ChoiceStructure& m) : m_(m) {
    const auto& sig = m.signature();
    for (std::size_t i = 0; i < sig.relations().size(); ++i)
      rel_index_.emplace(sig.relations()[i].name, i);
    for (std::size_t i = 0; i < sig.functions().size(); ++i)
      fun_index_.emplace(sig.functions()[i].name, i);
    for (std::size_t i = 0; i < sig.constants().size(); ++i)
      const_index_.emplace(sig.constants()[i], i);
  }

  const ChoiceStructure& structure() const { return m_; }

  Element term(const Expr& t, Assignment& a) {
    switch (t.kind()) {
      case Kind::Var: {
        auto v = a.raw(t.var());
        if (v == Assignment::kUnbound)
          throw EvalError("unbound variable v" + std::to_string(t.var()));
        return static_cast<Element>(v);
      }
      case Kind::Const:
        return m_.constant(lookup(const_index_, t.name(), "constant"));
      case Kind::App: {
        std::size_t fi = lookup(fun_index_, t.name(), "function");
        std::size_t arity = t.args().size();
        if (arity != m_.signature().functions()[fi].arity)
          throw EvalError("arity mismatch for '" + t.name() + "'");
        std::array<Element, 8> small{};
        std::vector<Element> big;
        Element* args = small.data();
        if (arity > small.size()) {
          big.resize(arity);
          args = big.data();
        }
        for (std::size_t i = 0; i < arity; ++i) args[i] = term(t.arg(i), a);
        return m_.apply(fi, args);
      }
      case Kind::Eps:
        return epsilon(t, a);
      default:
        throw EvalError("expected a term, got a formula");
    }
  }

  bool formula(const Expr& f, Assignment& a) {
    switch (f.kind()) {
      case Kind::Equal:
        return term(f.arg(0), a) == term(f.arg(1), a);
      case Kind::Rel: {
        std::size_t ri = lookup(rel_index_, f.name(), "relation");
        std::size_t arity = f.args().size();
        if (arity != m_.signature().relations()[ri].arity)
          throw EvalError("arity mismatch for '" + f.name() + "'");
        std::vector<Element> args(arity);
        for (std::size_t i = 0; i < arity; ++i) args[i] = term(f.arg(i), a);
        return m_.holds(ri, args);
      }
      case Kind::Not:
        return !formula(f.arg(0), a);
      case Kind::Or:
        return formula(f.arg(0), a) || formula(f.arg(1), a);
      case Kind::And:
        return formula(f.arg(0), a) && formula(f.arg(1), a);
      case Kind::Imp:
        return !formula(f.arg(0), a) || formula(f.arg(1), a);
      case Kind::Iff:
        return formula(f.arg(0), a) == formula(f.arg(1), a);
      case Kind::Exists:
      case Kind::Forall: {
        const bool want = f.kind() == Kind::Exists;
        Scoped scope(a, f.var());
        for (Element m = 0; m < m_.size(); ++m) {
          a.bind(f.var(), m);
          if (formula(f.body(), a) == want) return want;
        }
        return !want;
      }
      default:
        throw EvalError("expected a formula, got a term");
    }
  }

  /// {m : phi holds under a[v := m]}.
  Subset extension(const Expr& phi, VarIndex v, Assignment& a) {
    Scoped scope(a, v);
    Subset s = 0;
    for (Element m = 0; m < m_.size(); ++m) {
      a.bind(v, m);
      if (formula(phi, a)) s |= singleton(m);
    }
    return s;
  }

  void clear_memo() { memo_.clear(); }

 private:
  // Restores a variable slot on scope exit.
  class Scoped {
   public:
    Scoped(Assignment& a, VarIndex v) : a_(a), v_(v), old_(a.raw(v)) {}
    ~Scoped() {
      if (old_ == Assignment::kUnbound)
        a_.unbind(v_);
      else
        a_.bind(v_, static_cast<Element>(old_));
    }
    Scoped(const Scoped&) = delete;
    Scoped& operator=(const Scoped&) = delete;

   private:
    Assignment& a_;
    VarIndex v_;
    std::int32_t old_;
  };

  struct Key {
    Expr node;
    std::uint64_t packed;
    friend bool operator==(const Key& x, const Key& y) {
      return x.node.get() == y.node.get() && x.packed == y.packed;
    }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return std::hash<const void*>{}(k.node.get()) ^ (k.packed * 0x9e3779b97f4a7c15ULL);
    }
  };

  Element epsilon(const Expr& t, Assignment& a) {
    const auto& fv = t.free_vars();
    bool memo = fv.size() <= 12;
    std::uint64_t packed = 0;
    if (memo) {
      for (VarIndex v : fv) {
        auto x = a.raw(v);
        if (x == Assignment::kUnbound)
          throw EvalError("unbound variable v" + std::to_string(v));
        packed = (packed << 5) | static_cast<std::uint64_t>(x);
      }
      if (auto it = memo_.find(Key{t, packed}); it != memo_.end()) return it->second;
    }
    Element e = m_.choose(extension(t.body(), t.var(), a));
    if (memo) memo_.emplace(Key{t, packed}, e);
    return e;
  }

  static std::size_t lookup(const std::unordered_map<std::string, std::size_t>& m,
                            const std::string& name, const char* what) {
    auto it = m.find(name);
    if (it == m.end())
      throw EvalError(std::string("undeclared ") + what + " '" + name + "'");
    return it->second;
  }

  const ChoiceStructure& m_;
  std::unordered_map<std::string, std::size_t> rel_index_, fun_index_, const_index_;
  std::unordered_map<Key, Element, KeyHash> memo_;
};

inline Element eval_term(const ChoiceStructure& m, Assignment a, const Expr& t) {
  Evaluator ev(m);
  return ev.term(t, a);
}

inline bool eval_formula(const ChoiceStructure& m, Assignment a, const Expr& phi) {
  Evaluator ev(m);
  return ev.formula(phi, a);
}

/// Truth of a sentence; stands in for derivability from the complete theory
/// of the structure.
inline bool theory_holds(const ChoiceStructure& m, const Expr& sentence) {
  if (!sentence.is_formula()) throw EvalError("theory_holds expects a formula");
  if (!sentence.closed())
    throw EvalError("theory_holds expects a sentence; v" +
                    std::to_string(sentence.free_vars().front()) + " is free");
  Assignment a;
  return eval_formula(m, a, sentence);
}

}  // namespace epscan
