#pragma once

// Epsilon language: signatures, terms, formulas, substitution and desugaring.
//
// Terms and formulas share one immutable node type. A node is a term when its
// kind is Var, Const, App or Eps; every other kind is a formula. Nodes cache
// their free-variable set, a structural hash and their size, so equality and
// substitution can skip untouched subtrees.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace epscan {

using VarIndex = std::uint32_t;

// ---------------------------------------------------------------------------
// Signature
// ---------------------------------------------------------------------------

struct Symbol {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

class SignatureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool is_reserved_word(std::string_view s) {
  static constexpr std::string_view kReserved[] = {"eps", "not", "or",  "and",
                                                   "imp", "iff", "ex",  "all"};
  return std::find(std::begin(kReserved), std::end(kReserved), s) !=
         std::end(kReserved);
}

/// True for `v` followed by one or more decimal digits.
inline bool is_variable_token(std::string_view s) {
  if (s.size() < 2 || s[0] != 'v') return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

/// [a-z][a-z0-9_]*, not reserved, not shaped like a variable.
inline bool is_valid_symbol_name(std::string_view s) {
  if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return !is_reserved_word(s) && !is_variable_token(s);
}

class Signature {
 public:
  Signature() = default;

  Signature& add_relation(std::string name, std::size_t arity) {
    check_new(name, arity, true);
    relations_.push_back({std::move(name), arity});
    return *this;
  }
  Signature& add_function(std::string name, std::size_t arity) {
    check_new(name, arity, true);
    functions_.push_back({std::move(name), arity});
    return *this;
  }
  Signature& add_constant(std::string name) {
    check_new(name, 0, false);
    constants_.push_back(std::move(name));
    return *this;
  }

  const std::vector<Symbol>& relations() const { return relations_; }
  const std::vector<Symbol>& functions() const { return functions_; }
  const std::vector<std::string>& constants() const { return constants_; }

  std::optional<std::size_t> relation_index(std::string_view name) const {
    return find(relations_, name);
  }
  std::optional<std::size_t> function_index(std::string_view name) const {
    return find(functions_, name);
  }
  std::optional<std::size_t> constant_index(std::string_view name) const {
    for (std::size_t i = 0; i < constants_.size(); ++i)
      if (constants_[i] == name) return i;
    return std::nullopt;
  }

  bool declares(std::string_view name) const {
    return relation_index(name) || function_index(name) || constant_index(name);
  }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  static std::optional<std::size_t> find(const std::vector<Symbol>& v,
                                         std::string_view name) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i].name == name) return i;
    return std::nullopt;
  }

  void check_new(const std::string& name, std::size_t arity,
                 bool needs_arity) const {
    if (!is_valid_symbol_name(name))
      throw SignatureError("invalid symbol name '" + name + "'");
    if (needs_arity && arity == 0)
      throw SignatureError("symbol '" + name + "' must have arity >= 1");
    if (declares(name))
      throw SignatureError("symbol '" + name + "' declared twice");
  }

  std::vector<Symbol> relations_;
  std::vector<Symbol> functions_;
  std::vector<std::string> constants_;
};

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

enum class Kind : std::uint8_t {
  // terms
  Var,
  Const,
  App,
  Eps,
  // core formulas
  Equal,
  Rel,
  Not,
  Or,
  // sugar
  And,
  Imp,
  Iff,
  Exists,
  Forall,
};

inline bool is_term_kind(Kind k) { return k <= Kind::Eps; }
inline bool is_binder_kind(Kind k) {
  return k == Kind::Eps || k == Kind::Exists || k == Kind::Forall;
}
inline bool is_sugar_kind(Kind k) { return k >= Kind::And; }

class Expr;

struct Node {
  Kind kind;
  VarIndex var = 0;  // Var index, or the bound variable of a binder
  std::string name;  // Const / App / Rel symbol
  std::vector<Expr> args;
  std::vector<VarIndex> free;  // sorted
  std::size_t hash = 0;
  std::size_t size = 1;
  bool has_sugar = false;
};

/// Shared handle to an immutable node. Compares structurally.
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  const Node& node() const { return *node_; }
  const Node* get() const { return node_.get(); }
  explicit operator bool() const { return static_cast<bool>(node_); }

  Kind kind() const { return node_->kind; }
  VarIndex var() const { return node_->var; }
  const std::string& name() const { return node_->name; }
  const std::vector<Expr>& args() const { return node_->args; }
  const Expr& arg(std::size_t i) const { return node_->args[i]; }
  /// Body of a binder.
  const Expr& body() const { return node_->args[0]; }
  const std::vector<VarIndex>& free_vars() const { return node_->free; }
  bool is_free(VarIndex v) const {
    return std::binary_search(node_->free.begin(), node_->free.end(), v);
  }
  bool closed() const { return node_->free.empty(); }
  bool is_term() const { return is_term_kind(kind()); }
  bool is_formula() const { return !is_term(); }
  std::size_t hash() const { return node_->hash; }
  std::size_t size() const { return node_->size; }
  bool has_sugar() const { return node_->has_sugar; }

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (!a.node_ || !b.node_) return false;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    if (x.hash != y.hash || x.kind != y.kind || x.var != y.var ||
        x.size != y.size || x.name != y.name || x.args.size() != y.args.size())
      return false;
    for (std::size_t i = 0; i < x.args.size(); ++i)
      if (!(x.args[i] == y.args[i])) return false;
    return true;
  }

 private:
  std::shared_ptr<const Node> node_;
};

struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

namespace detail {

inline std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

inline std::vector<VarIndex> merge_free(const std::vector<Expr>& args) {
  std::vector<VarIndex> out;
  for (const auto& a : args) {
    std::vector<VarIndex> tmp;
    std::set_union(out.begin(), out.end(), a.free_vars().begin(),
                   a.free_vars().end(), std::back_inserter(tmp));
    out.swap(tmp);
  }
  return out;
}

inline Expr make(Kind kind, VarIndex var, std::string name,
                 std::vector<Expr> args) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->var = var;
  n->name = std::move(name);
  n->args = std::move(args);
  std::size_t h = mix(static_cast<std::size_t>(kind) * 1315423911u, var);
  h = mix(h, std::hash<std::string>{}(n->name));
  for (const auto& a : n->args) {
    h = mix(h, a.hash());
    n->size += a.size();
    n->has_sugar = n->has_sugar || a.has_sugar();
  }
  n->hash = h;
  n->has_sugar = n->has_sugar || is_sugar_kind(kind);
  if (kind == Kind::Var) {
    n->free = {var};
  } else {
    n->free = merge_free(n->args);
    if (is_binder_kind(kind)) {
      auto it = std::lower_bound(n->free.begin(), n->free.end(), var);
      if (it != n->free.end() && *it == var) n->free.erase(it);
    }
  }
  return Expr(std::move(n));
}

}  // namespace detail

// Builders. These do not consult a signature; the parser and structures do.
namespace mk {

inline Expr var(VarIndex i) { return detail::make(Kind::Var, i, {}, {}); }
inline Expr constant(std::string name) {
  return detail::make(Kind::Const, 0, std::move(name), {});
}
inline Expr app(std::string fn, std::vector<Expr> args) {
  return detail::make(Kind::App, 0, std::move(fn), std::move(args));
}
inline Expr eps(VarIndex v, Expr body) {
  return detail::make(Kind::Eps, v, {}, {std::move(body)});
}
inline Expr equal(Expr a, Expr b) {
  return detail::make(Kind::Equal, 0, {}, {std::move(a), std::move(b)});
}
inline Expr rel(std::string r, std::vector<Expr> args) {
  return detail::make(Kind::Rel, 0, std::move(r), std::move(args));
}
inline Expr not_(Expr a) { return detail::make(Kind::Not, 0, {}, {std::move(a)}); }
inline Expr or_(Expr a, Expr b) {
  return detail::make(Kind::Or, 0, {}, {std::move(a), std::move(b)});
}
inline Expr and_(Expr a, Expr b) {
  return detail::make(Kind::And, 0, {}, {std::move(a), std::move(b)});
}
inline Expr imp(Expr a, Expr b) {
  return detail::make(Kind::Imp, 0, {}, {std::move(a), std::move(b)});
}
inline Expr iff(Expr a, Expr b) {
  return detail::make(Kind::Iff, 0, {}, {std::move(a), std::move(b)});
}
inline Expr exists(VarIndex v, Expr body) {
  return detail::make(Kind::Exists, v, {}, {std::move(body)});
}
inline Expr forall(VarIndex v, Expr body) {
  return detail::make(Kind::Forall, v, {}, {std::move(body)});
}

/// Always-true / always-false formulas over v0.
inline Expr truth() { return equal(var(0), var(0)); }
inline Expr falsity() { return not_(truth()); }

}  // namespace mk

/// Same node kind and payload, new children.
inline Expr rebuild(const Expr& e, std::vector<Expr> args) {
  return detail::make(e.kind(), e.var(), e.name(), std::move(args));
}

inline Expr rebind(const Expr& binder, VarIndex v, Expr body) {
  return detail::make(binder.kind(), v, binder.name(), {std::move(body)});
}

inline std::vector<VarIndex> free_vars(const Expr& e) { return e.free_vars(); }

/// Syntactic depth: every constructor adds one; variables and constants are 0.
inline std::size_t depth(const Expr& e) {
  std::size_t d = 0;
  for (const auto& a : e.args()) d = std::max(d, depth(a));
  switch (e.kind()) {
    case Kind::Var:
    case Kind::Const:
      return 0;
    default:
      return d + 1;
  }
}

/// Nesting of logical operators only: not/or/and/imp/iff/ex/all/eps each add
/// one; atomic formulas, function application, variables and constants add
/// nothing.
inline std::size_t logical_depth(const Expr& e) {
  std::size_t d = 0;
  for (const auto& a : e.args()) d = std::max(d, logical_depth(a));
  switch (e.kind()) {
    case Kind::Var:
    case Kind::Const:
    case Kind::App:
    case Kind::Equal:
    case Kind::Rel:
      return d;
    default:
      return d + 1;
  }
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

/// Smallest index not in any of the given sorted sets.
inline VarIndex smallest_unused(std::initializer_list<const std::vector<VarIndex>*> sets) {
  for (VarIndex i = 0;; ++i) {
    bool used = false;
    for (const auto* s : sets)
      if (std::binary_search(s->begin(), s->end(), i)) used = true;
    if (!used) return i;
  }
}

/// x[t/v] with capture avoidance. A binder whose variable is free in t is
/// renamed to the smallest index free in neither its body nor t, and not v.
inline Expr substitute(const Expr& x, const Expr& t, VarIndex v) {
  if (!x.is_free(v)) return x;
  switch (x.kind()) {
    case Kind::Var:
      return t;  // x is free v, so x == v
    case Kind::Eps:
    case Kind::Exists:
    case Kind::Forall: {
      VarIndex w = x.var();
      Expr body = x.body();
      if (t.is_free(w)) {
        const std::vector<VarIndex> just_v{v};
        VarIndex fresh =
            smallest_unused({&body.free_vars(), &t.free_vars(), &just_v});
        body = substitute(body, mk::var(fresh), w);
        w = fresh;
      }
      return rebind(x, w, substitute(body, t, v));
    }
    default: {
      std::vector<Expr> args;
      args.reserve(x.args().size());
      for (const auto& a : x.args()) args.push_back(substitute(a, t, v));
      return rebuild(x, std::move(args));
    }
  }
}

// ---------------------------------------------------------------------------
// Desugaring
// ---------------------------------------------------------------------------

/// Eliminate and/imp/iff via not/or, and quantifiers via epsilon:
///   (ex v p)  => p[(eps v p)/v]
///   (all v p) => p[(eps v (not p))/v]
inline Expr desugar(const Expr& x) {
  if (!x.has_sugar()) return x;
  std::vector<Expr> args;
  args.reserve(x.args().size());
  for (const auto& a : x.args()) args.push_back(desugar(a));
  switch (x.kind()) {
    case Kind::And:
      return mk::not_(mk::or_(mk::not_(args[0]), mk::not_(args[1])));
    case Kind::Imp:
      return mk::or_(mk::not_(args[0]), args[1]);
    case Kind::Iff: {
      Expr fwd = mk::or_(mk::not_(args[0]), args[1]);
      Expr bwd = mk::or_(mk::not_(args[1]), args[0]);
      return mk::not_(mk::or_(mk::not_(fwd), mk::not_(bwd)));
    }
    case Kind::Exists:
      return substitute(args[0], mk::eps(x.var(), args[0]), x.var());
    case Kind::Forall:
      return substitute(args[0], mk::eps(x.var(), mk::not_(args[0])), x.var());
    case Kind::Eps:
      return mk::eps(x.var(), std::move(args[0]));
    default:
      return rebuild(x, std::move(args));
  }
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace detail {

inline const char* keyword(Kind k) {
  switch (k) {
    case Kind::Eps: return "eps";
    case Kind::Equal: return "=";
    case Kind::Not: return "not";
    case Kind::Or: return "or";
    case Kind::And: return "and";
    case Kind::Imp: return "imp";
    case Kind::Iff: return "iff";
    case Kind::Exists: return "ex";
    case Kind::Forall: return "all";
    default: return "";
  }
}

inline void print_to(std::string& out, const Expr& e) {
  switch (e.kind()) {
    case Kind::Var:
      out += 'v';
      out += std::to_string(e.var());
      return;
    case Kind::Const:
      out += e.name();
      return;
    case Kind::App:
    case Kind::Rel:
      out += '(';
      out += e.name();
      break;
    case Kind::Eps:
    case Kind::Exists:
    case Kind::Forall:
      out += '(';
      out += keyword(e.kind());
      out += " v";
      out += std::to_string(e.var());
      break;
    default:
      out += '(';
      out += keyword(e.kind());
      break;
  }
  for (const auto& a : e.args()) {
    out += ' ';
    print_to(out, a);
  }
  out += ')';
}

}  // namespace detail

inline std::string to_string(const Expr& e) {
  std::string out;
  detail::print_to(out, e);
  return out;
}

// ---------------------------------------------------------------------------
// Alpha-equivalence
// ---------------------------------------------------------------------------

namespace detail {

inline bool alpha_equal(const Expr& a, const Expr& b,
                        std::vector<std::pair<VarIndex, VarIndex>>& env) {
  if (a.kind() != b.kind() || a.name() != b.name() ||
      a.args().size() != b.args().size())
    return false;
  if (a.kind() == Kind::Var) {
    for (auto it = env.rbegin(); it != env.rend(); ++it) {
      bool ha = it->first == a.var(), hb = it->second == b.var();
      if (ha || hb) return ha && hb;
    }
    return a.var() == b.var();
  }
  if (is_binder_kind(a.kind())) env.emplace_back(a.var(), b.var());
  bool ok = true;
  for (std::size_t i = 0; ok && i < a.args().size(); ++i)
    ok = alpha_equal(a.arg(i), b.arg(i), env);
  if (is_binder_kind(a.kind())) env.pop_back();
  return ok;
}

}  // namespace detail

/// Equality up to renaming of bound variables.
inline bool alpha_equal(const Expr& a, const Expr& b) {
  std::vector<std::pair<VarIndex, VarIndex>> env;
  return detail::alpha_equal(a, b, env);
}

}  // namespace epscan
