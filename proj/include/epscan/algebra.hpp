#pragma once

// Finite Boolean and monadic algebras in atom-set form.
//
// An algebra with k atoms has elements 0 .. 2^k - 1, each the bitmask of the
// atoms below it, so meet/join/complement are &, |, ~ and only c0 needs
// checking. Congruences of such an algebra are determined by the ideal
// generated from the block of 0; the checks below exploit that and report a
// concrete operation instance whenever a partition fails.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "epscan/structure.hpp"
#include "epscan/syntax.hpp"

namespace epscan {

using AlgElem = std::uint32_t;

inline constexpr std::size_t kMaxAtoms = 20;

class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Compress the bits of x selected by mask into the low bits.
inline AlgElem extract_bits(AlgElem x, AlgElem mask) {
  AlgElem out = 0;
  for (AlgElem bit = 1; mask; mask &= mask - 1, bit <<= 1)
    if (x & mask & -mask) out |= bit;
  return out;
}

/// Inverse of extract_bits: spread the low bits of x over mask.
inline AlgElem deposit_bits(AlgElem x, AlgElem mask) {
  AlgElem out = 0;
  for (AlgElem bit = 1; mask; mask &= mask - 1, bit <<= 1)
    if (x & bit) out |= mask & -mask;
  return out;
}

/// A failing instance of one of the monadic laws.
struct LawViolation {
  int law;  // 1: c0(0)=0, 2: x <= c0(x), 3: c0(x & c0(y)) = c0(x) & c0(y)
  AlgElem x = 0, y = 0;
  std::string describe() const {
    switch (law) {
      case 1:
        return "c0(0) != 0";
      case 2:
        return "x <= c0(x) fails at x=" + std::to_string(x);
      default:
        return "c0(x & c0(y)) != c0(x) & c0(y) at x=" + std::to_string(x) +
               ", y=" + std::to_string(y);
    }
  }
};

class MonadicAlgebra {
 public:
  /// Validates the monadic laws; throws AlgebraError naming the instance.
  static MonadicAlgebra make(std::size_t atoms, std::vector<AlgElem> c0,
                             bool synthesized = false) {
    if (atoms > kMaxAtoms) throw AlgebraError("too many atoms: " + std::to_string(atoms));
    if (c0.size() != (std::size_t{1} << atoms))
      throw AlgebraError("c0 table has " + std::to_string(c0.size()) + " entries, expected " +
                         std::to_string(std::size_t{1} << atoms));
    const AlgElem top = static_cast<AlgElem>((std::size_t{1} << atoms) - 1);
    for (std::size_t x = 0; x < c0.size(); ++x)
      if (c0[x] & ~top) throw AlgebraError("c0(" + std::to_string(x) + ") out of range");
    if (auto v = find_law_violation(atoms, c0))
      throw AlgebraError("monadic law violated: " + v->describe());
    MonadicAlgebra a;
    a.k_ = atoms;
    a.c0_ = std::move(c0);
    a.synthesized_ = synthesized;
    return a;
  }

  /// c0(x) = top for x != 0.
  static MonadicAlgebra simple(std::size_t atoms, bool synthesized = false) {
    std::vector<AlgElem> c(std::size_t{1} << atoms, static_cast<AlgElem>((std::size_t{1} << atoms) - 1));
    c[0] = 0;
    return make(atoms, std::move(c), synthesized);
  }

  static MonadicAlgebra identity(std::size_t atoms) {
    std::vector<AlgElem> c(std::size_t{1} << atoms);
    std::iota(c.begin(), c.end(), AlgElem{0});
    return make(atoms, std::move(c));
  }

  static MonadicAlgebra two() { return simple(1); }

  /// Every finite monadic algebra arises this way: c0(x) is the union of the
  /// classes (atoms sharing a label) that x meets.
  static MonadicAlgebra from_atom_classes(const std::vector<std::size_t>& label) {
    const std::size_t k = label.size();
    std::vector<AlgElem> cls(k, 0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (label[i] == label[j]) cls[i] |= AlgElem{1} << j;
    std::vector<AlgElem> c(std::size_t{1} << k, 0);
    for (AlgElem x = 1; x < c.size(); ++x) {
      std::size_t i = static_cast<std::size_t>(std::countr_zero(x));
      c[x] = c[x & (x - 1)] | cls[i];
    }
    return make(k, std::move(c));
  }

  /// Laws checked: c0(0)=0, x <= c0 x, idempotence, then law 3 restricted to
  /// y in the image of c0, which covers every pair since y enters only as c0(y).
  static std::optional<LawViolation> find_law_violation(std::size_t atoms,
                                                        const std::vector<AlgElem>& c0) {
    const std::size_t n = std::size_t{1} << atoms;
    const AlgElem top = static_cast<AlgElem>(n - 1);
    if (c0[0] != 0) return LawViolation{1};
    for (AlgElem x = 0; x < n; ++x)
      if ((x & ~c0[x]) != 0) return LawViolation{2, x};
    // c0(top & c0(x)) = c0(c0 x) must equal c0(top) & c0(x) = c0(x).
    for (AlgElem x = 0; x < n; ++x)
      if (c0[c0[x]] != c0[x]) return LawViolation{3, top, x};
    std::vector<AlgElem> image;
    std::vector<bool> seen(n, false);
    for (AlgElem x = 0; x < n; ++x)
      if (!seen[c0[x]]) {
        seen[c0[x]] = true;
        image.push_back(c0[x]);
      }
    for (AlgElem q : image)
      for (AlgElem x = 0; x < n; ++x)
        if (c0[x & q] != (c0[x] & q)) return LawViolation{3, x, q};
    return std::nullopt;
  }

  std::size_t atom_count() const { return k_; }
  std::size_t size() const { return std::size_t{1} << k_; }
  AlgElem top() const { return static_cast<AlgElem>(size() - 1); }
  AlgElem meet(AlgElem x, AlgElem y) const { return x & y; }
  AlgElem join(AlgElem x, AlgElem y) const { return x | y; }
  AlgElem compl_(AlgElem x) const { return top() & ~x; }
  AlgElem c0(AlgElem x) const { return c0_[x]; }
  bool leq(AlgElem x, AlgElem y) const { return (x & ~y) == 0; }
  const std::vector<AlgElem>& c0_table() const { return c0_; }
  bool synthesized() const { return synthesized_; }
  bool degenerate() const { return k_ == 0; }

 private:
  std::size_t k_ = 0;
  std::vector<AlgElem> c0_{0};
  bool synthesized_ = false;
};

/// The k minimal nonzero elements.
inline std::vector<AlgElem> atoms(const MonadicAlgebra& a) {
  std::vector<AlgElem> out;
  for (std::size_t i = 0; i < a.atom_count(); ++i) out.push_back(AlgElem{1} << i);
  return out;
}

// ---------------------------------------------------------------------------
// Neat reduct
// ---------------------------------------------------------------------------

struct NeatReduct {
  MonadicAlgebra algebra;        // c0 is the identity here
  std::vector<AlgElem> embed;    // element of nr0 -> element of the source
};

/// The subalgebra of c0-fixed points. Its atoms are the distinct c0(alpha)
/// for source atoms alpha; closure under the Boolean operations is verified
/// by checking those are disjoint, cover top, and generate every fixed point.
inline NeatReduct nr0(const MonadicAlgebra& a) {
  std::vector<AlgElem> blocks;
  for (AlgElem alpha : atoms(a)) {
    AlgElem c = a.c0(alpha);
    if (std::find(blocks.begin(), blocks.end(), c) == blocks.end()) blocks.push_back(c);
  }
  std::sort(blocks.begin(), blocks.end());
  AlgElem cover = 0;
  for (AlgElem b : blocks) {
    if (cover & b) throw AlgebraError("nr0: fixed-point atoms overlap");
    cover |= b;
  }
  if (cover != a.top()) throw AlgebraError("nr0: fixed-point atoms do not cover top");
  std::size_t fixed = 0;
  for (AlgElem x = 0; x < a.size(); ++x) {
    if (a.c0(x) != x) continue;
    ++fixed;
    AlgElem joined = 0;
    for (AlgElem b : blocks)
      if (b & x) joined |= b;
    if (joined != x) throw AlgebraError("nr0: fixed point is not a join of fixed atoms");
  }
  if (fixed != (std::size_t{1} << blocks.size()))
    throw AlgebraError("nr0: fixed points are not closed under the Boolean operations");
  NeatReduct r{MonadicAlgebra::identity(blocks.size()), {}};
  r.embed.resize(r.algebra.size());
  for (AlgElem y = 0; y < r.algebra.size(); ++y) {
    AlgElem x = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i)
      if (y >> i & 1) x |= blocks[i];
    r.embed[y] = x;
  }
  return r;
}

/// Nr0 has exactly the two elements 0 and top (and 0 != top).
inline bool nr0_is_two(const MonadicAlgebra& a) { return nr0(a).algebra.atom_count() == 1; }

// ---------------------------------------------------------------------------
// Isomorphism
// ---------------------------------------------------------------------------

struct Isomorphism {
  std::vector<std::size_t> atom_map;  // atom i of A -> atom atom_map[i] of B
  AlgElem operator()(AlgElem x) const {
    AlgElem y = 0;
    for (std::size_t i = 0; i < atom_map.size(); ++i)
      if (x >> i & 1) y |= AlgElem{1} << atom_map[i];
    return y;
  }
};

/// Checks that the atom bijection commutes with c0 on every element.
inline bool is_isomorphism(const MonadicAlgebra& a, const MonadicAlgebra& b,
                           const Isomorphism& iso) {
  if (a.atom_count() != b.atom_count() || iso.atom_map.size() != a.atom_count()) return false;
  AlgElem hit = 0;
  for (auto j : iso.atom_map) hit |= AlgElem{1} << j;
  if (hit != b.top()) return false;
  for (AlgElem x = 0; x < a.size(); ++x)
    if (iso(a.c0(x)) != b.c0(iso(x))) return false;
  return true;
}

/// Backtracking over atom bijections. c0 is join-preserving in a monadic
/// algebra, so agreement on atoms is checked as soon as an atom and its
/// whole c0-closure are mapped; the final map is verified on every element.
inline std::optional<Isomorphism> is_isomorphic(const MonadicAlgebra& a,
                                                const MonadicAlgebra& b) {
  const std::size_t k = a.atom_count();
  if (k != b.atom_count()) return std::nullopt;
  auto profile = [](const MonadicAlgebra& m) {
    std::vector<int> p;
    for (AlgElem x : atoms(m)) p.push_back(std::popcount(m.c0(x)));
    return p;
  };
  const auto pa = profile(a), pb = profile(b);
  {
    auto sa = pa, sb = pb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }

  Isomorphism iso{std::vector<std::size_t>(k, 0)};
  std::vector<bool> used(k, false);
  AlgElem mapped = 0;

  auto image_of = [&](AlgElem x) {
    AlgElem y = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (x >> i & 1) y |= AlgElem{1} << iso.atom_map[i];
    return y;
  };
  auto consistent = [&]() {
    for (std::size_t i = 0; i < k; ++i) {
      if (!(mapped >> i & 1)) continue;
      AlgElem c = a.c0(AlgElem{1} << i);
      if ((c & ~mapped) != 0) continue;
      if (image_of(c) != b.c0(AlgElem{1} << iso.atom_map[i])) return false;
    }
    return true;
  };

  std::function<bool(std::size_t)> search = [&](std::size_t i) -> bool {
    if (i == k) return is_isomorphism(a, b, iso);
    for (std::size_t j = 0; j < k; ++j) {
      if (used[j] || pa[i] != pb[j]) continue;
      iso.atom_map[i] = j;
      used[j] = true;
      mapped |= AlgElem{1} << i;
      if (consistent() && search(i + 1)) return true;
      used[j] = false;
      mapped &= ~(AlgElem{1} << i);
    }
    return false;
  };
  if (search(0)) return iso;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Partitions and congruences
// ---------------------------------------------------------------------------

/// Block id per element, ids numbered by first occurrence.
struct Partition {
  std::vector<std::uint32_t> block;

  static Partition from_labels(const std::vector<std::uint64_t>& labels) {
    Partition p;
    p.block.resize(labels.size());
    std::unordered_map<std::uint64_t, std::uint32_t> ids;
    for (std::size_t x = 0; x < labels.size(); ++x) {
      auto [it, fresh] = ids.emplace(labels[x], static_cast<std::uint32_t>(ids.size()));
      p.block[x] = it->second;
    }
    return p;
  }
  static Partition discrete(std::size_t n) {
    Partition p;
    p.block.resize(n);
    std::iota(p.block.begin(), p.block.end(), 0u);
    return p;
  }
  static Partition total(std::size_t n) {
    Partition p;
    p.block.assign(n, 0);
    return p;
  }

  std::size_t size() const { return block.size(); }
  std::size_t block_count() const {
    return block.empty() ? 0 : *std::max_element(block.begin(), block.end()) + 1;
  }
  std::vector<std::size_t> block_sizes() const {
    std::vector<std::size_t> s(block_count(), 0);
    for (auto b : block) ++s[b];
    return s;
  }
  bool same(AlgElem x, AlgElem y) const { return block[x] == block[y]; }
  friend bool operator==(const Partition&, const Partition&) = default;
};

/// x ~ x2 and y ~ y2 but op(x, y) and op(x2, y2) land in different blocks.
/// For unary operations y and y2 are unused.
struct OperationInstance {
  std::string op;  // "meet", "join", "compl", "c0"
  AlgElem x = 0, y = 0, x2 = 0, y2 = 0;
  std::string describe() const {
    if (op == "compl" || op == "c0")
      return op + "(" + std::to_string(x) + ") vs " + op + "(" + std::to_string(x2) + ")";
    return op + "(" + std::to_string(x) + ", " + std::to_string(y) + ") vs " + op + "(" +
           std::to_string(x2) + ", " + std::to_string(y2) + ")";
  }
};

struct CongruenceVerdict {
  bool congruence = true;
  std::optional<OperationInstance> violation;
  AlgElem ideal = 0;  // join of the block of 0, meaningful when congruence
};

/// O(|A| * k): the block of 0 must be the principal ideal of a = join of the
/// block, blocks must be the cosets of that ideal, and c0 must respect the
/// cosets. A synthesized c0 is not part of the signature and is not checked.
inline CongruenceVerdict check_congruence(const MonadicAlgebra& alg, const Partition& p) {
  if (p.size() != alg.size()) throw AlgebraError("partition size does not match algebra");
  const std::size_t n = alg.size(), k = alg.atom_count();
  const AlgElem top = alg.top();
  auto fail = [](OperationInstance inst) {
    return CongruenceVerdict{false, std::move(inst), 0};
  };

  AlgElem a = 0;
  for (AlgElem x = 0; x < n; ++x)
    if (p.same(x, 0)) a |= x;
  // Downward closure of the block of 0.
  for (AlgElem x = 0; x < n; ++x) {
    if (!p.same(x, 0)) continue;
    for (std::size_t i = 0; i < k; ++i) {
      AlgElem alpha = AlgElem{1} << i;
      if ((x & alpha) && !p.same(x & ~alpha, 0))
        return fail({"meet", x, top & ~alpha, 0, top & ~alpha});
    }
  }
  // Closure under joins with atoms of a; together with downward closure this
  // makes the block exactly the elements below a.
  for (AlgElem x = 0; x < n; ++x) {
    if (!p.same(x, 0)) continue;
    for (std::size_t i = 0; i < k; ++i) {
      AlgElem alpha = AlgElem{1} << i;
      if ((a & alpha) && !p.same(x | alpha, 0)) return fail({"join", x, alpha, 0, 0});
    }
  }
  // Every element shares a block with its part outside a.
  for (AlgElem x = 0; x < n; ++x) {
    AlgElem r = x & ~a;
    if (!p.same(x, r)) return fail({"join", r, x & a, r, 0});
  }
  // Distinct parts outside a lie in distinct blocks.
  std::unordered_map<std::uint32_t, AlgElem> rep;
  for (AlgElem x = 0; x < n; ++x) {
    if (x & a) continue;
    auto [it, fresh] = rep.emplace(p.block[x], x);
    if (!fresh) {
      AlgElem y = it->second;
      if ((x & ~y) == 0) std::swap(x, y);
      // x ~ y, yet x & ~y is a nonzero element outside a while y & ~y = 0.
      return fail({"meet", x, top & ~y, y, top & ~y});
    }
  }
  if (!alg.synthesized())
    for (AlgElem x = 0; x < n; ++x) {
      AlgElem r = x & ~a;
      if (!p.same(alg.c0(x), alg.c0(r))) return fail({"c0", x, 0, r, 0});
    }
  return {true, std::nullopt, a};
}

inline bool is_congruence(const MonadicAlgebra& alg, const Partition& p) {
  return check_congruence(alg, p).congruence;
}

/// Independent check: for every operation, fill a block-level result table
/// from all element instances and report the first inconsistency.
inline CongruenceVerdict check_congruence_brute_force(const MonadicAlgebra& alg,
                                                      const Partition& p) {
  if (p.size() != alg.size()) throw AlgebraError("partition size does not match algebra");
  const std::size_t n = alg.size(), b = p.block_count();
  constexpr std::uint32_t kUnset = 0xffffffffu;
  struct Witness {
    AlgElem x, y;
  };

  auto unary = [&](const char* name, auto op) -> std::optional<OperationInstance> {
    std::vector<std::uint32_t> table(b, kUnset);
    std::vector<AlgElem> first(b, 0);
    for (AlgElem x = 0; x < n; ++x) {
      auto bx = p.block[x];
      auto r = p.block[op(x)];
      if (table[bx] == kUnset) {
        table[bx] = r;
        first[bx] = x;
      } else if (table[bx] != r) {
        return OperationInstance{name, first[bx], 0, x, 0};
      }
    }
    return std::nullopt;
  };
  auto binary = [&](const char* name, auto op) -> std::optional<OperationInstance> {
    std::vector<std::uint32_t> table(b * b, kUnset);
    std::vector<Witness> first(b * b);
    for (AlgElem x = 0; x < n; ++x)
      for (AlgElem y = 0; y < n; ++y) {
        std::size_t cell = std::size_t{p.block[x]} * b + p.block[y];
        auto r = p.block[op(x, y)];
        if (table[cell] == kUnset) {
          table[cell] = r;
          first[cell] = {x, y};
        } else if (table[cell] != r) {
          return OperationInstance{name, first[cell].x, first[cell].y, x, y};
        }
      }
    return std::nullopt;
  };

  if (auto v = binary("meet", [&](AlgElem x, AlgElem y) { return alg.meet(x, y); }))
    return {false, v, 0};
  if (auto v = binary("join", [&](AlgElem x, AlgElem y) { return alg.join(x, y); }))
    return {false, v, 0};
  if (auto v = unary("compl", [&](AlgElem x) { return alg.compl_(x); })) return {false, v, 0};
  if (!alg.synthesized())
    if (auto v = unary("c0", [&](AlgElem x) { return alg.c0(x); })) return {false, v, 0};
  AlgElem a = 0;
  for (AlgElem x = 0; x < n; ++x)
    if (p.same(x, 0)) a |= x;
  return {true, std::nullopt, a};
}

/// Partition into the cosets x & ~a.
inline Partition ideal_partition(const MonadicAlgebra& alg, AlgElem a) {
  std::vector<std::uint64_t> labels(alg.size());
  for (AlgElem x = 0; x < alg.size(); ++x) labels[x] = x & ~a;
  return Partition::from_labels(labels);
}

struct GeneratedCongruence {
  AlgElem ideal;
  Partition partition;
};

/// Least congruence containing the pairs. The block of 0 is the monadic ideal
/// generated by the symmetric differences; since c0 is an idempotent closure,
/// that ideal is principal at c0(join of the differences). A synthesized c0
/// is ignored, giving the Boolean congruence.
inline GeneratedCongruence generated_congruence(
    const MonadicAlgebra& alg, const std::vector<std::pair<AlgElem, AlgElem>>& pairs) {
  AlgElem d = 0;
  for (auto [x, y] : pairs) {
    if (x >= alg.size() || y >= alg.size()) throw AlgebraError("pair element out of range");
    d |= x ^ y;
  }
  AlgElem a = alg.synthesized() ? d : alg.c0(d);
  return {a, ideal_partition(alg, a)};
}

/// Pairs x ~ y for all x, y in a common block, as a spanning list.
inline std::vector<std::pair<AlgElem, AlgElem>> partition_pairs(const Partition& p) {
  std::vector<std::pair<AlgElem, AlgElem>> out;
  std::unordered_map<std::uint32_t, AlgElem> first;
  for (AlgElem x = 0; x < p.size(); ++x) {
    auto [it, fresh] = first.emplace(p.block[x], x);
    if (!fresh) out.emplace_back(it->second, x);
  }
  return out;
}

struct Quotient {
  MonadicAlgebra algebra;
  AlgElem ideal = 0;  // elements collapsed onto 0
  AlgElem keep = 0;   // source atoms that survive
  bool degenerate = false;
  AlgElem project(AlgElem x) const { return extract_bits(x, keep); }
  /// Least preimage.
  AlgElem lift(AlgElem y) const { return deposit_bits(y, keep); }
};

/// Quotient by a congruence. Atoms below the ideal vanish; the projection is
/// verified to be a surjective homomorphism onto the result.
inline Quotient quotient(const MonadicAlgebra& alg, const Partition& p) {
  auto verdict = check_congruence(alg, p);
  if (!verdict.congruence)
    throw AlgebraError("quotient: partition is not a congruence (" +
                       verdict.violation->describe() + ")");
  const AlgElem a = verdict.ideal;
  const AlgElem keep = alg.top() & ~a;
  const std::size_t k2 = static_cast<std::size_t>(std::popcount(keep));
  std::vector<AlgElem> c0(std::size_t{1} << k2);
  for (AlgElem y = 0; y < c0.size(); ++y) c0[y] = extract_bits(alg.c0(deposit_bits(y, keep)), keep);
  Quotient q{alg.synthesized() ? MonadicAlgebra::simple(k2, true)
                               : MonadicAlgebra::make(k2, std::move(c0)),
             a, keep, k2 == 0};
  for (AlgElem x = 0; x < alg.size(); ++x) {
    if (!alg.synthesized() && q.project(alg.c0(x)) != q.algebra.c0(q.project(x)))
      throw AlgebraError("quotient: projection does not commute with c0");
    if (p.same(x, 0) != (q.project(x) == 0))
      throw AlgebraError("quotient: projection kernel differs from the congruence");
  }
  return q;
}

// ---------------------------------------------------------------------------
// Reading structures as algebras
// ---------------------------------------------------------------------------

enum class AlgebraKind { BA, CA1 };

inline const char* to_string(AlgebraKind k) { return k == AlgebraKind::BA ? "BA" : "CA1"; }

/// CA1 when the signature has a unary c, BA otherwise.
inline AlgebraKind detect_kind(const Signature& sig) {
  for (const auto& f : sig.functions())
    if (f.name == "c" && f.arity == 1) return AlgebraKind::CA1;
  return AlgebraKind::BA;
}

struct StructureAlgebra {
  MonadicAlgebra algebra;
  std::vector<AlgElem> encode;   // carrier element -> algebra element
  std::vector<Element> decode;   // algebra element -> carrier element
  AlgebraKind kind;
};

/// Reads a structure interpreting meet/2, join/2, compl/1, zero, one (and c/1
/// for CA1). The atoms are found from the order x <= y iff meet(x,y) = x and
/// the encoding is checked to be an isomorphism onto the atom-set algebra.
inline StructureAlgebra from_structure(const ChoiceStructure& m, AlgebraKind kind) {
  const Signature& sig = m.signature();
  auto fun = [&](const std::string& name, std::size_t arity) {
    auto i = sig.function_index(name);
    if (!i || sig.functions()[*i].arity != arity)
      throw AlgebraError("signature mismatch: needs function " + name + "/" +
                         std::to_string(arity));
    return *i;
  };
  auto cst = [&](const std::string& name) {
    auto i = sig.constant_index(name);
    if (!i) throw AlgebraError("signature mismatch: needs constant " + name);
    return m.constant(*i);
  };
  const std::size_t f_meet = fun("meet", 2), f_join = fun("join", 2), f_compl = fun("compl", 1);
  const Element zero = cst("zero"), one = cst("one");
  std::optional<std::size_t> f_c;
  if (kind == AlgebraKind::CA1) f_c = fun("c", 1);

  const std::size_t n = m.size();
  auto meet = [&](Element x, Element y) {
    Element args[2] = {x, y};
    return m.apply(f_meet, args);
  };
  auto join = [&](Element x, Element y) {
    Element args[2] = {x, y};
    return m.apply(f_join, args);
  };
  auto leq = [&](Element x, Element y) { return meet(x, y) == x; };
  std::vector<Element> atom_list;
  for (Element x = 0; x < n; ++x) {
    if (x == zero) continue;
    bool minimal = true;
    for (Element y = 0; y < n && minimal; ++y)
      if (y != zero && y != x && leq(y, x)) minimal = false;
    if (minimal) atom_list.push_back(x);
  }
  const std::size_t k = atom_list.size();
  if (k > 5 || (std::size_t{1} << k) != n)
    throw AlgebraError("law violation: " + std::to_string(n) + " elements but " +
                       std::to_string(k) + " atoms");
  StructureAlgebra out{MonadicAlgebra{}, std::vector<AlgElem>(n), std::vector<Element>(n, 0),
                       kind};
  std::vector<bool> hit(n, false);
  for (Element x = 0; x < n; ++x) {
    AlgElem e = 0;
    for (std::size_t i = 0; i < k; ++i)
      if (leq(atom_list[i], x)) e |= AlgElem{1} << i;
    if (hit[e])
      throw AlgebraError("law violation: elements " + std::to_string(out.decode[e]) + " and " +
                         std::to_string(x) + " lie above the same atoms");
    hit[e] = true;
    out.encode[x] = e;
    out.decode[e] = x;
  }
  const AlgElem top = static_cast<AlgElem>(n - 1);
  auto bad = [](const std::string& what) { throw AlgebraError("law violation: " + what); };
  if (out.encode[zero] != 0) bad("zero is not the least element");
  if (out.encode[one] != top) bad("one is not the greatest element");
  for (Element x = 0; x < n; ++x) {
    Element args[1] = {x};
    if (out.encode[m.apply(f_compl, args)] != (top & ~out.encode[x]))
      bad("compl(" + std::to_string(x) + ") is not the complement");
    for (Element y = 0; y < n; ++y) {
      if (out.encode[meet(x, y)] != (out.encode[x] & out.encode[y]))
        bad("meet(" + std::to_string(x) + ", " + std::to_string(y) + ") is not the infimum");
      if (out.encode[join(x, y)] != (out.encode[x] | out.encode[y]))
        bad("join(" + std::to_string(x) + ", " + std::to_string(y) + ") is not the supremum");
    }
  }
  if (kind == AlgebraKind::BA) {
    out.algebra = MonadicAlgebra::simple(k, true);
    return out;
  }
  std::vector<AlgElem> c0(n);
  for (Element x = 0; x < n; ++x) {
    Element args[1] = {x};
    c0[out.encode[x]] = out.encode[m.apply(*f_c, args)];
  }
  if (auto v = MonadicAlgebra::find_law_violation(k, c0)) {
    // Report the instance in carrier terms.
    std::string what = v->law == 1   ? "c(zero) != zero"
                       : v->law == 2 ? "x <= c(x) fails at x=" + std::to_string(out.decode[v->x])
                                     : "c(meet(x, c(y))) != meet(c(x), c(y)) at x=" +
                                           std::to_string(out.decode[v->x]) + ", c(y)=" +
                                           std::to_string(out.decode[v->y]);
    bad(what);
  }
  out.algebra = MonadicAlgebra::make(k, std::move(c0));
  return out;
}

/// The algebra as a structure over meet/join/compl/zero/one (plus c when
/// with_c), carrier relabeled so that algebra element x becomes perm[x].
inline ChoiceStructure algebra_structure(const MonadicAlgebra& a, bool with_c,
                                         std::vector<Element> perm = {}) {
  const std::size_t n = a.size();
  if (n > kMaxCarrier) throw AlgebraError("algebra too large for a structure");
  if (perm.empty()) {
    perm.resize(n);
    std::iota(perm.begin(), perm.end(), Element{0});
  }
  std::vector<AlgElem> inv(n);
  for (AlgElem x = 0; x < n; ++x) inv[perm[x]] = x;
  Signature sig;
  sig.add_function("meet", 2).add_function("join", 2).add_function("compl", 1);
  if (with_c) sig.add_function("c", 1);
  sig.add_constant("zero").add_constant("one");
  std::vector<Element> meet(n * n), join(n * n), compl_(n), c(n);
  for (Element x = 0; x < n; ++x) {
    compl_[x] = perm[a.compl_(inv[x])];
    c[x] = perm[a.c0(inv[x])];
    for (Element y = 0; y < n; ++y) {
      meet[x * n + y] = perm[a.meet(inv[x], inv[y])];
      join[x * n + y] = perm[a.join(inv[x], inv[y])];
    }
  }
  std::vector<std::vector<Element>> funs{meet, join, compl_};
  if (with_c) funs.push_back(c);
  return ChoiceStructure::make(std::move(sig), n, {}, std::move(funs),
                               {perm[0], perm[a.top()]}, MinRule{perm[0]});
}

}  // namespace epscan
