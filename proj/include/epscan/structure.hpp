#pragma once

// Finite choice structures: a first-order structure over carrier {0..n-1}
// together with a choice function on its power set.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "epscan/syntax.hpp"

namespace epscan {

using Element = std::uint32_t;
/// Subset of the carrier as a bitmask; bit i set iff element i is a member.
using Subset = std::uint32_t;

inline constexpr std::size_t kMaxCarrier = 20;

inline Subset full_set(std::size_t n) {
  return n >= 32 ? ~Subset{0} : (Subset{1} << n) - 1;
}
inline bool contains(Subset s, Element e) { return (s >> e) & 1u; }
inline Subset singleton(Element e) { return Subset{1} << e; }

inline std::string subset_to_string(Subset s) {
  std::string out = "{";
  bool first = true;
  for (Element e = 0; s >> e; ++e) {
    if (!contains(s, e)) continue;
    if (!first) out += ',';
    out += std::to_string(e);
    first = false;
  }
  return out + "}";
}

inline std::vector<Element> subset_elements(Subset s) {
  std::vector<Element> out;
  for (Element e = 0; s >> e; ++e)
    if (contains(s, e)) out.push_back(e);
  return out;
}

/// Least index; the empty set goes to the designated element.
struct MinRule {
  Element empty = 0;
};

/// f(S) for every S, indexed by subset mask.
struct ExplicitTable {
  std::vector<Element> table;
};

using ChoiceRule = std::variant<MinRule, ExplicitTable>;

class StructureError : public std::runtime_error {
 public:
  StructureError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                                : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Unvalidated contents of a structure file.
struct RawStructure {
  Signature sig;
  std::optional<std::size_t> carrier;
  std::map<std::string, std::set<std::vector<Element>>> relations;
  std::map<std::string, std::map<std::vector<Element>, Element>> functions;
  std::map<std::string, Element> constants;
  bool explicit_choice = false;
  std::map<Subset, Element> choice_table;
  std::optional<Element> choice_empty;
};

class ChoiceStructure {
 public:
  ChoiceStructure() = default;

  const Signature& signature() const { return sig_; }
  std::size_t size() const { return n_; }
  Subset carrier() const { return full_set(n_); }
  const ChoiceRule& choice_rule() const { return choice_; }

  Element choose(Subset s) const {
    if (const auto* m = std::get_if<MinRule>(&choice_))
      return s == 0 ? m->empty : static_cast<Element>(std::countr_zero(s));
    return std::get<ExplicitTable>(choice_).table[s];
  }

  Element constant(std::size_t ci) const { return constants_[ci]; }
  Element apply(std::size_t fi, const Element* args) const {
    return functions_[fi][tuple_index(args, sig_.functions()[fi].arity)];
  }
  bool holds(std::size_t ri, const Element* args) const {
    return relations_[ri][tuple_index(args, sig_.relations()[ri].arity)] != 0;
  }
  Element apply(std::size_t fi, const std::vector<Element>& args) const {
    return apply(fi, args.data());
  }
  bool holds(std::size_t ri, const std::vector<Element>& args) const {
    return holds(ri, args.data());
  }

  /// Flat tables in mixed-radix argument order.
  const std::vector<Element>& function_table(std::size_t fi) const {
    return functions_[fi];
  }
  const std::vector<std::uint8_t>& relation_table(std::size_t ri) const {
    return relations_[ri];
  }
  const std::vector<Element>& constants() const { return constants_; }

  std::size_t tuple_index(const Element* args, std::size_t arity) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < arity; ++i) idx = idx * n_ + args[i];
    return idx;
  }

  std::vector<Element> tuple_at(std::size_t idx, std::size_t arity) const {
    std::vector<Element> t(arity);
    for (std::size_t i = arity; i-- > 0;) {
      t[i] = static_cast<Element>(idx % n_);
      idx /= n_;
    }
    return t;
  }

  static std::size_t power(std::size_t n, std::size_t k) {
    std::size_t r = 1;
    while (k--) r *= n;
    return r;
  }

  /// Build from flat tables; runs every validity check.
  static ChoiceStructure make(Signature sig, std::size_t n,
                              std::vector<std::vector<std::uint8_t>> relations,
                              std::vector<std::vector<Element>> functions,
                              std::vector<Element> constants, ChoiceRule choice) {
    ChoiceStructure s;
    s.sig_ = std::move(sig);
    s.n_ = n;
    s.relations_ = std::move(relations);
    s.functions_ = std::move(functions);
    s.constants_ = std::move(constants);
    s.choice_ = std::move(choice);
    s.check();
    return s;
  }

 private:
  void check() const {
    if (n_ == 0) throw StructureError("carrier must be nonempty");
    if (n_ > kMaxCarrier)
      throw StructureError("carrier larger than " + std::to_string(kMaxCarrier));
    const auto& rels = sig_.relations();
    const auto& funs = sig_.functions();
    if (relations_.size() != rels.size() || functions_.size() != funs.size() ||
        constants_.size() != sig_.constants().size())
      throw StructureError("tables do not match the signature");
    for (std::size_t i = 0; i < rels.size(); ++i)
      if (relations_[i].size() != power(n_, rels[i].arity))
        throw StructureError("relation table of '" + rels[i].name + "' has wrong size");
    for (std::size_t i = 0; i < funs.size(); ++i) {
      if (functions_[i].size() != power(n_, funs[i].arity))
        throw StructureError("function table partial: '" + funs[i].name + "'");
      for (Element v : functions_[i])
        if (v >= n_)
          throw StructureError("function '" + funs[i].name + "' value out of range");
    }
    for (std::size_t i = 0; i < constants_.size(); ++i)
      if (constants_[i] >= n_)
        throw StructureError("constant '" + sig_.constants()[i] + "' out of range");
    if (const auto* m = std::get_if<MinRule>(&choice_)) {
      if (m->empty >= n_) throw StructureError("choice-empty out of range");
    } else {
      const auto& t = std::get<ExplicitTable>(choice_).table;
      if (t.size() != (std::size_t{1} << n_))
        throw StructureError("explicit choice table not total");
      for (Subset s = 0; s < t.size(); ++s) {
        if (t[s] >= n_) throw StructureError("choice value out of range");
        if (s != 0 && !contains(s, t[s]))
          throw StructureError("choice not in set: " + subset_to_string(s) +
                               " -> " + std::to_string(t[s]));
      }
    }
  }

  Signature sig_;
  std::size_t n_ = 0;
  std::vector<std::vector<std::uint8_t>> relations_;
  std::vector<std::vector<Element>> functions_;
  std::vector<Element> constants_;
  ChoiceRule choice_ = MinRule{};
};

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

inline Element parse_index(const std::string& s, std::size_t line) {
  if (s.empty() || s.size() > 9 ||
      s.find_first_not_of("0123456789") != std::string::npos)
    throw StructureError("expected an element index, got '" + s + "'", line);
  return static_cast<Element>(std::stoul(s));
}

inline std::size_t parse_count(const std::string& s, std::size_t line) {
  return parse_index(s, line);
}

/// "{1,2,3}" -> mask.
inline Subset parse_braced_set(std::string s, std::size_t line) {
  if (s.size() < 2 || s.front() != '{' || s.back() != '}')
    throw StructureError("expected a set like {0,1}", line);
  s = s.substr(1, s.size() - 2);
  Subset out = 0;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    Element e = parse_index(item, line);
    if (e >= kMaxCarrier) throw StructureError("set element out of range", line);
    out |= singleton(e);
  }
  return out;
}

}  // namespace detail

/// Parse a structure file without checking totality or choice validity.
inline RawStructure read_raw_structure(std::string_view text) {
  RawStructure raw;
  std::vector<std::pair<std::size_t, std::string>> lines;
  {
    std::istringstream in{std::string(text)};
    std::string l;
    std::size_t no = 0;
    while (std::getline(in, l)) {
      ++no;
      if (auto h = l.find('#'); h != std::string::npos) l.erase(h);
      if (l.find_first_not_of(" \t\r") == std::string::npos) continue;
      lines.emplace_back(no, l);
    }
  }
  std::size_t i = 0;
  auto need_carrier = [&](std::size_t line) {
    if (!raw.carrier) throw StructureError("'carrier' must come first", line);
  };
  auto block = [&](auto&& on_line) {
    while (true) {
      if (i >= lines.size()) throw StructureError("missing 'end'");
      auto [no, l] = lines[i++];
      auto w = detail::split_ws(l);
      if (w.size() == 1 && w[0] == "end") return;
      on_line(no, w);
    }
  };
  bool have_signature = false;
  while (i < lines.size()) {
    auto [no, l] = lines[i++];
    auto w = detail::split_ws(l);
    const std::string& kw = w[0];
    try {
      if (kw == "signature" && w.size() == 1) {
        if (have_signature) throw StructureError("duplicate signature block", no);
        have_signature = true;
        block([&](std::size_t ln, const std::vector<std::string>& d) {
          try {
            if (d[0] == "rel" && d.size() == 3)
              raw.sig.add_relation(d[1], detail::parse_count(d[2], ln));
            else if (d[0] == "fun" && d.size() == 3)
              raw.sig.add_function(d[1], detail::parse_count(d[2], ln));
            else if (d[0] == "const" && d.size() == 2)
              raw.sig.add_constant(d[1]);
            else
              throw StructureError("bad signature line", ln);
          } catch (const SignatureError& e) {
            throw StructureError(e.what(), ln);
          }
        });
      } else if (kw == "carrier" && w.size() == 2) {
        if (!have_signature) throw StructureError("'signature' must come first", no);
        if (raw.carrier) throw StructureError("duplicate carrier", no);
        std::size_t n = detail::parse_count(w[1], no);
        if (n == 0 || n > kMaxCarrier)
          throw StructureError("carrier size must be in 1.." +
                                   std::to_string(kMaxCarrier), no);
        raw.carrier = n;
      } else if (kw == "rel" && w.size() == 2) {
        need_carrier(no);
        auto ri = raw.sig.relation_index(w[1]);
        if (!ri) throw StructureError("undeclared relation '" + w[1] + "'", no);
        std::size_t arity = raw.sig.relations()[*ri].arity;
        auto& tuples = raw.relations[w[1]];
        block([&](std::size_t ln, const std::vector<std::string>& d) {
          if (d.size() != arity) throw StructureError("relation tuple has wrong arity", ln);
          std::vector<Element> t;
          for (const auto& s : d) {
            Element e = detail::parse_index(s, ln);
            if (e >= *raw.carrier) throw StructureError("relation tuple out of range", ln);
            t.push_back(e);
          }
          tuples.insert(t);
        });
      } else if (kw == "fun" && w.size() == 2) {
        need_carrier(no);
        auto fi = raw.sig.function_index(w[1]);
        if (!fi) throw StructureError("undeclared function '" + w[1] + "'", no);
        std::size_t arity = raw.sig.functions()[*fi].arity;
        auto& table = raw.functions[w[1]];
        block([&](std::size_t ln, const std::vector<std::string>& d) {
          if (d.size() != arity + 2 || d[arity] != "->")
            throw StructureError("expected 'i ... -> k'", ln);
          std::vector<Element> t;
          for (std::size_t k = 0; k < arity; ++k) {
            Element e = detail::parse_index(d[k], ln);
            if (e >= *raw.carrier) throw StructureError("function argument out of range", ln);
            t.push_back(e);
          }
          Element v = detail::parse_index(d[arity + 1], ln);
          if (v >= *raw.carrier) throw StructureError("function value out of range", ln);
          if (!table.emplace(t, v).second)
            throw StructureError("duplicate function entry", ln);
        });
      } else if (kw == "const" && w.size() == 3) {
        need_carrier(no);
        if (!raw.sig.constant_index(w[1]))
          throw StructureError("undeclared constant '" + w[1] + "'", no);
        Element v = detail::parse_index(w[2], no);
        if (v >= *raw.carrier) throw StructureError("constant value out of range", no);
        if (!raw.constants.emplace(w[1], v).second)
          throw StructureError("duplicate constant value", no);
      } else if (kw == "choice" && w.size() == 2 && w[1] == "min") {
        need_carrier(no);
        raw.explicit_choice = false;
      } else if (kw == "choice" && w.size() == 2 && w[1] == "table") {
        need_carrier(no);
        raw.explicit_choice = true;
        block([&](std::size_t ln, const std::vector<std::string>& d) {
          if (d.size() != 3 || d[1] != "->") throw StructureError("expected '{...} -> k'", ln);
          Subset s = detail::parse_braced_set(d[0], ln);
          if (s & ~full_set(*raw.carrier)) throw StructureError("set element out of range", ln);
          Element v = detail::parse_index(d[2], ln);
          if (v >= *raw.carrier) throw StructureError("choice value out of range", ln);
          if (!raw.choice_table.emplace(s, v).second)
            throw StructureError("duplicate choice entry", ln);
        });
      } else if (kw == "choice-empty" && w.size() == 2) {
        need_carrier(no);
        Element v = detail::parse_index(w[1], no);
        if (v >= *raw.carrier) throw StructureError("choice-empty out of range", no);
        raw.choice_empty = v;
      } else {
        throw StructureError("unrecognized line '" + l + "'", no);
      }
    } catch (const StructureError& e) {
      if (e.line()) throw;
      throw StructureError(e.what(), no);
    }
  }
  if (!have_signature) throw StructureError("missing signature block");
  if (!raw.carrier) throw StructureError("missing carrier");
  return raw;
}

/// Check totality and choice validity, producing a structure.
inline ChoiceStructure validate_structure(const RawStructure& raw) {
  if (!raw.carrier) throw StructureError("missing carrier");
  const std::size_t n = *raw.carrier;
  const Signature& sig = raw.sig;
  std::vector<std::vector<std::uint8_t>> rels;
  for (const auto& r : sig.relations()) {
    std::vector<std::uint8_t> t(ChoiceStructure::power(n, r.arity), 0);
    if (auto it = raw.relations.find(r.name); it != raw.relations.end()) {
      for (const auto& tuple : it->second) {
        std::size_t idx = 0;
        for (Element e : tuple) {
          if (e >= n) throw StructureError("relation tuple out of range");
          idx = idx * n + e;
        }
        t[idx] = 1;
      }
    }
    rels.push_back(std::move(t));
  }
  std::vector<std::vector<Element>> funs;
  for (const auto& f : sig.functions()) {
    std::size_t cells = ChoiceStructure::power(n, f.arity);
    auto it = raw.functions.find(f.name);
    if (it == raw.functions.end() || it->second.size() != cells)
      throw StructureError("function table partial: '" + f.name + "'");
    std::vector<Element> t(cells);
    for (const auto& [args, v] : it->second) {
      std::size_t idx = 0;
      for (Element e : args) idx = idx * n + e;
      t[idx] = v;
    }
    funs.push_back(std::move(t));
  }
  std::vector<Element> consts;
  for (const auto& c : sig.constants()) {
    auto it = raw.constants.find(c);
    if (it == raw.constants.end())
      throw StructureError("constant '" + c + "' has no value");
    consts.push_back(it->second);
  }
  ChoiceRule rule = MinRule{raw.choice_empty.value_or(0)};
  if (raw.explicit_choice) {
    std::size_t total = std::size_t{1} << n;
    if (raw.choice_table.size() != total)
      throw StructureError("explicit choice table not total");
    ExplicitTable t;
    t.table.resize(total);
    for (const auto& [s, v] : raw.choice_table) {
      if (s != 0 && !contains(s, v))
        throw StructureError("choice not in set: " + subset_to_string(s) + " -> " +
                             std::to_string(v));
      t.table[s] = v;
    }
    if (raw.choice_empty && *raw.choice_empty != t.table[0])
      throw StructureError("choice-empty disagrees with the table entry for {}");
    rule = std::move(t);
  }
  return ChoiceStructure::make(sig, n, std::move(rels), std::move(funs),
                               std::move(consts), std::move(rule));
}

inline ChoiceStructure parse_structure(std::string_view text) {
  return validate_structure(read_raw_structure(text));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ChoiceStructure load_structure(const std::string& path) {
  return parse_structure(read_file(path));
}

/// Serialize in the file format; parse_structure(write_structure(s)) == s.
inline std::string write_structure(const ChoiceStructure& s) {
  std::ostringstream out;
  const auto& sig = s.signature();
  out << "signature\n";
  for (const auto& r : sig.relations()) out << "rel " << r.name << ' ' << r.arity << '\n';
  for (const auto& f : sig.functions()) out << "fun " << f.name << ' ' << f.arity << '\n';
  for (const auto& c : sig.constants()) out << "const " << c << '\n';
  out << "end\ncarrier " << s.size() << '\n';
  for (std::size_t ri = 0; ri < sig.relations().size(); ++ri) {
    out << "rel " << sig.relations()[ri].name << '\n';
    const auto& t = s.relation_table(ri);
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
      if (!t[idx]) continue;
      auto tuple = s.tuple_at(idx, sig.relations()[ri].arity);
      for (std::size_t k = 0; k < tuple.size(); ++k) out << (k ? " " : "") << tuple[k];
      out << '\n';
    }
    out << "end\n";
  }
  for (std::size_t fi = 0; fi < sig.functions().size(); ++fi) {
    out << "fun " << sig.functions()[fi].name << '\n';
    const auto& t = s.function_table(fi);
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
      for (Element e : s.tuple_at(idx, sig.functions()[fi].arity)) out << e << ' ';
      out << "-> " << t[idx] << '\n';
    }
    out << "end\n";
  }
  for (std::size_t ci = 0; ci < sig.constants().size(); ++ci)
    out << "const " << sig.constants()[ci] << ' ' << s.constant(ci) << '\n';
  if (const auto* m = std::get_if<MinRule>(&s.choice_rule())) {
    out << "choice min\nchoice-empty " << m->empty << '\n';
  } else {
    out << "choice table\n";
    const auto& t = std::get<ExplicitTable>(s.choice_rule()).table;
    for (Subset sub = 0; sub < t.size(); ++sub)
      out << subset_to_string(sub) << " -> " << t[sub] << '\n';
    out << "end\n";
  }
  return out.str();
}

}  // namespace epscan
