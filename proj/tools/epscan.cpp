// epscan: command-line front end.
//
// Exit status: 0 when every requested check passes (skipped checks are
// neutral), 1 on findings or failures, 2 on input errors, 3 when a budget
// (round or size cap) is exhausted.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <future>
#include <iomanip>
#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include "epscan/algebra.hpp"
#include "epscan/axioms.hpp"
#include "epscan/canonical.hpp"
#include "epscan/definability.hpp"
#include "epscan/eval.hpp"
#include "epscan/parser.hpp"
#include "epscan/report.hpp"
#include "epscan/structure.hpp"
#include "epscan/termalgebra.hpp"

using namespace epscan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFinding = 1;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;

struct Budget : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  bool json = false;
  bool timing = true;
  std::uint64_t seed = 0;
  std::size_t max_rounds = 64;
  std::size_t depth = 2;
  std::size_t samples = 500;
  std::size_t sample_depth = 3;
  std::size_t axiom_depth = 3;
  std::size_t axiom_samples = 1000;
  std::size_t oracle_depth = 4;
  std::size_t oracle_max_carrier = 4;
};

std::uint64_t seed_from_env() {
  const char* s = std::getenv("EPSCAN_SEED");
  if (!s || !*s) return 0;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw StructureError(std::string("EPSCAN_SEED is not a number: ") + s);
  }
}

DefinableFamily closure(const ChoiceStructure& m, const Settings& st, int max_dim = 2) {
  DefinabilityOptions opt;
  opt.max_dim = max_dim;
  opt.max_rounds = st.max_rounds;
  auto fam = DefinabilityEngine(m, opt).run();
  if (!fam.saturated())
    throw Budget("definable closure did not saturate within " + std::to_string(st.max_rounds) +
                 " rounds");
  return fam;
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

std::string set_text(Subset s) { return subset_to_string(s); }

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

const std::vector<std::string> kChecks = {"axioms", "atomic", "eta",  "elementary", "naturality",
                                          "lt-can", "rich",   "main", "sigma"};

Report run_checks(const std::string& file, const std::vector<std::string>& names,
                  const Settings& st, const std::string& file2, const std::string& hom) {
  Report rep;
  rep.file = file;
  std::string text = read_file(file);
  rep.hash = fnv1a64(text);
  ChoiceStructure m = parse_structure(text);
  rep.carrier = m.size();

  auto want = [&](const std::string& n) {
    return std::find(names.begin(), names.end(), n) != names.end();
  };
  const bool all = names.size() == kChecks.size();

  std::optional<DefinableFamily> fam;
  std::optional<CanonicalModel> can;
  auto canonical = [&]() -> const CanonicalModel& {
    if (!can) {
      fam = closure(m, st);
      can = build_canonical_model(m, *fam);
    }
    return *can;
  };

  if (want("axioms")) {
    AxiomOptions ao;
    ao.exhaustive_depth = st.axiom_depth;
    ao.random_formulas = st.axiom_samples;
    ao.substitution_triples = st.axiom_samples;
    ao.seed = st.seed;
    rep.checks.push_back(axioms_record(m, ao));
  }
  if (want("atomic")) rep.checks.push_back(atomic_record(canonical()));
  if (want("eta")) rep.checks.push_back(eta_record(canonical()));
  if (want("elementary"))
    rep.checks.push_back(elementary_record(canonical(), st.depth, st.samples, st.sample_depth, st.seed));
  if (want("naturality")) {
    if (file2.empty()) {
      std::vector<Element> id(m.size());
      for (Element e = 0; e < m.size(); ++e) id[e] = e;
      rep.checks.push_back(naturality_record(id, canonical(), canonical(), st.oracle_max_carrier));
      rep.checks.back().details["hom"] = "identity";
    } else {
      auto m2 = load_structure(file2);
      if (hom.empty()) throw StructureError("naturality with a second structure needs --hom");
      auto h = load_hom(hom, m.size(), m2.size());
      auto c2 = build_canonical_model(m2, closure(m2, st));
      rep.checks.push_back(naturality_record(h, canonical(), c2, st.oracle_max_carrier));
      rep.checks.back().details["hom"] = hom;
      rep.checks.back().details["target"] = file2;
    }
  }
  if (want("lt-can") || want("rich")) {
    canonical();
    auto l = build_lt1(*fam);
    auto phi = build_phi(l, *can);
    auto k = analyze_kernel(l, phi, *can);
    Pipeline p{*fam, *can, std::move(l), std::move(phi), std::move(k)};
    if (want("lt-can")) rep.checks.push_back(lt_can_record(p));
    if (want("rich")) rep.checks.push_back(rich_record(p));
  }
  if (want("main")) rep.checks.push_back(main_record(m));
  if (want("sigma")) rep.checks.push_back(sigma_record(m));
  if (all)
    rep.stability = stability_json(stability_check(m, st.oracle_depth, st.oracle_max_carrier));
  return rep;
}

void print_report_text(const Report& r, bool timing) {
  std::cout << r.file << " (" << r.carrier << " elements, fnv1a64 " << r.hash << ")\n";
  for (const auto& c : r.checks) {
    std::cout << "  " << pad(c.name, 12) << pad(to_string(c.verdict), 9);
    if (timing) std::cout << std::fixed << std::setprecision(3) << c.seconds << "s";
    std::cout << '\n';
    for (const auto& w : c.witnesses)
      std::cout << "      witness: " << (w.is_string() ? w.get<std::string>() : w.dump()) << '\n';
  }
  if (!r.stability.is_null())
    std::cout << "  stability   dims_agree=" << r.stability["dims_agree"]
              << " dim_sensitive=" << r.stability["dim_sensitive"]
              << " brute_force=" << (r.stability["brute_force_ran"].get<bool>()
                                         ? (r.stability["brute_force_agrees"].get<bool>() ? "agrees" : "differs")
                                         : "skipped")
              << '\n';
  std::cout << "  overall     " << to_string(r.overall()) << '\n';
}

int exit_for(const std::vector<Report>& reports) {
  int code = kExitOk;
  for (const auto& r : reports)
    if (r.overall() != Verdict::Pass) code = kExitFinding;
  return code;
}

int cmd_check(const std::string& name, const std::vector<std::string>& files, const std::string& hom,
              const Settings& st) {
  std::vector<std::string> names;
  if (name == "all")
    names = kChecks;
  else if (std::find(kChecks.begin(), kChecks.end(), name) != kChecks.end())
    names = {name};
  else
    throw StructureError("unknown check '" + name + "'");

  std::vector<std::string> inputs = files, second(files.size());
  if (name == "naturality" && files.size() == 2 && !hom.empty()) {
    inputs = {files[0]};
    second = {files[1]};
  } else if (!hom.empty()) {
    throw StructureError("--hom is only meaningful for 'check naturality FILE FILE2'");
  }

  // Structures are independent; results are assembled in input order.
  std::vector<std::future<Report>> jobs;
  for (std::size_t i = 0; i < inputs.size(); ++i)
    jobs.push_back(std::async(std::launch::async, [&, i] {
      return run_checks(inputs[i], names, st, second[i], hom);
    }));
  std::vector<Report> reports;
  for (auto& j : jobs) reports.push_back(j.get());

  if (st.json) {
    if (reports.size() == 1) {
      emit(reports[0].to_json(st.timing));
    } else {
      Json all = Json::array();
      for (const auto& r : reports) all.push_back(r.to_json(st.timing));
      emit(Json{{"tool", "epscan"}, {"version", kVersion}, {"reports", std::move(all)}});
    }
  } else {
    for (const auto& r : reports) print_report_text(r, st.timing);
  }
  return exit_for(reports);
}

// ---------------------------------------------------------------------------
// Other subcommands
// ---------------------------------------------------------------------------

int cmd_validate(const std::vector<std::string>& files, const Settings& st) {
  Json out = Json::array();
  for (const auto& f : files) {
    std::string text = read_file(f);
    auto m = parse_structure(text);
    const auto& sig = m.signature();
    std::string rule = std::holds_alternative<MinRule>(m.choice_rule()) ? "min" : "table";
    if (st.json)
      out.push_back({{"file", f},
                     {"fnv1a64", fnv1a64(text)},
                     {"carrier", m.size()},
                     {"relations", sig.relations().size()},
                     {"functions", sig.functions().size()},
                     {"constants", sig.constants().size()},
                     {"choice", rule},
                     {"valid", true}});
    else
      std::cout << f << ": ok (" << m.size() << " elements, " << sig.relations().size()
                << " relations, " << sig.functions().size() << " functions, "
                << sig.constants().size() << " constants, choice " << rule << ")\n";
  }
  if (st.json) emit(out.size() == 1 ? out[0] : out);
  return kExitOk;
}

Assignment parse_assignment(const std::vector<std::string>& binds, std::size_t carrier) {
  Assignment a;
  for (const auto& b : binds) {
    auto eq = b.find('=');
    if (eq == std::string::npos || !is_variable_token(b.substr(0, eq)))
      throw StructureError("bad binding '" + b + "', expected vN=ELEMENT");
    VarIndex v = static_cast<VarIndex>(std::stoul(b.substr(1, eq - 1)));
    unsigned long e = 0;
    try {
      e = std::stoul(b.substr(eq + 1));
    } catch (const std::exception&) {
      throw StructureError("bad element in binding '" + b + "'");
    }
    if (e >= carrier) throw StructureError("binding '" + b + "' is outside the carrier");
    a.bind(v, static_cast<Element>(e));
  }
  return a;
}

int cmd_eval(const std::string& file, const std::string& formula, const std::string& term,
             const std::vector<std::string>& binds, const Settings& st) {
  auto m = load_structure(file);
  if (formula.empty() == term.empty()) throw StructureError("give exactly one of -f and -t");
  Assignment a = parse_assignment(binds, m.size());
  Evaluator ev(m);
  if (!formula.empty()) {
    bool value = ev.formula(parse_formula(formula, m.signature()), a);
    if (st.json)
      emit({{"formula", formula}, {"value", value}});
    else
      std::cout << (value ? "true" : "false") << '\n';
  } else {
    Element value = ev.term(parse_term(term, m.signature()), a);
    if (st.json)
      emit({{"term", term}, {"value", value}});
    else
      std::cout << value << '\n';
  }
  return kExitOk;
}

int cmd_definable(const std::string& file, int max_dim, const Settings& st) {
  auto m = load_structure(file);
  DefinabilityOptions opt;
  opt.max_dim = max_dim;
  opt.max_rounds = st.max_rounds;
  auto fam = DefinabilityEngine(m, opt).run();
  auto stab = stability_check(m, st.oracle_depth, st.oracle_max_carrier);
  if (st.json) {
    Json j = family_json(fam);
    j["stability"] = stability_json(stab);
    emit(j);
  } else {
    std::cout << "E (" << fam.elements().size() << " of " << m.size() << "):\n";
    for (const auto& d : fam.elements())
      std::cout << "  " << pad(std::to_string(d.value), 4) << pad(d.origin, 9) << "round " << d.round
                << "  " << to_string(d.term) << '\n';
    std::cout << "U: " << fam.set_count() << " sets, " << fam.blocks().size() << " blocks"
              << (fam.full_power_set() ? " (full power set)" : "") << '\n';
    for (Subset b : fam.blocks())
      std::cout << "  block " << set_text(b) << "  " << to_string(fam.witness_formula(b)) << '\n';
    if (fam.set_count() <= 64) {
      auto sets = fam.sets();
      std::sort(sets.begin(), sets.end());
      for (Subset s : sets) std::cout << "  " << set_text(s) << '\n';
    }
    std::cout << "rounds " << fam.rounds() << ", saturated " << (fam.saturated() ? "yes" : "no")
              << "\nstability: dims agree " << (stab.dims_agree ? "yes" : "no") << ", brute force "
              << (stab.brute_force_ran
                      ? (stab.brute_force_agrees ? "agrees" : "differs") + std::string(" (depth ") +
                            std::to_string(stab.brute_force_depth) + ", " +
                            std::to_string(stab.brute_force_sets) + " sets)"
                      : std::string("skipped"))
              << '\n';
  }
  if (!fam.saturated()) {
    std::cerr << "epscan: closure did not saturate within " << st.max_rounds << " rounds\n";
    return kExitBudget;
  }
  return kExitOk;
}

int cmd_canon(const std::string& file, const Settings& st) {
  auto m = load_structure(file);
  auto c = build_canonical_model(m, closure(m, st));
  if (st.json) {
    emit(canonical_json(c));
  } else {
    std::cout << "canonical model: " << c.size() << " elements\n";
    for (std::size_t i = 0; i < c.size(); ++i)
      std::cout << "  " << pad(std::to_string(i), 4) << "eta " << pad(std::to_string(c.eta(i)), 4)
                << to_string(c.elements[i].rep) << '\n';
    std::cout << write_structure(c.structure);
  }
  return kExitOk;
}

StructureAlgebra read_algebra(const std::string& file) {
  auto m = load_structure(file);
  try {
    return from_structure(m, detect_kind(m.signature()));
  } catch (const AlgebraError& e) {
    throw StructureError(file + ": " + e.what());
  }
}

int cmd_algebra_iso(const std::string& f1, const std::string& f2, const Settings& st) {
  auto a = read_algebra(f1), b = read_algebra(f2);
  if (a.kind != b.kind)
    throw StructureError("cannot compare a " + std::string(to_string(a.kind)) + " with a " +
                         to_string(b.kind));
  auto iso = is_isomorphic(a.algebra, b.algebra);
  Json j{{"kind", to_string(a.kind)},
         {"sizes", {a.algebra.size(), b.algebra.size()}},
         {"isomorphic", iso.has_value()}};
  if (iso) {
    Json atoms = iso->atom_map;
    Json elems = Json::array();
    for (AlgElem x = 0; x < a.algebra.size(); ++x) elems.push_back(b.decode[(*iso)(x)]);
    j["atom_map"] = std::move(atoms);
    j["element_map"] = std::move(elems);  // carrier of FILE1 -> carrier of FILE2, by algebra element
    j["element_map_domain"] = a.decode;
  }
  if (st.json) {
    emit(j);
  } else if (iso) {
    std::cout << "isomorphic (" << to_string(a.kind) << ", " << a.algebra.size() << " elements)\n";
    for (AlgElem x = 0; x < a.algebra.size(); ++x)
      std::cout << "  " << a.decode[x] << " -> " << b.decode[(*iso)(x)] << '\n';
  } else {
    std::cout << "not isomorphic (" << a.algebra.size() << " vs " << b.algebra.size()
              << " elements)\n";
  }
  return iso ? kExitOk : kExitFinding;
}

int cmd_algebra_nr0(const std::string& file, const Settings& st) {
  auto a = read_algebra(file);
  auto n = nr0(a.algebra);
  Json elems = Json::array();
  for (AlgElem y = 0; y < n.algebra.size(); ++y) elems.push_back(a.decode[n.embed[y]]);
  bool two = is_isomorphic(n.algebra, MonadicAlgebra::two()).has_value();
  if (st.json) {
    emit({{"kind", to_string(a.kind)},
          {"synthesized_c0", a.algebra.synthesized()},
          {"size", n.algebra.size()},
          {"elements", std::move(elems)},
          {"is_two", two}});
  } else {
    std::cout << "Nr0: " << n.algebra.size() << " elements {";
    for (std::size_t i = 0; i < elems.size(); ++i) std::cout << (i ? "," : "") << elems[i];
    std::cout << "}" << (two ? ", isomorphic to 2" : "") << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"epscan: epsilon-calculus semantics over finite choice structures"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Settings st;

  auto common = [&](CLI::App* c) {
    c->add_flag("--json", st.json, "machine-readable output");
    c->add_option("--max-rounds", st.max_rounds, "closure round budget")->capture_default_str();
  };

  std::vector<std::string> files;
  auto* validate = app.add_subcommand("validate", "parse and validate structure files");
  validate->add_option("files", files, "structure files")->required()->check(CLI::ExistingFile);
  validate->add_flag("--json", st.json, "machine-readable output");

  std::string file, file2, formula, term, hom;
  std::vector<std::string> binds;
  auto* eval = app.add_subcommand("eval", "evaluate a formula or term");
  eval->add_option("file", file, "structure file")->required()->check(CLI::ExistingFile);
  eval->add_option("-f,--formula", formula, "formula to evaluate");
  eval->add_option("-t,--term", term, "term to evaluate");
  eval->add_option("-a,--assign", binds, "variable binding vN=ELEMENT (repeatable)");
  eval->add_flag("--json", st.json, "machine-readable output");

  int max_dim = 2;
  auto* definable = app.add_subcommand("definable", "definable elements and sets");
  definable->add_option("file", file, "structure file")->required()->check(CLI::ExistingFile);
  definable->add_option("--max-dim", max_dim, "variables available to the closure")
      ->check(CLI::Range(1, 2))
      ->capture_default_str();
  definable->add_option("--depth-oracle", st.oracle_depth, "brute-force formula depth")
      ->capture_default_str();
  definable->add_option("--oracle-max-carrier", st.oracle_max_carrier,
                        "largest carrier for the brute-force oracle")
      ->capture_default_str();
  common(definable);

  auto* canon = app.add_subcommand("canon", "build the canonical model");
  canon->add_option("file", file, "structure file")->required()->check(CLI::ExistingFile);
  common(canon);

  std::string check_name;
  bool no_timing = false;
  auto* check = app.add_subcommand("check", "run checkers");
  check->add_option("name", check_name, "all|axioms|atomic|eta|elementary|naturality|lt-can|rich|main|sigma")
      ->required();
  check->add_option("files", files, "structure files (naturality: FILE FILE2 with --hom)")
      ->required()
      ->check(CLI::ExistingFile);
  check->add_option("--hom", hom, "carrier map file, lines 'i -> j'")->check(CLI::ExistingFile);
  check->add_flag("--no-timing", no_timing, "omit timings");
  check->add_option("--depth", st.depth, "exhaustive elementarity depth")->capture_default_str();
  check->add_option("--samples", st.samples, "sampled elementarity formulas")->capture_default_str();
  check->add_option("--sample-depth", st.sample_depth, "depth of sampled formulas")
      ->capture_default_str();
  check->add_option("--axiom-depth", st.axiom_depth, "exhaustive axiom depth")->capture_default_str();
  check->add_option("--axiom-samples", st.axiom_samples, "random axiom formulas and triples")
      ->capture_default_str();
  check->add_option("--depth-oracle", st.oracle_depth, "brute-force definability depth")
      ->capture_default_str();
  check->add_option("--oracle-max-carrier", st.oracle_max_carrier,
                    "largest carrier for the brute-force oracle")
      ->capture_default_str();
  common(check);

  std::string file1;
  auto* algebra = app.add_subcommand("algebra", "algebra tools");
  algebra->require_subcommand(1);
  auto* iso = algebra->add_subcommand("iso", "isomorphism of two algebra structures");
  iso->add_option("file1", file1, "first structure")->required()->check(CLI::ExistingFile);
  iso->add_option("file2", file2, "second structure")->required()->check(CLI::ExistingFile);
  iso->add_flag("--json", st.json, "machine-readable output");
  auto* nr0cmd = algebra->add_subcommand("nr0", "neat reduct (c0-fixed elements)");
  nr0cmd->add_option("file", file, "structure file")->required()->check(CLI::ExistingFile);
  nr0cmd->add_flag("--json", st.json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    st.seed = seed_from_env();
    st.timing = !no_timing;
    if (*validate) return cmd_validate(files, st);
    if (*eval) return cmd_eval(file, formula, term, binds, st);
    if (*definable) return cmd_definable(file, max_dim, st);
    if (*canon) return cmd_canon(file, st);
    if (*check) return cmd_check(check_name, files, hom, st);
    if (*iso) return cmd_algebra_iso(file1, file2, st);
    if (*nr0cmd) return cmd_algebra_nr0(file, st);
  } catch (const Budget& e) {
    std::cerr << "epscan: " << e.what() << '\n';
    return kExitBudget;
  } catch (const DefinabilityError& e) {
    std::cerr << "epscan: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "epscan: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
