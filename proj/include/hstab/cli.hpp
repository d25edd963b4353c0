#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <iostream>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "hstab/congruences.hpp"
#include "hstab/group_spec.hpp"
#include "hstab/orbits.hpp"
#include "hstab/report_io.hpp"
#include "hstab/verification.hpp"

namespace hstab {

enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitBudget = 2, kExitFailed = 3 };

inline constexpr std::size_t kAutomorphismOrderCap = 64;

struct RunConfig {
  std::string spec_path;
  std::string command;      // describe | homology | classify | verify
  std::string verify_kind;  // epsilon | congruences | stabilization | bijection
  std::optional<std::size_t> d;
  std::size_t genus_lo = 0;
  std::size_t genus_hi = 0;
  bool genus_given = false;
  std::string nu_filter;
  std::string gamma;
  std::string moves = "all";
  std::uint64_t max_states = 100000000;
  double max_seconds = 0;
  OutputFormat format = OutputFormat::Json;
  std::size_t threads = 1;
  std::uint64_t seed = 20240521;
  std::optional<std::uint64_t> samples;
};

namespace detail {

inline std::size_t parse_count(const std::string& s, const std::string& what) {
  std::size_t v = 0;
  const auto* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (s.empty() || r.ec != std::errc() || r.ptr != end) throw InvalidInput("bad " + what + ": '" + s + "'");
  return v;
}

inline std::pair<std::size_t, std::size_t> parse_genus_range(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const std::size_t g = parse_count(s, "genus");
    return {g, g};
  }
  const std::size_t lo = parse_count(s.substr(0, dots), "genus"), hi = parse_count(s.substr(dots + 2), "genus");
  if (lo > hi) throw InvalidInput("empty genus range " + s);
  return {lo, hi};
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t e = std::min(s.find(sep, pos), s.size());
    out.push_back(s.substr(pos, e - pos));
    pos = e + 1;
  }
  return out;
}

}  // namespace detail

inline std::string class_label(std::size_t id) { return "C" + std::to_string(id); }

/// A nontrivial class named "C<id>" or by one of its element labels.
inline std::size_t parse_class_ref(const FiniteGroup& g, const ConjugacyClassTable& classes, const std::string& ref) {
  if (ref.size() > 1 && ref[0] == 'C' && std::isdigit(static_cast<unsigned char>(ref[1]))) {
    const std::size_t id = detail::parse_count(ref.substr(1), "class id");
    if (id == 0 || id >= classes.size()) throw InvalidInput("no nontrivial class " + ref);
    return id;
  }
  for (Elem x = 1; x < g.order(); ++x)
    if (g.label(x) == ref) return classes.class_of[x];
  throw InvalidInput("unknown class label " + ref);
}

/// "C1:2,C3:1" -> nu-type.
inline NuType parse_nu_filter(const FiniteGroup& g, const ConjugacyClassTable& classes, const std::string& text) {
  NuType nu(classes.size());
  for (const std::string& item : detail::split(text, ',')) {
    const auto colon = item.rfind(':');
    if (colon == std::string::npos) throw InvalidInput("nu entry '" + item + "' needs CLASS:COUNT");
    nu[parse_class_ref(g, classes, item.substr(0, colon))] +=
        static_cast<std::int64_t>(detail::parse_count(item.substr(colon + 1), "nu count"));
  }
  return nu;
}

inline ReportJson config_echo(const RunConfig& c) {
  ReportJson j{{"spec", c.spec_path}, {"command", c.command}};
  if (!c.verify_kind.empty()) j["verify"] = c.verify_kind;
  j["d"] = c.d ? ReportJson(*c.d) : ReportJson(nullptr);
  if (c.genus_given) j["genus"] = {c.genus_lo, c.genus_hi};
  if (!c.nu_filter.empty()) j["nu"] = c.nu_filter;
  if (!c.gamma.empty()) j["gamma"] = c.gamma;
  j["moves"] = move_set_tags(parse_move_set(c.moves));
  j["max_states"] = c.max_states;
  j["max_seconds"] = c.max_seconds;
  j["seed"] = c.seed;
  if (c.samples) j["samples"] = *c.samples;
  const char* fmt[] = {"json", "csv", "text"};
  j["format"] = fmt[static_cast<int>(c.format)];
  return j;
}

namespace detail {

inline void validate(const RunConfig& c) {
  if (c.spec_path.empty()) throw InvalidInput("--spec is required");
  if (c.max_states == 0) throw InvalidInput("--max-states must be positive");
  if (c.max_seconds < 0) throw InvalidInput("--max-seconds must be nonnegative");
  if (c.threads == 0) throw InvalidInput("--threads must be positive");
  if (c.genus_lo > c.genus_hi) throw InvalidInput("empty genus range");
  parse_move_set(c.moves);
  if (c.command == "classify" && !c.genus_given) throw InvalidInput("classify needs --genus");
  if (c.command == "verify" && c.verify_kind != "congruences") {
    if (!c.d) throw InvalidInput("verify " + c.verify_kind + " needs --d");
    if (!c.genus_given) throw InvalidInput("verify " + c.verify_kind + " needs --max-genus");
  }
}

inline ReportJson class_table_json(const FiniteGroup& g, const ConjugacyClassTable& classes) {
  ReportJson out = ReportJson::array();
  for (std::size_t c = 0; c < classes.size(); ++c) {
    std::vector<std::string> members;
    for (Elem x : classes.classes[c]) members.push_back(g.label(x));
    out.push_back({{"id", class_label(c)},
                   {"size", classes.classes[c].size()},
                   {"element_order", g.element_order(classes.classes[c].front())},
                   {"members", members}});
  }
  return out;
}

inline Report describe(const FiniteGroup& g) {
  Report r;
  const ConjugacyClassTable classes = conjugacy_classes(g);
  std::vector<std::size_t> sizes;
  for (const auto& c : classes.classes) sizes.push_back(c.size());
  std::vector<std::string> gens;
  for (Elem x : minimal_generating_tuple(g)) gens.push_back(g.label(x));
  r.body["group"] = {{"name", g.name()},
                     {"order", g.order()},
                     {"abelian", g.is_abelian()},
                     {"elements", g.labels()},
                     {"generators", gens},
                     {"class_sizes", sizes},
                     {"classes", class_table_json(g, classes)},
                     {"automorphisms", automorphism_group(g, kAutomorphismOrderCap).size()},
                     {"abelianization", abelianization(g).group.to_string()}};
  return r;
}

inline ReportJson gamma_json(const HomologyEngine& engine, ClassMask gamma) {
  const KGammaGroup& k = engine.k_gamma(gamma);
  std::vector<std::string> ids;
  for (std::size_t c = 1; c < engine.classes().size(); ++c)
    if (gamma >> c & 1) ids.push_back(class_label(c));
  return {{"gamma", ids},
          {"K_gamma_torsion", torsion_to_json(k.shape())},
          {"K_gamma_free_rank", k.shape().free_rank},
          {"H2_gamma", torsion_to_json(k.h2_gamma_shape())}};
}

inline Report homology(const HomologyEngine& engine, const std::string& gamma_text) {
  Report r;
  const AbelianShape h2 = engine.h2_shape();
  BigInt order = 1;
  for (const auto& t : h2.torsion) order *= t;
  r.body["group"] = engine.group().name();
  r.body["H2"] = torsion_to_json(h2);
  r.body["H2_order"] = order.get_ui();
  const auto& classes = engine.classes();
  if (gamma_text == "all") {
    if (classes.size() > 12) throw BudgetExceeded("--gamma all: too many classes");
    ReportJson list = ReportJson::array();
    for (ClassMask m = 0; m < (ClassMask{1} << (classes.size() - 1)); ++m) list.push_back(gamma_json(engine, m << 1));
    r.body["gammas"] = list;
    return r;
  }
  ClassMask m = 0;
  if (!gamma_text.empty())
    for (const std::string& ref : split(gamma_text, ',')) m |= ClassMask{1} << parse_class_ref(engine.group(), classes, ref);
  const ReportJson gj = gamma_json(engine, m);
  for (const auto& [key, v] : gj.items()) r.body[key] = v;
  return r;
}

inline OrbitOptions orbit_options(const RunConfig& c) {
  OrbitOptions opt;
  opt.moves = parse_move_set(c.moves);
  opt.threads = c.threads;
  opt.limits.max_states = c.max_states;
  opt.limits.max_seconds = c.max_seconds;
  return opt;
}

inline std::vector<Automorphism> automorphisms_for_orbits(const FiniteGroup& g) {
  return automorphism_group(g, kAutomorphismOrderCap);
}

inline Report classify(const HomologyEngine& engine, const RunConfig& c) {
  const FiniteGroup& g = engine.group();
  std::optional<NuType> filter;
  std::size_t d = c.d.value_or(0);
  if (!c.nu_filter.empty()) {
    filter = parse_nu_filter(g, engine.classes(), c.nu_filter);
    const auto total = static_cast<std::size_t>(nu_total(*filter));
    if (c.d && *c.d != total) throw InvalidInput("--nu total does not match --d");
    d = total;
  } else if (!c.d) {
    throw InvalidInput("classify needs --d or --nu");
  }
  const auto auts = automorphisms_for_orbits(g);
  const ClassificationReport rep = classification_report(engine, auts, d, c.genus_lo, c.genus_hi, orbit_options(c), filter);
  Report r;
  r.body["classification"] = classification_to_json(rep);
  r.table = classification_table(rep);
  return r;
}

inline Report verify_tallies(const std::vector<IdentityTally>& tallies) {
  Report r;
  bool ok = true;
  ReportJson list = ReportJson::array();
  for (const auto& t : tallies) {
    ok = ok && t.passed();
    list.push_back(tally_to_json(t));
  }
  r.body["passed"] = ok;
  r.body["checks"] = list;
  r.table.push_back({"check", "checked", "failures", "passed"});
  for (const auto& t : tallies)
    r.table.push_back({t.name, std::to_string(t.checked), std::to_string(t.failures), t.passed() ? "true" : "false"});
  return r;
}

inline Report verify(const HomologyEngine& engine, const RunConfig& c) {
  const FiniteGroup& g = engine.group();
  std::mt19937_64 rng(c.seed);
  if (c.verify_kind == "congruences") {
    std::vector<IdentityTally> tallies = check_fold_basics(engine.relation_classes());
    CongruenceChecker checker(engine.relation_classes());
    if (g.order() <= 6) checker.check_exhaustive();
    checker.check_sampled(c.samples.value_or(100000), rng);
    for (const auto& t : checker.tallies()) tallies.push_back(t);
    return verify_tallies(tallies);
  }
  const std::size_t d = *c.d;
  if (c.verify_kind == "epsilon") {
    EnumerationLimits limits{c.max_states, c.max_seconds};
    const MoveSet set = parse_move_set(c.moves);
    std::vector<IdentityTally> tallies;
    for (std::size_t gen = c.genus_lo; gen <= c.genus_hi; ++gen) {
      tallies.push_back(check_moves_exhaustive(engine, gen, d, set, limits));
      for (auto& t : check_nu_epsilon(engine, gen, d, limits)) tallies.push_back(t);
    }
    tallies.push_back(check_moves_random(engine, c.samples.value_or(1000), 50, d, rng, set));
    return verify_tallies(tallies);
  }
  if (c.verify_kind == "stabilization" || c.verify_kind == "bijection") {
    const auto auts = automorphisms_for_orbits(g);
    const StabilizationVerdict v =
        verify_genus_stabilization(engine, auts, d, c.genus_hi, orbit_options(c), c.genus_lo);
    Report r;
    const bool ok = c.verify_kind == "bijection" ? v.bijection && v.injective : v.passed();
    r.body["passed"] = ok;
    r.body["surjectivity"] = v.surjectivity ? ReportJson(*v.surjectivity) : ReportJson(nullptr);
    r.body["well_defined"] = v.well_defined;
    r.body["injective"] = v.injective;
    r.body["bijection"] = v.bijection;
    r.body["stable_from"] = v.report.stable_from ? ReportJson(*v.report.stable_from) : ReportJson(nullptr);
    r.body["classification"] = classification_to_json(v.report);
    r.table = classification_table(v.report);
    return r;
  }
  throw InvalidInput("unknown verification " + c.verify_kind);
}

}  // namespace detail

struct CommandResult {
  int status = kExitOk;
  std::string output;
  std::string error;
};

/// Runs one command; the report is produced only if the command completes.
inline CommandResult execute_command(const RunConfig& cfg) {
  CommandResult res;
  try {
    detail::validate(cfg);
    const FiniteGroup g = load_group_spec(cfg.spec_path);
    Report r;
    if (cfg.command == "describe") {
      r = detail::describe(g);
    } else {
      const HomologyEngine engine(g);
      if (cfg.command == "homology")
        r = detail::homology(engine, cfg.gamma);
      else if (cfg.command == "classify")
        r = detail::classify(engine, cfg);
      else if (cfg.command == "verify")
        r = detail::verify(engine, cfg);
      else
        throw InvalidInput("unknown command " + cfg.command);
    }
    Report out;
    out.body["tool"] = kToolVersion;
    out.body["config"] = config_echo(cfg);
    for (auto& [k, v] : r.body.items()) out.body[k] = v;
    out.table = std::move(r.table);
    res.output = render_report(out, cfg.format);
    if (out.body.contains("passed") && !out.body["passed"].get<bool>()) res.status = kExitFailed;
  } catch (const BudgetExceeded& e) {
    res = {kExitBudget, {}, std::string("budget exceeded: ") + e.what()};
  } catch (const InvariantViolation& e) {
    res = {kExitFailed, {}, std::string("invariant violation: ") + e.what()};
  } catch (const InvalidInput& e) {
    res = {kExitInvalid, {}, std::string("invalid input: ") + e.what()};
  } catch (const PreconditionError& e) {
    res = {kExitInvalid, {}, std::string("invalid input: ") + e.what()};
  }
  return res;
}

/// Parses argv into a RunConfig. Returns an exit code instead when parsing
/// ends the run (help or a usage error).
inline std::variant<RunConfig, int> parse_run_config(int argc, const char* const* argv, std::ostream& out,
                                                     std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Hurwitz generating systems up to mapping class moves and automorphisms", "hstab"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  app.add_option("--spec", cfg.spec_path, "group spec JSON file");
  app.add_option("--format", format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--threads", cfg.threads, "worker threads");
  app.add_option("--max-states", cfg.max_states, "state budget");
  app.add_option("--max-seconds", cfg.max_seconds, "time budget per enumeration, 0 for none");
  app.add_option("--seed", cfg.seed, "seed for sampled checks");
  app.add_option("--moves", cfg.moves, "comma list of move families");
  app.set_version_flag("--version", kToolVersion);

  app.add_subcommand("describe", "group summary");
  auto* hom = app.add_subcommand("homology", "H2 and the branched quotients H2_Gamma");
  hom->add_option("--gamma", cfg.gamma, "comma list of classes, or 'all'");

  std::string genus_text, nu_text;
  std::size_t d = 0, max_genus = 0;
  auto* cls = app.add_subcommand("classify", "orbit classification over a genus range");
  auto* cls_d = cls->add_option("--d", d, "number of branch points");
  cls->add_option("--genus", genus_text, "G or LO..HI")->required();
  cls->add_option("--nu", nu_text, "CLASS:COUNT,...");

  auto* ver = app.add_subcommand("verify", "verification suites");
  ver->add_option("kind", cfg.verify_kind, "epsilon, congruences, stabilization or bijection")
      ->required()
      ->check(CLI::IsMember({"epsilon", "congruences", "stabilization", "bijection"}));
  auto* ver_d = ver->add_option("--d", d, "number of branch points");
  auto* ver_g = ver->add_option("--max-genus", max_genus, "largest genus");
  ver->add_option("--samples", cfg.samples, "number of sampled cases");

  std::vector<std::string> args(argv + 1, argv + argc);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  cfg.format = parse_format(format);
  try {
    if (cls->parsed()) {
      cfg.command = "classify";
      if (cls_d->count()) cfg.d = d;
      std::tie(cfg.genus_lo, cfg.genus_hi) = detail::parse_genus_range(genus_text);
      cfg.genus_given = true;
      cfg.nu_filter = nu_text;
    } else if (ver->parsed()) {
      cfg.command = "verify";
      if (ver_d->count()) cfg.d = d;
      if (ver_g->count()) {
        cfg.genus_hi = max_genus;
        cfg.genus_given = true;
      }
    } else if (hom->parsed()) {
      cfg.command = "homology";
    } else {
      cfg.command = "describe";
    }
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  }
  return cfg;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  auto parsed = parse_run_config(argc, argv, out, err);
  if (auto* code = std::get_if<int>(&parsed)) return *code;
  const CommandResult res = execute_command(std::get<RunConfig>(parsed));
  out << res.output;
  if (!res.error.empty()) err << res.error << "\n";
  return res.status;
}

}  // namespace hstab
