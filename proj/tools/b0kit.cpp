// b0kit command-line driver.
//
// Exit status: 0 success, 1 a result contradicts the expected outcome for
// the selected group (or a suite check failed), 2 usage or budget error,
// 3 internal error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "b0kit/acceptance.hpp"
#include "b0kit/bogomolov.hpp"
#include "b0kit/certificate.hpp"
#include "b0kit/families.hpp"
#include "b0kit/homology.hpp"
#include "b0kit/kernels.hpp"
#include "b0kit/oracle.hpp"
#include "b0kit/report.hpp"

using namespace b0kit;
using report::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string format = "text";
  std::string output;
  int threads = 0;

  // group selection
  std::string family;
  int prime = 0;
  int r = 0;
  std::string file;
  std::string control;
};

/// A selected group with what the families predict about it.
struct Selected {
  std::string name;
  PcPresentation presentation;
  bool expect_consistent = true;
  std::optional<bool> expect_b0_nontrivial;
  bool family_member = false;
};

Selected select(const Config& c) {
  const int given = (c.family.empty() ? 0 : 1) + (c.file.empty() ? 0 : 1) + (c.control.empty() ? 0 : 1);
  if (given != 1) throw UsageError("select exactly one group with --family, --control or --file");
  if (!c.file.empty()) return {c.file, read_presentation_file(c.file), true, std::nullopt, false};
  if (!c.control.empty()) {
    for (auto& g : families::controls())
      if (g.name == c.control) return {g.name, g.presentation, true, false, false};
    if (c.prime)
      for (auto& g : families::order_p4_controls(c.prime))
        if (g.name == c.control) return {g.name, g.presentation, true, false, false};
    throw UsageError("unknown control group '" + c.control + "' (see `families list --controls`)");
  }
  if (c.prime == 0) throw UsageError("--family needs --prime");
  families::FamilySpec spec{families::parse_tag(c.family), c.prime, c.r};
  Selected s{families::name(spec), families::build(spec), true, std::nullopt, false};
  const auto members = families::members(c.prime);
  s.family_member = std::find(members.begin(), members.end(), spec) != members.end();
  s.expect_consistent = s.family_member;
  if (s.family_member) s.expect_b0_nontrivial = true;
  return s;
}

void add_selector(CLI::App* app, Config& c) {
  app->add_option("--family", c.family, "family tag: G243_28 G243_29 G243_30 G1 G2 G3 G28_IMPOSTOR ...");
  app->add_option("--prime", c.prime, "prime p");
  app->add_option("--r", c.r, "family parameter r");
  app->add_option("--file", c.file, "presentation file in the pcgroup text format");
  app->add_option("--control", c.control, "control group by name");
}

std::vector<int> parse_primes(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw UsageError("bad prime list '" + s + "'");
    }
    if (!families::is_prime(out.back()) || out.back() < 3) throw UsageError("not an odd prime: " + tok);
  }
  if (out.empty()) throw UsageError("empty prime list");
  return out;
}

class Output {
 public:
  explicit Output(const Config& c) : c_(c) {}

  void emit(const json& j, const std::string& text) {
    const std::string body = c_.format == "json" ? j.dump(2) + "\n" : text;
    if (c_.output.empty()) {
      std::cout << body;
      return;
    }
    std::ofstream f(c_.output);
    if (!f) throw UsageError("cannot write " + c_.output);
    f << body;
  }

 private:
  const Config& c_;
};

int cmd_verify(const Config& c) {
  const auto s = select(c);
  const auto report = check_consistency(s.presentation);
  json j{{"group", s.name}, {"fingerprint", fingerprint(s.presentation)}, {"consistent", report.consistent}};
  std::ostringstream t;
  t << "group        " << s.name << "\nfingerprint  " << fingerprint(s.presentation) << "\n"
    << "consistent   " << (report.consistent ? "yes" : "no") << "\n";
  bool contradiction = report.consistent != s.expect_consistent;
  if (!report.consistent) {
    json fails = json::array();
    for (const auto& f : report.failures) {
      fails.push_back({{"overlap", f.overlap.to_string()},
                       {"left", word_to_string(f.left, "f")},
                       {"right", word_to_string(f.right, "f")}});
      t << "  overlap " << f.overlap.to_string() << ": " << word_to_string(f.left, "f") << " != " << word_to_string(f.right, "f")
        << "\n";
    }
    j["failures"] = fails;
    try {
      const auto q = enforced_quotient(s.presentation);
      j["collapsed_order"] = q.order;
      j["collapse_rounds"] = q.rounds;
      j["collapsed_presentation"] = to_text(q.presentation);
      t << "collapses to a group of order " << q.order << " (" << q.rounds << " round" << (q.rounds == 1 ? "" : "s")
        << ")\n";
    } catch (const NonCentralFailure& e) {
      j["collapse_error"] = e.what();
      t << "collapse: " << e.what() << "\n";
    }
  } else {
    PcGroup g(s.presentation);
    const auto z = center(g);
    const auto d = derived_subgroup(g);
    const auto ab = abelianization(s.presentation);
    const auto e = exponent(g);
    j["order"] = g.order();
    j["center_order"] = z.order();
    j["derived_order"] = d.order();
    j["abelianization"] = report::to_json(ab);
    j["exponent"] = e;
    t << "order        " << g.order() << "\ncentre       " << z.order() << "\nderived      " << d.order()
      << "\nG/[G,G]      " << ab.to_string() << "\nexponent     " << e << "\n";
    if (s.presentation.rank() == 5) {
      const auto lemf = certificate::check_lemf(s.presentation);
      j["structure_conditions"] = report::to_json(lemf);
      t << "f1..f5 conditions " << (lemf.holds() ? "hold" : "fail") << "\n";
      for (const auto& n : lemf.notes) t << "  " << n << "\n";
      if (s.family_member) {
        const auto p = static_cast<std::uint64_t>(c.prime);
        const bool ok = lemf.holds() && g.order() == p * p * p * p * p && z.order() == p &&
                        d.order() == p * p * p && ab == AbelianInvariants{{p, p}, 0};
        j["family_structure"] = ok;
        contradiction = contradiction || !ok;
      }
    }
  }
  Output(c).emit(j, t.str());
  return contradiction ? 1 : 0;
}

int cmd_families(const Config& c, bool controls, bool text_dump) {
  json rows = json::array();
  std::ostringstream t;
  if (controls) {
    auto list = families::controls();
    if (c.prime)
      for (auto& g : families::order_p4_controls(c.prime)) list.push_back(std::move(g));
    for (const auto& g : list) {
      const bool ok = is_consistent(g.presentation);
      rows.push_back({{"name", g.name}, {"order", g.presentation.nominal_order()}, {"consistent", ok},
                      {"fingerprint", fingerprint(g.presentation)}});
      t << g.name << "\torder " << g.presentation.nominal_order() << "\t" << (ok ? "consistent" : "inconsistent") << "\n";
      if (text_dump) t << to_text(g.presentation) << "\n";
    }
  } else {
    if (c.prime == 0) throw UsageError("families list needs --prime (or --controls)");
    std::vector<families::FamilySpec> specs = families::members(c.prime);
    if (c.prime == 3)
      for (auto s : families::degenerate_p3()) specs.push_back(s);
    else if (c.prime >= 5)
      for (auto f : {families::Family::G28_IMPOSTOR, families::Family::G29_IMPOSTOR, families::Family::G30_IMPOSTOR})
        specs.push_back({f, c.prime, 0});
    for (const auto& s : specs) {
      const auto pres = families::build(s);
      const bool ok = is_consistent(pres);
      rows.push_back({{"tag", families::tag(s.family)}, {"name", families::name(s)}, {"p", s.p}, {"r", s.r},
                      {"order", pres.nominal_order()}, {"consistent", ok}, {"fingerprint", fingerprint(pres)}});
      t << families::tag(s.family) << "\tp=" << s.p << "\tr=" << s.r << "\t" << families::name(s) << "\torder "
        << pres.nominal_order() << "\t" << (ok ? "consistent" : "inconsistent") << "\n";
      if (text_dump) t << to_text(pres) << "\n";
    }
  }
  Output(c).emit(rows, t.str());
  return 0;
}

int cmd_schur(const Config& c) {
  const auto s = select(c);
  const homology::Cover cover(s.presentation);
  json j = report::to_json(cover.multiplier());
  j["group"] = s.name;
  j["fingerprint"] = fingerprint(s.presentation);
  j["cover_free_rank"] = cover.free_rank();
  Output(c).emit(j, s.name + "\tM(G) = " + cover.multiplier().to_string() + "\n");
  return 0;
}

int cmd_b0(const Config& c, const bogomolov::Options& opt, bool batch, const std::string& primes, bool with_controls) {
  if (batch) {
    const auto rows = bogomolov::b0_batch(parse_primes(primes), with_controls, opt);
    json out = json::array();
    std::ostringstream t;
    bool contradiction = false;
    for (const auto& r : rows) {
      auto j = report::to_json(r.result);
      j["expected_nontrivial"] = r.expect_nontrivial ? json(*r.expect_nontrivial) : json(nullptr);
      j["contradicts"] = r.contradicts;
      out.push_back(j);
      contradiction = contradiction || r.contradicts;
      t << (r.contradicts ? "CONTRADICTION  " : "") << r.group << "\tB0 = " << r.result.b0.to_string()
        << "\tM = " << r.result.multiplier.to_string() << "\n";
    }
    Output(c).emit(out, t.str());
    return contradiction ? 1 : 0;
  }
  const auto s = select(c);
  const auto r = bogomolov::b0(s.presentation, opt, s.name);
  Output(c).emit(report::to_json(r), report::to_text(r));
  if (s.expect_b0_nontrivial && r.b0.is_trivial() == *s.expect_b0_nontrivial) return 1;
  return 0;
}

int cmd_certify(const Config& c, const std::string& n_gens, kernels::PairStrategy strategy) {
  const auto s = select(c);
  const int k = certificate::parse_segment(n_gens, s.presentation.rank());
  const auto cert = certificate::check_lemma21(s.presentation, k, strategy, s.name);
  Output(c).emit(report::to_json(cert), report::to_text(cert));
  return s.family_member && !cert.valid ? 1 : 0;
}

int cmd_oracle_check(const Config& c, std::uint64_t bound) {
  std::vector<families::NamedGroup> corpus;
  const int given = (c.family.empty() ? 0 : 1) + (c.file.empty() ? 0 : 1) + (c.control.empty() ? 0 : 1);
  if (given) {
    const auto s = select(c);
    corpus.push_back({s.name, s.presentation});
  } else {
    for (auto& g : families::controls())
      if (g.presentation.nominal_order() <= bound) corpus.push_back(std::move(g));
  }
  json rows = json::array();
  std::ostringstream t;
  bool all = true;
  for (const auto& [name, pres] : corpus) {
    const oracle::MulTable table{PcGroup(pres), bound};
    const oracle::Cohomology h(table);
    const auto m = homology::schur_multiplier(pres);
    const auto b = bogomolov::b0(pres, {}, name).b0;
    const auto direct = h.b0();
    const bool ok = m.order() == h.h2_qz().invariants.order() && b == direct;
    all = all && ok;
    rows.push_back({{"group", name}, {"fingerprint", fingerprint(pres)}, {"multiplier", report::to_json(m)},
                    {"h2_qz", report::to_json(h.h2_qz().invariants)}, {"b0", report::to_json(b)},
                    {"b0_direct", report::to_json(direct)}, {"agree", ok}});
    t << (ok ? "ok  " : "BAD ") << name << "\tM = " << m.to_string() << "\tH2(G,Q/Z) = " << h.h2_qz().invariants.to_string()
      << "\tB0 = " << b.to_string() << "\tdirect = " << direct.to_string() << "\n";
  }
  Output(c).emit(json{{"agree", all}, {"groups", rows}}, t.str());
  return all ? 0 : 1;
}

int cmd_reproduce(const Config& c, const std::string& primes, const std::vector<int>& only) {
  acceptance::Options opt;
  opt.primes = parse_primes(primes);
  opt.only = only;
  const bool stream = c.format == "text" && c.output.empty();
  const auto results = acceptance::run(opt, stream ? &std::cout : nullptr);
  json rows = json::array();
  std::ostringstream t;
  bool all = true;
  for (const auto& r : results) {
    rows.push_back(report::to_json(r));
    t << acceptance::format_line(r) << "\n";
    all = all && r.passed();
  }
  if (!stream) Output(c).emit(json{{"passed", all}, {"criteria", rows}}, t.str());
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"b0kit: Bogomolov multipliers of small p-groups"};
  app.require_subcommand(1);
  app.fallthrough();
  Config c;
  app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--output", c.output, "write the report to a file");
  app.add_option("--threads", c.threads, "worker threads (default: OpenMP default)");

  auto* verify = app.add_subcommand("verify", "consistency and structure of a presentation");
  add_selector(verify, c);

  auto* fam = app.add_subcommand("families", "family members and control groups");
  auto* fam_list = fam->add_subcommand("list", "list family members for a prime");
  fam->require_subcommand(1);
  bool controls = false;
  bool dump = false;
  fam_list->add_option("--prime", c.prime, "prime p");
  fam_list->add_flag("--controls", controls, "list the control corpus instead");
  fam_list->add_flag("--presentations", dump, "print each presentation in the pcgroup text format");

  auto* schur = app.add_subcommand("schur", "Schur multiplier");
  add_selector(schur, c);

  auto* b0 = app.add_subcommand("b0", "Bogomolov multiplier");
  add_selector(b0, c);
  std::string strategy;
  std::string mode = "verify";
  bogomolov::Options opt;
  bool batch = false;
  bool with_controls = false;
  std::string primes = "3,5,7";
  b0->add_option("--strategy", strategy, "pair strategy: full or conj")->check(CLI::IsMember({"full", "conj"}));
  b0->add_option("--mode", mode, "verify or prove-trivial")->check(CLI::IsMember({"verify", "prove-trivial"}));
  b0->add_option("--max-order", opt.max_order, "refuse larger groups unless --allow-large");
  b0->add_flag("--allow-large", opt.allow_large, "override the order budget");
  b0->add_option("--pair-budget", opt.pair_budget, "maximum commutation tests");
  b0->add_flag("--batch", batch, "all family members for --primes");
  b0->add_option("--primes", primes, "comma-separated primes for --batch");
  b0->add_flag("--controls", with_controls, "include the control corpus in --batch");

  auto* certify = app.add_subcommand("certify", "quotient certificate for N = <f_k, ..., f_n>");
  add_selector(certify, c);
  std::string n_gens = "f4,f5";
  std::string cert_strategy = "conj";
  certify->add_option("--n-gens", n_gens, "generators of N, a terminal segment (default f4,f5)");
  certify->add_option("--strategy", cert_strategy, "pair strategy: full or conj")->check(CLI::IsMember({"full", "conj"}));

  auto* oracle_cmd = app.add_subcommand("oracle-check", "brute-force cross-validation on small groups");
  add_selector(oracle_cmd, c);
  std::uint64_t bound = oracle::kDefaultOracleBound;
  oracle_cmd->add_option("--max-order", bound, "multiplication-table bound (243 for the slow mode)");

  auto* reproduce = app.add_subcommand("reproduce", "run the acceptance suite");
  std::string rep_primes = "3,5,7";
  std::vector<int> only;
  reproduce->add_option("--prime", rep_primes, "comma-separated primes for the family criteria");
  reproduce->add_option("--criteria", only, "run only these criteria")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    kernels::set_thread_count(c.threads);
    if (*verify) return cmd_verify(c);
    if (*fam_list) return cmd_families(c, controls, dump);
    if (*schur) return cmd_schur(c);
    if (*b0) {
      if (!strategy.empty()) opt.strategy = kernels::parse_strategy(strategy);
      opt.mode = mode == "verify" ? bogomolov::Mode::Verify : bogomolov::Mode::ProveTrivial;
      return cmd_b0(c, opt, batch, primes, with_controls);
    }
    if (*certify) return cmd_certify(c, n_gens, kernels::parse_strategy(cert_strategy));
    if (*oracle_cmd) return cmd_oracle_check(c, bound);
    if (*reproduce) return cmd_reproduce(c, rep_primes, only);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return 2;
  } catch (const PresentationError& e) {
    std::cerr << "presentation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
