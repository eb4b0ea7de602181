#include "b0kit/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>

#include "b0kit/bogomolov.hpp"
#include "b0kit/certificate.hpp"
#include "b0kit/families.hpp"
#include "b0kit/homology.hpp"
#include "b0kit/oracle.hpp"

namespace b0kit::acceptance {

namespace {

long long binom(long long a, long long b) {
  if (b < 0 || a < b) return 0;
  long long r = 1;
  for (long long k = 1; k <= b; ++k) r = r * (a - b + k) / k;
  return r;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (int x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

std::vector<families::NamedGroup> named_members(int p) {
  std::vector<families::NamedGroup> out;
  for (const auto& s : families::members(p)) out.push_back({families::name(s), families::build(s)});
  return out;
}

/// Collects mismatches; keeps only the first few for the report.
struct Problems {
  std::size_t count = 0;
  std::vector<std::string> first;

  void add(const std::string& what) {
    if (count++ < 3) first.push_back(what);
  }
  std::string summary(const std::string& ok) const {
    if (count == 0) return ok;
    std::string s = std::to_string(count) + " mismatch(es): ";
    for (std::size_t i = 0; i < first.size(); ++i) s += (i ? "; " : "") + first[i];
    return s;
  }
};

using Body = std::function<std::pair<bool, std::string>()>;

CriterionResult timed(int id, std::string title, double limit, const Body& body) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  r.limit_seconds = limit;
  const auto start = std::chrono::steady_clock::now();
  try {
    auto [ok, detail] = body();
    r.correct = ok;
    r.detail = std::move(detail);
  } catch (const std::exception& e) {
    r.correct = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::pair<bool, std::string> structural(const std::vector<int>& primes) {
  Problems bad;
  std::size_t groups = 0;
  for (int p : primes)
    for (const auto& [name, pres] : named_members(p)) {
      ++groups;
      const auto pu = static_cast<std::uint64_t>(p);
      if (!is_consistent(pres)) {
        bad.add(name + " inconsistent");
        continue;
      }
      PcGroup g(pres);
      if (g.order() != pu * pu * pu * pu * pu) bad.add(name + " order");
      const auto z = center(g);
      if (z.elements != terminal_segment(g, 4).elements) bad.add(name + " centre is not <f5>");
      if (derived_subgroup(g).elements != terminal_segment(g, 2).elements) bad.add(name + " derived subgroup");
      if (abelianization(pres) != AbelianInvariants{{pu, pu}, 0}) bad.add(name + " abelianization");
      PcGroup q(quotient_by_tail(pres, 3));
      const bool nonabelian = !q.is_identity(q.commutator(q.generator(1), q.generator(0)));
      if (q.order() != pu * pu * pu || !nonabelian || exponent(q) != pu) bad.add(name + " G/<f4,f5>");
    }
  return {bad.count == 0, bad.summary(std::to_string(groups) + " groups at p=" + join(primes) + ", all checks exact")};
}

std::pair<bool, std::string> step2(const std::vector<int>& primes) {
  Problems bad;
  std::size_t groups = 0;
  for (int p : primes)
    for (const auto& [name, pres] : named_members(p)) {
      ++groups;
      for (const auto& f : step2_failures(pres, p)) bad.add(name + ": " + f);
    }
  return {bad.count == 0, bad.summary(std::to_string(groups) + " groups at p=" + join(primes) + ", every identity holds")};
}

std::pair<bool, std::string> certificates(const std::vector<int>& primes) {
  Problems bad;
  std::ostringstream timing;
  for (int p : primes) {
    const auto start = std::chrono::steady_clock::now();
    const auto pu = static_cast<std::uint64_t>(p);
    for (const auto& [name, pres] : named_members(p)) {
      const auto c = certificate::check_lemma21(pres, 3, kernels::PairStrategy::ConjReduced, name);
      if (!c.valid || c.t != pu || c.h != pu * pu || c.b0_lower_bound != pu || !c.pair_scan_passed)
        bad.add(name + " t=" + std::to_string(c.t) + " h=" + std::to_string(c.h) +
                " bound=" + std::to_string(c.b0_lower_bound) + (c.pair_scan_passed ? "" : " scan failed"));
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%sp=%d %.2fs", timing.tellp() > 0 ? ", " : "", p,
                  std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    timing << buf;
  }
  return {bad.count == 0, bad.summary("t=p, h=p^2, bound p, scan passing for every member (" + timing.str() + ")")};
}

std::pair<bool, std::string> exact_b0(const std::vector<int>& primes) {
  Problems bad;
  std::size_t positive = 0;
  std::size_t negative = 0;
  bogomolov::Options opt;
  opt.mode = bogomolov::Mode::Verify;
  for (int p : primes) {
    const auto members = families::members(p);
    const auto expected = p == 3 ? 3u : static_cast<std::size_t>(families::b0_family_count(p));
    if (members.size() != expected) bad.add("p=" + std::to_string(p) + " member count " + std::to_string(members.size()));
    for (const auto& [name, pres] : named_members(p)) {
      ++positive;
      if (bogomolov::b0(pres, opt, name).b0.is_trivial()) bad.add(name + " has trivial B0");
    }
    for (const auto& [name, pres] : families::order_p4_controls(p)) {
      ++negative;
      if (!bogomolov::b0(pres, opt, name).b0.is_trivial()) bad.add(name + " has non-trivial B0");
    }
  }
  for (const auto& [name, pres] : families::controls()) {
    ++negative;
    if (!bogomolov::b0(pres, opt, name).b0.is_trivial()) bad.add(name + " has non-trivial B0");
  }
  return {bad.count == 0, bad.summary(std::to_string(positive) + " family members non-trivial, " +
                                      std::to_string(negative) + " controls trivial")};
}

std::pair<bool, std::string> counting() {
  using families::b0_family_count;
  using families::bagnera_count;
  const bool ok = b0_family_count(5) == 6 && b0_family_count(7) == 6 && b0_family_count(11) == 4 &&
                  b0_family_count(13) == 8 && bagnera_count(5) == 77 && bagnera_count(7) == 83;
  std::ostringstream s;
  s << "family counts 5,7,11,13 -> " << b0_family_count(5) << "," << b0_family_count(7) << "," << b0_family_count(11)
    << "," << b0_family_count(13) << "; bagnera 5,7 -> " << bagnera_count(5) << "," << bagnera_count(7);
  return {ok, s.str()};
}

std::pair<bool, std::string> collapse() {
  Problems bad;
  std::ostringstream s;
  for (int p : {5, 7}) {
    const families::FamilySpec spec{families::Family::G28_IMPOSTOR, p, 0};
    const auto pres = families::build(spec);
    if (is_consistent(pres)) bad.add(families::name(spec) + " is consistent");
    const auto q = enforced_quotient(pres);
    const auto want = static_cast<std::uint64_t>(p) * p * p * p;
    if (q.order != want || !is_consistent(q.presentation)) bad.add(families::name(spec) + " collapses to " + std::to_string(q.order));
    s << (p == 5 ? "" : ", ") << families::name(spec) << " -> " << q.order;
  }
  return {bad.count == 0, bad.summary(s.str())};
}

std::pair<bool, std::string> degenerate() {
  Problems bad;
  std::string names;
  for (const auto& spec : families::degenerate_p3()) {
    names += (names.empty() ? "" : ", ") + families::name(spec);
    if (is_consistent(families::build(spec))) bad.add(families::name(spec) + " is consistent");
  }
  return {bad.count == 0, bad.summary(names + " all inconsistent")};
}

std::pair<bool, std::string> oracle_cross() {
  Problems bad;
  std::size_t groups = 0;
  for (const auto& [name, pres] : families::controls()) {
    PcGroup g(pres);
    if (g.order() > 64) continue;
    ++groups;
    const oracle::MulTable t(g);
    const oracle::Cohomology h(t);
    const auto m = homology::schur_multiplier(pres);
    if (m.order() != h.h2_qz().invariants.order())
      bad.add(name + " |M| = " + std::to_string(m.order()) + " vs |H2| = " + std::to_string(h.h2_qz().invariants.order()));
    const auto fast = bogomolov::b0(pres, {}, name).b0;
    const auto direct = h.b0();
    if (fast != direct) bad.add(name + " B0 " + fast.to_string() + " vs direct " + direct.to_string());
  }
  const AbelianInvariants c3{{3}, 0};
  const AbelianInvariants c3c3{{3, 3}, 0};
  const auto pq = families::elementary_abelian(3, 2);
  const auto heis = families::heisenberg(3);
  if (homology::schur_multiplier(pq) != c3 || oracle::h2_qz(oracle::MulTable(PcGroup(pq))) != c3) bad.add("M(C3xC3)");
  if (homology::schur_multiplier(heis) != c3c3 || oracle::h2_qz(oracle::MulTable(PcGroup(heis))) != c3c3)
    bad.add("M(Heisenberg(3))");
  return {bad.count == 0, bad.summary(std::to_string(groups) + " groups of order <= 64 agree; M(C3xC3)=C3, M(Heis(3))=C3 x C3")};
}

std::pair<bool, std::string> strategies() {
  Problems bad;
  std::vector<families::NamedGroup> corpus = named_members(3);
  for (auto& c : families::order_p4_controls(3)) corpus.push_back(std::move(c));
  for (auto& c : families::controls())
    if (c.presentation.nominal_order() <= 243) corpus.push_back(std::move(c));
  for (const auto& [name, pres] : corpus) {
    bogomolov::Options full;
    full.strategy = kernels::PairStrategy::Full;
    bogomolov::Options conj;
    conj.strategy = kernels::PairStrategy::ConjReduced;
    const auto a = bogomolov::b0(pres, full, name).b0;
    const auto b = bogomolov::b0(pres, conj, name).b0;
    if (a != b) bad.add(name + " full " + a.to_string() + " vs conj " + b.to_string());
  }
  return {bad.count == 0, bad.summary(std::to_string(corpus.size()) + " groups of order <= 243 agree")};
}

std::pair<bool, std::string> cert_vs_exact(const std::vector<int>& primes) {
  Problems bad;
  std::size_t groups = 0;
  for (int p : primes)
    for (const auto& [name, pres] : named_members(p)) {
      ++groups;
      const auto c = certificate::check_lemma21(pres, 3, kernels::PairStrategy::ConjReduced, name);
      const auto r = bogomolov::b0(pres, {}, name);
      if (!c.valid) bad.add(name + " no certificate");
      else if (c.b0_lower_bound > r.b0.order()) bad.add(name + " bound " + std::to_string(c.b0_lower_bound) + " > |B0| = " + std::to_string(r.b0.order()));
    }
  return {bad.count == 0, bad.summary(std::to_string(groups) + " members at p=" + join(primes) + ", bound <= |B0| throughout")};
}

}  // namespace

std::vector<std::string> step2_failures(const PcPresentation& pres, int p) {
  std::vector<std::string> out;
  PcGroup g(pres);
  auto f = [&](int i) { return g.generator(i - 1); };
  auto pw = [&](int gen, long long e) { return g.power(f(gen), e); };
  auto prod = [&](std::initializer_list<Element> xs) {
    Element acc = g.identity();
    for (const auto& x : xs) acc = g.multiply(acc, x);
    return acc;
  };
  auto check = [&](bool ok, const char* what, long long i, long long j) {
    if (!ok) out.push_back(std::string(what) + " fails at i=" + std::to_string(i) + ", j=" + std::to_string(j));
  };
  for (long long i = 1; i <= p - 1; ++i)
    for (long long j = 1; j <= p - 1; ++j) {
      check(prod({pw(4, i), pw(1, j)}) == prod({pw(1, j), pw(4, i), pw(5, i * j)}), "f4^i f1^j", i, j);
      check(prod({pw(3, i), pw(2, j)}) == prod({pw(2, j), pw(3, i), pw(5, i * j)}), "f3^i f2^j", i, j);
      check(prod({pw(3, i), pw(1, j)}) == prod({pw(1, j), pw(3, i), pw(4, i * j), pw(5, i * binom(j, 2))}), "f3^i f1^j",
            i, j);
      check(prod({pw(2, i), pw(1, j)}) ==
                prod({pw(1, j), pw(2, i), pw(3, i * j), pw(4, i * binom(j, 2)), pw(5, i * binom(j, 3) + binom(i, 2) * j)}),
            "f2^i f1^j", i, j);
    }

  PcGroup q(quotient_by_tail(pres, 3));
  auto qf = [&](int gen, long long e) { return q.power(q.generator(gen - 1), e); };
  for (long long i = 1; i <= p - 1; ++i)
    for (long long j = 1; j <= p - 1; ++j)
      for (long long e = 1; e <= p; ++e) {
        const auto lhs = q.power(q.multiply(qf(1, j), qf(2, i)), e);
        const auto rhs = q.multiply(q.multiply(qf(1, e * j), qf(2, e * i)), qf(3, binom(e, 2) * i * j));
        if (lhs != rhs)
          out.push_back("quotient power identity fails at i=" + std::to_string(i) + ", j=" + std::to_string(j) +
                        ", e=" + std::to_string(e));
      }
  return out;
}

std::string format_line(const CriterionResult& r) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.2f s, limit %.0f s)", r.seconds, r.limit_seconds);
  std::string line = std::string(r.passed() ? "PASS" : "FAIL") + "  [" + (r.id < 10 ? " " : "") + std::to_string(r.id) +
                     "] " + r.title + ": " + r.detail + " " + buf;
  if (r.correct && !r.passed()) line += " over time limit";
  return line;
}

std::vector<CriterionResult> run(const Options& options, std::ostream* out) {
  const auto primes = options.primes;
  std::vector<int> small;
  for (int p : primes)
    if (p <= 5) small.push_back(p);

  struct Spec {
    int id;
    const char* title;
    double limit;
    Body body;
  };
  const std::vector<Spec> specs = {
      {1, "structural suite", 10, [&] { return structural(primes); }},
      {2, "commutator and power identities", 30, [&] { return step2(primes); }},
      {3, "quotient certificates N=<f4,f5>", 600, [&] { return certificates(primes); }},
      {4, "exact B0 on families and controls", 900, [&] { return exact_b0(primes); }},
      {5, "counting formulas", 1, [] { return counting(); }},
      {6, "collapsed presentations", 10, [] { return collapse(); }},
      {7, "degenerate presentations at p=3", 1, [] { return degenerate(); }},
      {8, "oracle cross-validation", 300, [] { return oracle_cross(); }},
      {9, "pair strategy invariance", 120, [] { return strategies(); }},
      {10, "certificate bound vs exact B0", 300, [&] { return cert_vs_exact(small); }},
  };
  std::vector<CriterionResult> results;
  for (const auto& s : specs) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), s.id) == options.only.end()) continue;
    results.push_back(timed(s.id, s.title, s.limit, s.body));
    if (out) *out << format_line(results.back()) << std::endl;
  }
  return results;
}

}  // namespace b0kit::acceptance
