#include "b0kit/certificate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <numeric>
#include <sstream>

#include <omp.h>

#include "b0kit/families.hpp"
#include "b0kit/homology.hpp"

namespace b0kit::certificate {

int parse_segment(const std::string& gens, int rank) {
  std::vector<int> idx;
  std::stringstream ss(gens);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), [](unsigned char c) { return std::isspace(c); }), tok.end());
    if (tok.size() < 2 || (tok[0] != 'f' && tok[0] != 'g'))
      throw std::invalid_argument("bad generator name '" + tok + "'");
    int v = 0;
    try {
      std::size_t used = 0;
      v = std::stoi(tok.substr(1), &used);
      if (used != tok.size() - 1) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad generator name '" + tok + "'");
    }
    if (v < 1 || v > rank) throw std::invalid_argument("generator " + tok + " out of range");
    idx.push_back(v - 1);
  }
  if (idx.empty()) throw std::invalid_argument("empty generator list");
  std::sort(idx.begin(), idx.end());
  for (std::size_t i = 0; i < idx.size(); ++i)
    if (idx[i] != rank - static_cast<int>(idx.size()) + static_cast<int>(i))
      throw std::invalid_argument("'" + gens + "' is not a terminal segment of the generators");
  return idx.front();
}

CyclicCheck cyclic_check(const PcGroup& q, const Element& a, const Element& b) {
  CyclicCheck r;
  r.commuting = q.multiply(a, b) == q.multiply(b, a);
  const auto h = generate_subgroup(q, {a, b});
  std::uint64_t best = 1;
  for (auto idx : h.elements) best = std::max(best, q.element_order(q.element_at(idx)));
  r.cyclic = best == h.order();
  return r;
}

namespace {

/// cyclic[a * |Q| + b] for commuting a, b in Q (others unused).
std::vector<char> cyclic_table(const kernels::GroupTables& tq) {
  const auto n = tq.order();
  if (n > 4096) throw BudgetError("quotient too large for the cyclic-pair table");
  std::vector<std::uint64_t> orders(n);
  for (kernels::Index a = 0; a < n; ++a) orders[a] = tq.element_order(a);
  std::vector<char> table(n * n, 0);
  const auto total = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (long long ia = 0; ia < total; ++ia) {
    const auto a = static_cast<kernels::Index>(ia);
    for (kernels::Index b = a; b < n; ++b) {
      if (!tq.commute(a, b)) continue;
      const kernels::Index gens[2] = {a, b};
      const auto h = kernels::generate(tq, gens);
      std::uint64_t best = 1;
      for (auto x : h) best = std::max(best, orders[x]);
      const char c = best == h.size() ? 1 : 0;
      table[static_cast<std::size_t>(a) * n + b] = c;
      table[static_cast<std::size_t>(b) * n + a] = c;
    }
  }
  return table;
}

}  // namespace

Certificate check_lemma21(const PcPresentation& p, int k, kernels::PairStrategy strategy, const std::string& name) {
  const auto start = std::chrono::steady_clock::now();
  Certificate c;
  c.group = name;
  c.fingerprint = fingerprint(p);
  c.segment_start = k;
  c.strategy = strategy;

  PcGroup g(p);
  const auto n = terminal_segment(g, k);
  if (!n.is_normal) throw std::invalid_argument("N is not normal");
  c.n_order = n.order();
  homology::CharacterSpace chars(g, n);
  c.t = chars.fixed_count();

  const auto qp = quotient_by_tail(p, k);
  c.quotient_multiplier = homology::schur_multiplier(qp);
  c.h = c.quotient_multiplier.order();
  c.transgression_not_onto = c.t < c.h;

  PcGroup q(qp);
  kernels::GroupTables tg(g);
  kernels::GroupTables tq(q);
  const auto cyclic = cyclic_table(tq);
  const auto qn = tq.order();
  const auto nn = c.n_order;
  const auto outer = kernels::outer_elements(tg, strategy);

  std::atomic<bool> failed{false};
  std::uint64_t scanned = 0;
  std::optional<PairWitness> witness;
  const auto count = static_cast<long long>(outer.size());
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : scanned)
  for (long long i = 0; i < count; ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    const auto x = outer[static_cast<std::size_t>(i)];
    const auto qx = x / nn;
    for (kernels::Index y = 0; y < tg.order(); ++y) {
      if (!tg.commute(x, y)) continue;
      ++scanned;
      if (!cyclic[qx * qn + y / nn]) {
        if (!failed.exchange(true)) {
#pragma omp critical
          witness = PairWitness{tg.element(x), tg.element(y)};
        }
        break;
      }
    }
  }
  c.pairs_scanned = scanned;
  c.pair_scan_passed = !failed.load();
  c.failing_pair = witness;
  c.valid = c.transgression_not_onto && c.pair_scan_passed;
  c.b0_lower_bound = c.valid ? c.h / std::gcd(c.t, c.h) : 1;
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return c;
}

LemfReport check_lemf(const PcPresentation& pres) {
  LemfReport r;
  if (pres.rank() != 5) {
    r.notes.push_back("expected 5 generators, found " + std::to_string(pres.rank()));
    return r;
  }
  const int p = pres.relative_order(0);
  r.p = p;
  const auto& orders = pres.relative_orders();
  if (!families::is_prime(p) || !std::all_of(orders.begin(), orders.end(), [&](int o) { return o == p; })) {
    r.notes.push_back("relative orders are not all one prime");
    return r;
  }
  if (!is_consistent(pres)) {
    r.notes.push_back("presentation is inconsistent");
    return r;
  }
  r.shape = true;
  PcGroup g(pres);
  auto f = [&](int i) { return g.generator(i - 1); };
  auto word = [&](std::initializer_list<std::pair<int, int>> fs) {
    Exponents e(5, 0);
    for (auto [i, k] : fs) e[static_cast<std::size_t>(i - 1)] = k;
    return g.from_exponents(e);
  };
  const Element one = g.identity();

  bool f5_central = true;
  for (int i = 1; i <= 5; ++i) f5_central = f5_central && g.is_identity(g.commutator(f(5), f(i)));
  r.condition_i = g.is_identity(g.power(f(4), p)) && g.is_identity(g.power(f(5), p)) && f5_central;
  if (!r.condition_i) r.notes.push_back("condition (i) fails");

  r.condition_ii = g.commutator(f(2), f(1)) == word({{3, 1}}) && g.commutator(f(3), f(1)) == word({{4, 1}}) &&
                   g.commutator(f(4), f(1)) == word({{5, 1}}) && g.commutator(f(3), f(2)) == word({{5, 1}}) &&
                   g.commutator(f(4), f(2)) == one && g.commutator(f(4), f(3)) == one;
  if (!r.condition_ii) r.notes.push_back("condition (ii) fails");

  const auto n = terminal_segment(g, 3);
  const bool n_elementary = n.order() == static_cast<std::size_t>(p) * static_cast<std::size_t>(p) &&
                            g.element_order(f(4)) == static_cast<std::uint64_t>(p) &&
                            g.element_order(f(5)) == static_cast<std::uint64_t>(p) &&
                            g.is_identity(g.commutator(f(4), f(5))) && n.is_normal;
  PcGroup q(quotient_by_tail(pres, 3));
  bool q_nonabelian = false;
  for (int i = 0; i < q.rank(); ++i)
    for (int j = i + 1; j < q.rank(); ++j)
      q_nonabelian = q_nonabelian || !q.is_identity(q.commutator(q.generator(j), q.generator(i)));
  const bool q_ok = q.order() == static_cast<std::uint64_t>(p) * p * p && q_nonabelian &&
                    exponent(q) == static_cast<std::uint64_t>(p);
  r.condition_iii = n_elementary && q_ok;
  if (!n_elementary) r.notes.push_back("<f4,f5> is not C_p x C_p");
  if (!q_ok) r.notes.push_back("G/<f4,f5> is not non-abelian of order p^3 and exponent p");
  return r;
}

}  // namespace b0kit::certificate
