#include "b0kit/bogomolov.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <unordered_set>

#include <omp.h>

#include "b0kit/families.hpp"
#include "b0kit/homology.hpp"

namespace b0kit::bogomolov {

PairStrategy default_strategy(std::uint64_t order) {
  return order <= 243 ? PairStrategy::Full : PairStrategy::ConjReduced;
}

std::vector<std::pair<kernels::Index, kernels::Index>> commuting_pairs(const kernels::GroupTables& t, PairStrategy s) {
  std::vector<std::pair<kernels::Index, kernels::Index>> out;
  for (auto x : kernels::outer_elements(t, s))
    for (kernels::Index y = 0; y < t.order(); ++y)
      if (t.commute(x, y)) out.emplace_back(x, y);
  return out;
}

namespace {

AbelianInvariants quotient_by_codes(const linalg::TorsionCoordinates& coords,
                                    const std::unordered_set<std::uint64_t>& codes) {
  std::vector<std::vector<std::uint64_t>> gens;
  gens.reserve(codes.size());
  for (auto c : codes) gens.push_back(coords.decode(c));
  std::sort(gens.begin(), gens.end());
  return linalg::quotient_invariants(coords.moduli(), gens);
}

}  // namespace

B0Result b0(const PcPresentation& p, const Options& options, const std::string& name) {
  const auto start = std::chrono::steady_clock::now();
  B0Result r;
  r.group = name;
  r.fingerprint = fingerprint(p);
  r.order = p.nominal_order();
  if (r.order > options.max_order && !options.allow_large)
    throw BudgetError("order " + std::to_string(r.order) + " is above the B0 budget of " +
                      std::to_string(options.max_order) + "; an explicit override is required");
  r.strategy = options.strategy.value_or(default_strategy(r.order));

  PcGroup g(p);
  homology::Cover cover(p);
  r.multiplier = cover.multiplier();
  const auto& coords = cover.coordinates();

  kernels::GroupTables t(g);
  const auto outer = kernels::outer_elements(t, r.strategy);
  const auto tests = static_cast<double>(outer.size()) * static_cast<double>(t.order());
  if (tests > static_cast<double>(options.pair_budget))
    throw BudgetError(std::string("pair scan with strategy ") + kernels::to_string(r.strategy) + " needs " +
                      std::to_string(static_cast<std::uint64_t>(tests)) + " commutation tests" +
                      (r.strategy == PairStrategy::Full ? "; use strategy conj" : ""));

  std::unordered_set<std::uint64_t> codes;
  if (r.multiplier.is_trivial()) {
    r.b0 = {};
    r.early_exit = options.mode == Mode::ProveTrivial;
    if (r.early_exit) {
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return r;
    }
  }

  kernels::CoverTables ct(t, cover);
  const int threads = omp_get_max_threads();
  std::vector<std::unordered_set<std::uint64_t>> local(static_cast<std::size_t>(threads));
  std::vector<std::uint64_t> visited(static_cast<std::size_t>(threads), 0);
  std::exception_ptr error;

  // Early exit checks between chunks of outer elements; verification mode
  // runs one chunk covering everything.
  const std::size_t chunk = options.mode == Mode::ProveTrivial ? std::max<std::size_t>(64, outer.size() / 32) : outer.size();
  for (std::size_t begin = 0; begin < outer.size(); begin += chunk) {
    const auto end = std::min(outer.size(), begin + chunk);
#pragma omp parallel
    {
      const auto tid = static_cast<std::size_t>(omp_get_thread_num());
      std::vector<std::int64_t> lift;
      std::vector<std::uint64_t> c;
#pragma omp for schedule(dynamic, 1)
      for (long long i = static_cast<long long>(begin); i < static_cast<long long>(end); ++i) {
        const auto x = outer[static_cast<std::size_t>(i)];
        for (kernels::Index y = 0; y < t.order(); ++y) {
          if (!ct.commutator_lift(x, y, lift)) continue;
          ++visited[tid];
          if (std::all_of(lift.begin(), lift.end(), [](std::int64_t v) { return v == 0; })) continue;
          if (!coords.coordinates(lift, c)) {
#pragma omp critical
            if (!error) error = std::make_exception_ptr(std::logic_error("commutator lift is not torsion"));
            continue;
          }
          if (std::all_of(c.begin(), c.end(), [](std::uint64_t v) { return v == 0; })) continue;
          local[tid].insert(coords.encode(c));
        }
      }
    }
    if (error) std::rethrow_exception(error);
    for (auto& s : local) {
      codes.insert(s.begin(), s.end());
      s.clear();
    }
    if (options.mode == Mode::ProveTrivial && end < outer.size() && quotient_by_codes(coords, codes).is_trivial()) {
      r.early_exit = true;
      break;
    }
  }

  for (auto v : visited) r.pairs_visited += v;
  r.m0_generator_count = codes.size();
  r.b0 = quotient_by_codes(coords, codes);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<BatchRow> b0_batch(const std::vector<int>& primes, bool include_controls, const Options& options) {
  std::vector<BatchRow> rows;
  auto run = [&](const std::string& name, const PcPresentation& p, std::optional<bool> expect) {
    BatchRow row{name, expect, b0(p, options, name), false};
    if (expect) row.contradicts = row.result.b0.is_trivial() == *expect;
    rows.push_back(std::move(row));
  };
  for (int p : primes) {
    for (const auto& s : families::members(p)) run(families::name(s), families::build(s), true);
    if (include_controls)
      for (const auto& c : families::order_p4_controls(p)) run(c.name, c.presentation, false);
  }
  if (include_controls)
    for (const auto& c : families::controls()) run(c.name, c.presentation, false);
  return rows;
}

}  // namespace b0kit::bogomolov
