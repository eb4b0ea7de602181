#pragma once

// B0(G) = M(G) / M0(G), where M0 is generated by the commutator lifts
// [x~, y~] of commuting pairs (x, y).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "b0kit/kernels.hpp"
#include "b0kit/linalg.hpp"
#include "b0kit/pcgroup.hpp"

namespace b0kit::bogomolov {

using kernels::PairStrategy;

enum class Mode {
  Verify,        // scan every pair of the strategy
  ProveTrivial,  // stop once the running quotient is trivial
};

struct Options {
  std::optional<PairStrategy> strategy;  // default_strategy() when unset
  Mode mode = Mode::Verify;
  /// Orders above this are refused unless allow_large is set.
  std::uint64_t max_order = 16807;
  bool allow_large = false;
  /// Refuse a strategy whose outer-by-inner commutation tests exceed this.
  std::uint64_t pair_budget = 400'000'000;
};

struct B0Result {
  std::string group;
  std::string fingerprint;
  std::uint64_t order = 0;
  AbelianInvariants b0;
  AbelianInvariants multiplier;
  std::uint64_t m0_generator_count = 0;  // distinct non-zero lift classes
  PairStrategy strategy = PairStrategy::Full;
  std::uint64_t pairs_visited = 0;
  bool early_exit = false;
  double seconds = 0;
};

/// FULL up to order 3^5, CONJ_REDUCED above.
PairStrategy default_strategy(std::uint64_t order);

/// All commuting pairs visited by the strategy (x from the outer set, y in
/// C(x)), materialized; intended for small groups.
std::vector<std::pair<kernels::Index, kernels::Index>> commuting_pairs(const kernels::GroupTables& t, PairStrategy s);

B0Result b0(const PcPresentation& p, const Options& options = {}, const std::string& name = "");

struct BatchRow {
  std::string group;
  std::optional<bool> expect_nontrivial;  // unset for rows with no expectation
  B0Result result;
  bool contradicts = false;
};

/// Family members at each prime (B0 expected non-trivial), then controls
/// (expected trivial): the fixed control corpus and the order-p^4 groups.
std::vector<BatchRow> b0_batch(const std::vector<int>& primes, bool include_controls, const Options& options = {});

}  // namespace b0kit::bogomolov
