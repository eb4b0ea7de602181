#pragma once

// Serial reference implementations by direct collection, without tables or
// threads. Slow; kept to cross-check the kernels and for benchmarking.

#include <cstdint>
#include <utility>
#include <vector>

#include "b0kit/kernels.hpp"
#include "b0kit/linalg.hpp"
#include "b0kit/pcgroup.hpp"

namespace b0kit::reference {

/// Smallest element index of each conjugacy class, with class sizes.
struct Classes {
  std::vector<std::uint64_t> representatives;
  std::vector<std::uint64_t> sizes;
};

Classes conjugacy_classes(const PcGroup& g);

/// Commuting pairs (x, y) visited by the strategy, as element indices.
std::vector<std::pair<std::uint64_t, std::uint64_t>> commuting_pairs(const PcGroup& g, kernels::PairStrategy s);

std::uint64_t commuting_pair_count(const PcGroup& g, kernels::PairStrategy s);

/// M(G) / M0(G) with every lift collected in the cover.
AbelianInvariants b0(const PcPresentation& p, kernels::PairStrategy s);

}  // namespace b0kit::reference
