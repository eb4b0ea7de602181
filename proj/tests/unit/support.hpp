#pragma once

#include <cstdint>
#include <random>

#include "b0kit/families.hpp"

namespace b0kit::test {

/// Seed for randomized tests: --seed=N on the command line or B0KIT_SEED,
/// default 20240601.
std::uint64_t seed();

inline std::mt19937_64 rng(std::uint64_t salt = 0) { return std::mt19937_64(seed() ^ (salt * 0x9e3779b97f4a7c15ULL)); }

inline PcPresentation family(families::Family f, int p, int r = 0) { return families::build({f, p, r}); }

}  // namespace b0kit::test
