#pragma once

// The acceptance suite: ten criteria with pinned time limits, shared by the
// acceptance test binary and `b0kit reproduce`.

#include <iosfwd>
#include <string>
#include <vector>

#include "b0kit/pcgroup.hpp"

namespace b0kit::acceptance {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool correct = false;
  double seconds = 0;
  double limit_seconds = 0;
  std::string detail;

  bool passed() const noexcept { return correct && seconds <= limit_seconds; }
};

struct Options {
  /// Primes for the family-wide criteria (1-4 and 10, the latter capped at 5).
  std::vector<int> primes{3, 5, 7};
  /// Run only these criteria (all when empty).
  std::vector<int> only;
};

/// Failures of the commutator identities in a family group at prime p for
/// 1 <= i, j <= p-1, and of the power identity in G/<f4,f5> for 1 <= e <= p.
std::vector<std::string> step2_failures(const PcPresentation& p, int prime);

/// Runs the criteria; prints one PASS/FAIL line per criterion to `out` as
/// each finishes (when out is non-null).
std::vector<CriterionResult> run(const Options& options, std::ostream* out);

std::string format_line(const CriterionResult& r);

}  // namespace b0kit::acceptance
