#pragma once

// Certificate that B0(G) is non-trivial for G with an abelian normal
// terminal segment N:
//
//   (i)  t = |Hom(N, Q/Z)^G| < h = |M(G/N)|, so transgression is not onto;
//   (ii) for every commuting pair (x, y) of G, <xN, yN> is cyclic in G/N.
//
// Then inflation from G/N lands in B0(G) with image of order at least
// h / gcd(t, h).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "b0kit/kernels.hpp"
#include "b0kit/pcgroup.hpp"

namespace b0kit::certificate {

struct PairWitness {
  Element x;
  Element y;
};

struct Certificate {
  std::string group;
  std::string fingerprint;
  int segment_start = 0;  // N = <g_k, ..., g_n>
  std::uint64_t n_order = 0;
  std::uint64_t t = 0;  // |Hom(N, Q/Z)^G|
  std::uint64_t h = 0;  // |M(G/N)|
  AbelianInvariants quotient_multiplier;
  bool transgression_not_onto = false;  // t < h
  bool pair_scan_passed = false;
  kernels::PairStrategy strategy = kernels::PairStrategy::ConjReduced;
  std::uint64_t pairs_scanned = 0;
  std::optional<PairWitness> failing_pair;
  std::uint64_t b0_lower_bound = 1;  // h / gcd(t, h) when valid
  bool valid = false;
  double seconds = 0;
};

/// Parses "f4,f5" (1-based, also g4,g5) into the start of a terminal
/// segment; throws std::invalid_argument if the list is not one.
int parse_segment(const std::string& gens, int rank);

/// Throws std::invalid_argument when N is not abelian or not normal.
Certificate check_lemma21(const PcPresentation& p, int segment_start,
                          kernels::PairStrategy strategy = kernels::PairStrategy::ConjReduced,
                          const std::string& name = "");

struct CyclicCheck {
  bool commuting = false;
  bool cyclic = false;
};

/// <a, b> is cyclic iff its largest element order equals its order.
CyclicCheck cyclic_check(const PcGroup& q, const Element& a, const Element& b);

/// Structural hypotheses on a 5-generator presentation f1..f5:
///   (i)   f4^p = f5^p = 1 and f5 central;
///   (ii)  [f2,f1] = f3, [f3,f1] = f4, [f4,f1] = [f3,f2] = f5,
///         [f4,f2] = [f4,f3] = 1;
///   (iii) <f4,f5> = C_p x C_p and G/<f4,f5> is non-abelian of order p^3 and
///         exponent p.
struct LemfReport {
  bool shape = false;  // 5 generators, all relative orders one prime p
  int p = 0;
  bool condition_i = false;
  bool condition_ii = false;
  bool condition_iii = false;
  std::vector<std::string> notes;

  bool holds() const noexcept { return shape && condition_i && condition_ii && condition_iii; }
};

LemfReport check_lemf(const PcPresentation& p);

}  // namespace b0kit::certificate
