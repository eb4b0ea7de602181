#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "b0kit/families.hpp"
#include "support.hpp"

using namespace b0kit;
using namespace b0kit::families;

namespace {

/// Multiplicative order of a mod p by repeated multiplication.
int mult_order(int a, int p) {
  int x = a % p;
  int k = 1;
  while (x != 1) {
    x = x * a % p;
    ++k;
  }
  return k;
}

/// Number of cosets of the k-th powers in (Z/p)^*, by enumeration.
int power_cosets(int p, int k) {
  std::set<int> powers;
  for (int x = 1; x < p; ++x) {
    int y = 1;
    for (int i = 0; i < k; ++i) y = y * x % p;
    powers.insert(y);
  }
  return (p - 1) / static_cast<int>(powers.size());
}

}  // namespace

TEST(NumberTheory, Primes) {
  const std::set<long long> small{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
  for (long long n = -3; n < 32; ++n) EXPECT_EQ(is_prime(n), small.count(n) == 1) << n;
}

TEST(NumberTheory, PrimitiveRoots) {
  EXPECT_EQ(smallest_primitive_root(3), 2);
  EXPECT_EQ(smallest_primitive_root(5), 2);
  EXPECT_EQ(smallest_primitive_root(7), 3);
  EXPECT_EQ(smallest_primitive_root(23), 5);
  for (int p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43}) {
    const int g = smallest_primitive_root(p);
    EXPECT_EQ(mult_order(g, p), p - 1);
    for (int a = 2; a < g; ++a) EXPECT_LT(mult_order(a, p), p - 1);
  }
}

TEST(NumberTheory, ParameterCountsMatchPowerCosets) {
  for (int p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    EXPECT_EQ(c2(p) + 1, power_cosets(p, 4)) << p;
    EXPECT_EQ(c3(p) + 1, power_cosets(p, 3)) << p;
    EXPECT_EQ(b0_family_count(p), 1 + power_cosets(p, 4) + power_cosets(p, 3));
  }
}

TEST(NumberTheory, PinnedCounts) {
  EXPECT_EQ(b0_family_count(5), 6);
  EXPECT_EQ(b0_family_count(7), 6);
  EXPECT_EQ(b0_family_count(11), 4);
  EXPECT_EQ(b0_family_count(13), 8);
  EXPECT_EQ(bagnera_count(5), 77);
  EXPECT_EQ(bagnera_count(7), 83);
  for (int p : {5, 7, 11, 13, 17})
    EXPECT_EQ(bagnera_count(p), 2 * p + 61 + std::gcd(4, p - 1) + 2 * std::gcd(3, p - 1));
  EXPECT_THROW(b0_family_count(9), std::invalid_argument);
  EXPECT_THROW(c2(2), std::invalid_argument);
}

TEST(Members, CountsAndNames) {
  EXPECT_EQ(members(3).size(), 3u);
  for (int p : {5, 7, 11, 13}) EXPECT_EQ(members(p).size(), static_cast<std::size_t>(b0_family_count(p)));
  EXPECT_EQ(name({Family::G243_28, 3, 0}), "G(243,28)");
  EXPECT_EQ(name({Family::G1, 5, 0}), "G(1|5)");
  EXPECT_EQ(name({Family::G2, 7, 1}), "G_1(2|7)");
  EXPECT_EQ(name({Family::G28_IMPOSTOR, 5, 0}), "G(28|5)");
}

TEST(Members, SyntacticallyDistinctAndConsistent) {
  for (int p : {3, 5, 7, 11}) {
    std::set<std::string> prints;
    for (const auto& s : members(p)) {
      const auto pres = build(s);
      EXPECT_TRUE(is_consistent(pres)) << name(s);
      EXPECT_EQ(pres.rank(), 5);
      for (int i = 0; i < 5; ++i) EXPECT_EQ(pres.relative_order(i), p);
      prints.insert(fingerprint(pres));
    }
    EXPECT_EQ(prints.size(), members(p).size()) << p;
  }
}

TEST(Members, DegenerateAtThree) {
  for (const auto& s : degenerate_p3()) {
    EXPECT_FALSE(is_consistent(build(s))) << name(s);
    EXPECT_LT(enforced_quotient(build(s)).order, 243u) << name(s);
  }
}

TEST(Members, Validation) {
  EXPECT_THROW(build({Family::G1, 9, 0}), std::invalid_argument);
  EXPECT_THROW(build({Family::G2, 5, 4}), std::invalid_argument);
  EXPECT_THROW(build({Family::G3, 7, -1}), std::invalid_argument);
  EXPECT_THROW(build({Family::G243_28, 5, 0}), std::invalid_argument);
  EXPECT_NO_THROW(validate({Family::G2, 5, 3}));
}

TEST(Tags, RoundTrip) {
  for (auto f : {Family::G243_28, Family::G243_29, Family::G243_30, Family::G1, Family::G2, Family::G3,
                 Family::G28_IMPOSTOR, Family::G29_IMPOSTOR, Family::G30_IMPOSTOR})
    EXPECT_EQ(parse_tag(tag(f)), f);
  EXPECT_EQ(parse_tag("g2"), Family::G2);
  EXPECT_THROW(parse_tag("G4"), std::invalid_argument);
}

TEST(Controls, KnownStructure) {
  PcGroup heis(heisenberg(3));
  EXPECT_EQ(heis.order(), 27u);
  EXPECT_EQ(exponent(heis), 3u);
  EXPECT_EQ(center(heis).order(), 3u);

  PcGroup mod(modular(3));
  EXPECT_EQ(exponent(mod), 9u);
  EXPECT_EQ(center(mod).order(), 3u);

  PcGroup q8(quaternion8());
  int involutions = 0;
  enumerate_elements(q8, [&](const Element& e) { involutions += q8.element_order(e) == 2; });
  EXPECT_EQ(involutions, 1);

  PcGroup d4(dihedral8());
  int d4_involutions = 0;
  enumerate_elements(d4, [&](const Element& e) { d4_involutions += d4.element_order(e) == 2; });
  EXPECT_EQ(d4_involutions, 5);

  PcGroup q16(quaternion16());
  EXPECT_EQ(center(q16).order(), 2u);
  EXPECT_EQ(exponent(q16), 8u);
  PcGroup d16(dihedral16());
  EXPECT_EQ(exponent(d16), 8u);
}

TEST(Controls, AllConsistentAndNamedUniquely) {
  std::set<std::string> names;
  for (const auto& [n, pres] : controls()) {
    EXPECT_TRUE(is_consistent(pres)) << n;
    EXPECT_TRUE(names.insert(n).second) << n;
  }
  for (int p : {3, 5, 7})
    for (const auto& [n, pres] : order_p4_controls(p)) {
      EXPECT_TRUE(is_consistent(pres)) << n;
      EXPECT_EQ(pres.nominal_order(), static_cast<std::uint64_t>(p * p * p * p)) << n;
    }
}
