#include <numeric>

#include <gtest/gtest.h>

#include "b0kit/bogomolov.hpp"
#include "b0kit/certificate.hpp"
#include "b0kit/families.hpp"
#include "b0kit/homology.hpp"
#include "support.hpp"

using namespace b0kit;
using namespace b0kit::certificate;
using families::Family;
using kernels::PairStrategy;

TEST(Certificate, FamilyMembers) {
  for (int p : {3, 5}) {
    const auto pu = static_cast<std::uint64_t>(p);
    for (const auto& s : families::members(p)) {
      const auto c = check_lemma21(families::build(s), 3, PairStrategy::ConjReduced, families::name(s));
      EXPECT_TRUE(c.valid) << c.group;
      EXPECT_EQ(c.segment_start, 3);
      EXPECT_EQ(c.n_order, pu * pu);
      EXPECT_EQ(c.t, pu);
      EXPECT_EQ(c.h, pu * pu);
      EXPECT_TRUE(c.transgression_not_onto);
      EXPECT_TRUE(c.pair_scan_passed);
      EXPECT_FALSE(c.failing_pair.has_value());
      EXPECT_EQ(c.b0_lower_bound, c.h / std::gcd(c.t, c.h));
      EXPECT_EQ(c.quotient_multiplier, (AbelianInvariants{{pu, pu}, 0}));
    }
  }
}

TEST(Certificate, SoundAgainstExactB0) {
  // Whenever a certificate is issued its bound divides |B0|.
  std::vector<families::NamedGroup> corpus;
  for (const auto& s : families::members(3)) corpus.push_back({families::name(s), families::build(s)});
  for (const auto& s : families::members(5)) corpus.push_back({families::name(s), families::build(s)});
  corpus.push_back({"G_0(2|7)", test::family(Family::G2, 7, 0)});
  for (auto& c : families::controls())
    if (c.presentation.rank() >= 2 && c.presentation.nominal_order() <= 243) corpus.push_back(std::move(c));
  for (const auto& [name, pres] : corpus) {
    const auto exact = bogomolov::b0(pres, {}, name).b0.order();
    for (int k = 1; k < pres.rank(); ++k) {
      Certificate c;
      try {
        c = check_lemma21(pres, k, PairStrategy::ConjReduced, name);
      } catch (const std::invalid_argument&) {
        continue;  // N not abelian
      }
      if (c.valid) {
        EXPECT_EQ(exact % c.b0_lower_bound, 0u) << name << " k=" << k;
        EXPECT_GT(c.b0_lower_bound, 1u);
      }
      EXPECT_EQ(c.h, homology::schur_multiplier(quotient_by_tail(pres, k)).order()) << name << " k=" << k;
    }
  }
}

TEST(Certificate, StrategiesGiveSameVerdict) {
  for (const auto& pres : {test::family(Family::G243_28, 3), test::family(Family::G243_30, 3),
                           direct_product(families::heisenberg(3), families::cyclic(3)), families::heisenberg(5)}) {
    for (int k = 1; k < pres.rank(); ++k) {
      try {
        const auto a = check_lemma21(pres, k, PairStrategy::Full);
        const auto b = check_lemma21(pres, k, PairStrategy::ConjReduced);
        EXPECT_EQ(a.pair_scan_passed, b.pair_scan_passed) << k;
        EXPECT_EQ(a.valid, b.valid) << k;
        EXPECT_EQ(a.t, b.t);
        if (a.pair_scan_passed) EXPECT_LE(b.pairs_scanned, a.pairs_scanned);
      } catch (const std::invalid_argument&) {
      }
    }
  }
}

TEST(Certificate, AbelianGroupHasNone) {
  // N = G abelian: G/N trivial, h = 1, no certificate.
  const auto c = check_lemma21(families::elementary_abelian(3, 3), 0);
  EXPECT_FALSE(c.valid);
  EXPECT_EQ(c.h, 1u);
  EXPECT_EQ(c.b0_lower_bound, 1u);
  // C3^3 with N = <g3>: G/N = C3^2 has h = 3, but every pair commutes and
  // <g1 N, g2 N> is not cyclic.
  const auto d = check_lemma21(families::elementary_abelian(3, 3), 2);
  EXPECT_FALSE(d.pair_scan_passed);
  EXPECT_TRUE(d.failing_pair.has_value());
  EXPECT_FALSE(d.valid);
}

TEST(Certificate, RejectsNonAbelianSegment) {
  EXPECT_THROW(check_lemma21(test::family(Family::G1, 5), 1), std::invalid_argument);
}

TEST(ParseSegment, AcceptsAndRejects) {
  EXPECT_EQ(parse_segment("f4,f5", 5), 3);
  EXPECT_EQ(parse_segment("g5, g4", 5), 3);
  EXPECT_EQ(parse_segment("f5", 5), 4);
  EXPECT_EQ(parse_segment("f1,f2,f3,f4,f5", 5), 0);
  EXPECT_THROW(parse_segment("f3,f5", 5), std::invalid_argument);
  EXPECT_THROW(parse_segment("f4", 5), std::invalid_argument);
  EXPECT_THROW(parse_segment("f6", 5), std::invalid_argument);
  EXPECT_THROW(parse_segment("x4,x5", 5), std::invalid_argument);
  EXPECT_THROW(parse_segment("", 5), std::invalid_argument);
  EXPECT_THROW(parse_segment("f4a,f5", 5), std::invalid_argument);
}

TEST(CyclicCheck, SmallGroups) {
  // C9 x C3 with g1 of order 9 and g2 of order 3.
  PcGroup c9c3(direct_product(families::cyclic(9), families::cyclic(3)));
  const auto a = c9c3.generator(0);
  const auto b = c9c3.generator(1);
  EXPECT_TRUE(cyclic_check(c9c3, a, c9c3.power(a, 3)).cyclic);
  EXPECT_TRUE(cyclic_check(c9c3, a, b).commuting);
  EXPECT_FALSE(cyclic_check(c9c3, a, b).cyclic);
  EXPECT_TRUE(cyclic_check(c9c3, c9c3.multiply(a, b), c9c3.power(a, 3)).cyclic);
  EXPECT_TRUE(cyclic_check(c9c3, c9c3.identity(), b).cyclic);

  PcGroup heis(families::heisenberg(3));
  const auto r = cyclic_check(heis, heis.generator(0), heis.generator(1));
  EXPECT_FALSE(r.commuting);
  EXPECT_FALSE(r.cyclic);
}

TEST(Lemf, FamiliesAndControls) {
  for (int p : {3, 5, 7})
    for (const auto& s : families::members(p)) {
      const auto r = check_lemf(families::build(s));
      EXPECT_TRUE(r.holds()) << families::name(s);
      EXPECT_EQ(r.p, p);
    }
  const auto heis = check_lemf(families::heisenberg(3));
  EXPECT_FALSE(heis.shape);
  EXPECT_FALSE(heis.holds());
  const auto ea = check_lemf(families::elementary_abelian(5, 5));
  EXPECT_TRUE(ea.shape);
  EXPECT_FALSE(ea.condition_ii);
  EXPECT_FALSE(check_lemf(test::family(Family::G28_IMPOSTOR, 5)).holds());
}

TEST(Certificate, Order243) {
  const auto c = check_lemma21(test::family(Family::G243_28, 3), 3);
  EXPECT_TRUE(c.valid);
  EXPECT_EQ(c.b0_lower_bound, 3u);
}

TEST(CyclicCheck, QuotientOfFamilyGroup) {
  PcGroup q(quotient_by_tail(test::family(Family::G2, 5, 0), 3));
  const auto f1 = q.generator(0);
  const auto f2 = q.generator(1);
  const auto f3 = q.generator(2);
  EXPECT_TRUE(cyclic_check(q, f1, q.identity()).cyclic);
  EXPECT_TRUE(cyclic_check(q, f3, q.power(f3, 2)).cyclic);
  const auto r = cyclic_check(q, f1, f2);
  EXPECT_FALSE(r.commuting);
  EXPECT_FALSE(r.cyclic);
}
