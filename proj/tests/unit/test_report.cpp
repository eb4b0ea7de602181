#include <gtest/gtest.h>

#include "b0kit/bogomolov.hpp"
#include "b0kit/certificate.hpp"
#include "b0kit/families.hpp"
#include "b0kit/report.hpp"
#include "support.hpp"

using namespace b0kit;
using namespace b0kit::report;
using families::Family;

TEST(Report, InvariantsRoundTrip) {
  for (const auto& a : {AbelianInvariants{}, AbelianInvariants{{3}, 0}, AbelianInvariants{{2, 6, 12}, 2}})
    EXPECT_EQ(invariants_from_json(to_json(a)), a);
  EXPECT_THROW(invariants_from_json(json{{"torsion", {4, 6}}, {"free_rank", 0}}), std::invalid_argument);
  EXPECT_THROW(invariants_from_json(json{{"torsion", {3}}}), std::invalid_argument);
  EXPECT_THROW(invariants_from_json(json::array()), std::invalid_argument);
}

TEST(Report, B0RoundTripAndDeterminism) {
  const auto pres = test::family(Family::G243_29, 3);
  const auto a = bogomolov::b0(pres, {}, "G(243,29)");
  const auto back = b0_from_json(to_json(a));
  EXPECT_EQ(back.group, a.group);
  EXPECT_EQ(back.fingerprint, a.fingerprint);
  EXPECT_EQ(back.order, a.order);
  EXPECT_EQ(back.b0, a.b0);
  EXPECT_EQ(back.multiplier, a.multiplier);
  EXPECT_EQ(back.strategy, a.strategy);
  EXPECT_EQ(back.pairs_visited, a.pairs_visited);
  EXPECT_EQ(back.m0_generator_count, a.m0_generator_count);

  auto j1 = to_json(a);
  auto j2 = to_json(bogomolov::b0(pres, {}, "G(243,29)"));
  j1.erase("seconds");
  j2.erase("seconds");
  EXPECT_EQ(j1.dump(), j2.dump());
  EXPECT_NE(to_text(a).find("G(243,29)"), std::string::npos);
}

TEST(Report, CertificateJson) {
  const auto c = certificate::check_lemma21(test::family(Family::G1, 5), 3, kernels::PairStrategy::ConjReduced, "G(1|5)");
  const auto j = to_json(c);
  EXPECT_EQ(j.at("group"), "G(1|5)");
  EXPECT_EQ(j.at("segment_start"), 4);
  EXPECT_EQ(j.at("t"), 5);
  EXPECT_EQ(j.at("h"), 25);
  EXPECT_EQ(j.at("valid"), true);
  EXPECT_FALSE(j.contains("failing_pair"));

  const auto bad = certificate::check_lemma21(families::elementary_abelian(3, 3), 2);
  const auto jb = to_json(bad);
  ASSERT_TRUE(jb.contains("failing_pair"));
  ASSERT_EQ(jb.at("failing_pair").size(), 2u);
  EXPECT_EQ(jb.at("failing_pair")[0].size(), 3u);
  EXPECT_NE(to_text(bad).find("fail"), std::string::npos);
}

TEST(Report, LemfJson) {
  const auto j = to_json(certificate::check_lemf(test::family(Family::G2, 7, 1)));
  EXPECT_EQ(j.at("holds"), true);
  EXPECT_EQ(j.at("p"), 7);
}
