#include <set>

#include <gtest/gtest.h>

#include "b0kit/acceptance.hpp"
#include "b0kit/families.hpp"
#include "b0kit/pcgroup.hpp"
#include "support.hpp"

using namespace b0kit;
using families::Family;

namespace {

Element word(const PcGroup& g, std::initializer_list<std::pair<int, int>> fs) {
  Exponents e(static_cast<std::size_t>(g.rank()), 0);
  for (auto [i, k] : fs) e[static_cast<std::size_t>(i - 1)] = k;
  return g.from_exponents(e);
}

Element random_element(const PcGroup& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> d(0, g.order() - 1);
  return g.element_at(d(rng));
}

std::vector<families::NamedGroup> test_groups() {
  std::vector<families::NamedGroup> out;
  for (int p : {3, 5, 7})
    for (const auto& s : families::members(p)) out.push_back({families::name(s), families::build(s)});
  for (auto& c : families::controls()) out.push_back(std::move(c));
  return out;
}

}  // namespace

TEST(Collect, FamilyExamples) {
  PcGroup g(test::family(Family::G2, 5, 0));
  EXPECT_EQ(g.collect({{1, 1}, {0, 1}}), word(g, {{1, 1}, {2, 1}, {3, 1}}));
  EXPECT_EQ(g.collect({}), g.identity());

  PcGroup h(test::family(Family::G243_28, 3));
  EXPECT_EQ(h.collect({{3, 2}, {0, 1}}), word(h, {{1, 1}, {4, 2}, {5, 2}}));
  // Negative exponents go through inverses.
  EXPECT_EQ(h.collect({{1, 1}, {1, -1}}), h.identity());
}

TEST(Collect, StepBudget) {
  // Moving g1^6 past g2^6 in Heisenberg(7) takes more than two steps.
  const auto p = families::heisenberg(7);
  Collector tight(p, nullptr, 2);
  EXPECT_THROW(tight.collect({{1, 6}, {0, 6}}), CollectionError);
  Collector loose(p);
  EXPECT_NO_THROW(loose.collect({{1, 6}, {0, 6}}));
}

TEST(Arithmetic, CommutatorConvention) {
  for (int p : {3, 5, 7})
    for (const auto& s : families::members(p)) {
      PcGroup g(families::build(s));
      const auto f = [&](int i) { return g.generator(i - 1); };
      EXPECT_EQ(g.commutator(f(2), f(1)), f(3)) << families::name(s);
      EXPECT_TRUE(g.is_identity(g.commutator(f(4), f(2))));
      EXPECT_TRUE(g.is_identity(g.commutator(f(4), f(3))));
      EXPECT_TRUE(g.is_identity(g.commutator(f(2), f(2))));
    }
}

TEST(Arithmetic, AssociativitySpotCheck) {
  auto rng = test::rng(10);
  for (const auto& [name, pres] : test_groups()) {
    PcGroup g(pres);
    for (int t = 0; t < 10000; ++t) {
      const auto a = random_element(g, rng);
      const auto b = random_element(g, rng);
      const auto c = random_element(g, rng);
      ASSERT_EQ(g.multiply(g.multiply(a, b), c), g.multiply(a, g.multiply(b, c))) << name;
    }
  }
}

TEST(Arithmetic, InversePowerConjugate) {
  auto rng = test::rng(11);
  for (const auto& [name, pres] : test_groups()) {
    PcGroup g(pres);
    for (int t = 0; t < 200; ++t) {
      const auto a = random_element(g, rng);
      const auto b = random_element(g, rng);
      EXPECT_TRUE(g.is_identity(g.multiply(a, g.inverse(a)))) << name;
      EXPECT_EQ(g.commutator(a, b), g.multiply(g.multiply(g.inverse(a), g.inverse(b)), g.multiply(a, b)));
      EXPECT_EQ(g.conjugate(a, b), g.multiply(g.inverse(b), g.multiply(a, b)));
      EXPECT_EQ(g.power(a, 3), g.multiply(a, g.multiply(a, a)));
      EXPECT_EQ(g.power(a, -1), g.inverse(a));
      const auto o = g.element_order(a);
      EXPECT_EQ(g.order() % o, 0u);
      EXPECT_TRUE(g.is_identity(g.power(a, static_cast<long long>(o))));
    }
  }
}

TEST(Arithmetic, ElementOrders) {
  PcGroup g(test::family(Family::G243_28, 3));
  EXPECT_EQ(g.element_order(g.identity()), 1u);
  EXPECT_EQ(g.element_order(g.generator(1)), 9u);
  EXPECT_EQ(exponent(g), 9u);
  for (int p : {5, 7}) {
    PcGroup h(test::family(Family::G2, p, 0));
    EXPECT_EQ(exponent(h), static_cast<std::uint64_t>(p * p));
    EXPECT_FALSE(h.is_identity(h.power(h.generator(0), p)));
  }
}

TEST(Enumeration, CountMatchesNominalOrder) {
  for (const auto& [name, pres] : test_groups()) {
    PcGroup g(pres);
    if (g.order() > 20000) continue;
    std::set<Element> seen;
    enumerate_elements(g, [&](const Element& e) { seen.insert(e); });
    EXPECT_EQ(seen.size(), pres.nominal_order()) << name;
    for (std::uint64_t i = 0; i < std::min<std::uint64_t>(g.order(), 500); ++i) EXPECT_EQ(g.index_of(g.element_at(i)), i);
  }
  PcGroup big(families::elementary_abelian(7, 9));
  EXPECT_THROW(enumerate_elements(big, [](const Element&) {}), BudgetError);
}

TEST(StepTwo, IdentitySuite) {
  for (int p : {3, 5, 7})
    for (const auto& s : families::members(p)) {
      const auto failures = acceptance::step2_failures(families::build(s), p);
      EXPECT_TRUE(failures.empty()) << families::name(s) << ": " << (failures.empty() ? "" : failures.front());
    }
}

TEST(StepTwo, DetectsWrongRelation) {
  // Changing [f4,f1] from f5 to f5^2 must break the first identity.
  auto p = test::family(Family::G2, 5, 0);
  Exponents c(5, 0);
  c[4] = 2;
  p.set_commutator(3, 0, c);
  EXPECT_FALSE(acceptance::step2_failures(p, 5).empty());
}

TEST(Consistency, Examples) {
  EXPECT_TRUE(is_consistent(test::family(Family::G2, 5, 0)));
  EXPECT_TRUE(is_consistent(families::cyclic(7)));
  const auto r = check_consistency(test::family(Family::G28_IMPOSTOR, 5));
  EXPECT_FALSE(r.consistent);
  ASSERT_FALSE(r.failures.empty());
  EXPECT_NE(r.failures.front().left, r.failures.front().right);
  for (const auto& s : families::degenerate_p3()) EXPECT_FALSE(is_consistent(families::build(s))) << families::name(s);
}

TEST(Consistency, OverlapCount) {
  // C(n,3) triples, C(n,2) power overlaps on each side, n self overlaps.
  EXPECT_EQ(overlaps(5).size(), 10u + 10u + 10u + 5u);
}

TEST(EnforcedQuotient, Collapses) {
  for (auto f : {Family::G28_IMPOSTOR, Family::G29_IMPOSTOR, Family::G30_IMPOSTOR}) {
    const auto q5 = enforced_quotient(test::family(f, 5));
    EXPECT_EQ(q5.order, 625u);
    EXPECT_TRUE(is_consistent(q5.presentation));
    const auto q7 = enforced_quotient(test::family(f, 7));
    EXPECT_EQ(q7.order, 2401u);
  }
  const auto fixed = test::family(Family::G1, 5);
  const auto q = enforced_quotient(fixed);
  EXPECT_EQ(q.presentation, fixed);
  EXPECT_EQ(q.order, 3125u);
  EXPECT_EQ(q.rounds, 0);
}

TEST(EnforcedQuotient, NonCentralFailure) {
  // <a, b | a^2 = b, b^3 = 1, b^a = b^2>: a commutes with a^2, so b = b^2,
  // and b is not central.
  PcPresentation p({2, 3});
  p.set_power(0, {0, 1});
  p.set_conjugate(1, 0, {0, 2});
  EXPECT_FALSE(is_consistent(p));
  EXPECT_THROW(enforced_quotient(p), NonCentralFailure);
}

TEST(Structure, FamilyInvariants) {
  for (int p : {3, 5, 7})
    for (const auto& s : families::members(p)) {
      PcGroup g(families::build(s));
      const auto pu = static_cast<std::uint64_t>(p);
      EXPECT_EQ(center(g).elements, terminal_segment(g, 4).elements) << families::name(s);
      EXPECT_EQ(center(g).order(), pu);
      EXPECT_EQ(derived_subgroup(g).elements, terminal_segment(g, 2).elements);
      EXPECT_EQ(abelianization(g.presentation()), (AbelianInvariants{{pu, pu}, 0}));
    }
}

TEST(Structure, QuotientByTail) {
  const auto g = test::family(Family::G2, 5, 0);
  PcGroup q(quotient_by_tail(g, 3));
  EXPECT_EQ(q.order(), 125u);
  EXPECT_EQ(exponent(q), 5u);
  EXPECT_FALSE(q.is_identity(q.commutator(q.generator(1), q.generator(0))));

  PcGroup ab(quotient_by_tail(test::family(Family::G243_28, 3), 2));
  EXPECT_EQ(abelianization(ab.presentation()), (AbelianInvariants{{3, 3}, 0}));
  EXPECT_EQ(ab.order(), 9u);
  EXPECT_EQ(quotient_by_tail(g, 0).rank(), 0);
  EXPECT_THROW(quotient_by_tail(g, 6), std::out_of_range);
}

TEST(Structure, DirectProduct) {
  const auto c6 = direct_product(families::cyclic(2), families::cyclic(3));
  PcGroup g(c6);
  EXPECT_EQ(g.order(), 6u);
  EXPECT_EQ(center(g).order(), 6u);

  PcGroup h(direct_product(test::family(Family::G2, 5, 0), families::cyclic(2)));
  EXPECT_EQ(h.order(), 6250u);
  EXPECT_EQ(center(h).order(), 10u);

  const auto p = test::family(Family::G1, 5);
  EXPECT_EQ(direct_product(p, PcPresentation({})), p);
}

TEST(TextFormat, RoundTrip) {
  for (const auto& [name, pres] : test_groups()) {
    const auto text = to_text(pres);
    EXPECT_EQ(parse_presentation(text), pres) << name;
    EXPECT_EQ(fingerprint(parse_presentation(text)), fingerprint(pres));
  }
}

TEST(TextFormat, NegativeExponentsAndComments) {
  const auto p = parse_presentation(
      "# C9 on two generators of relative order 3\n"
      "pcgroup 2\n"
      "order 1 3\n"
      "order 2 3\n"
      "power 1 = g2^-1\n");
  EXPECT_EQ(p.power(0), (Exponents{0, 2}));
  EXPECT_EQ(PcGroup(p).element_order(PcGroup(p).generator(0)), 9u);
}

TEST(TextFormat, Rejections) {
  EXPECT_THROW(parse_presentation("pcgroup 2\norder 1 3\n"), PresentationError);  // missing order line
  EXPECT_THROW(parse_presentation("pcgroup 1\norder 1 1\n"), PresentationError);  // order < 2
  EXPECT_THROW(parse_presentation("pcgroup 2\norder 1 3\norder 2 3\npower 2 = g1\n"), PresentationError);
  EXPECT_THROW(parse_presentation("pcgroup 3\norder 1 3\norder 2 3\norder 3 3\nconj 3 ^ 1 = g3*g2\n"), PresentationError);
  EXPECT_THROW(parse_presentation("pcgroup 2\norder 1 3\norder 2 3\npower 1 = g2^3\n"), PresentationError);
  EXPECT_THROW(parse_presentation("pcgroup 2\norder 1 3\norder 2 3\nconj 1 ^ 2 = g2\n"), PresentationError);
  EXPECT_THROW(parse_presentation("pcgroup 2\norder 1 3\norder 2 3\nfrobnicate\n"), PresentationError);
}

TEST(Fingerprint, DistinguishesMembers) {
  std::set<std::string> prints;
  for (int p : {5, 7})
    for (const auto& s : families::members(p)) prints.insert(fingerprint(families::build(s)));
  EXPECT_EQ(prints.size(), 12u);
}
