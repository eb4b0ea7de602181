#include <map>
#include <span>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "b0kit/howell.hpp"
#include "b0kit/linalg.hpp"
#include "support.hpp"

using namespace b0kit;
using namespace b0kit::linalg;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

/// Random unimodular matrix as a product of elementary operations.
IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n) {
  auto u = IntMatrix::identity(n);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<int> f(-3, 3);
  for (int step = 0; step < 12; ++step) {
    const auto a = pick(rng);
    const auto b = pick(rng);
    if (a == b) u.swap_rows(a, (a + 1) % n);
    else u.add_row_multiple(a, b, f(rng));
  }
  return u;
}

/// Elements of the row span over Z/n by exhaustive combination.
std::set<std::vector<std::uint64_t>> brute_span(const ModMatrix& a) {
  std::set<std::vector<std::uint64_t>> span{std::vector<std::uint64_t>(a.cols(), 0)};
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto next = span;
    for (const auto& v : span) {
      auto w = v;
      for (std::uint64_t k = 1; k < a.modulus(); ++k) {
        for (std::size_t c = 0; c < a.cols(); ++c) w[c] = (w[c] + a(r, c)) % a.modulus();
        next.insert(w);
      }
    }
    span = std::move(next);
  }
  return span;
}

}  // namespace

TEST(AbelianInvariants, Printing) {
  EXPECT_EQ(AbelianInvariants{}.to_string(), "1");
  EXPECT_EQ((AbelianInvariants{{3, 3}, 0}.to_string()), "C3 x C3");
  EXPECT_EQ((AbelianInvariants{{2, 6}, 0}.order()), 12u);
  EXPECT_THROW((AbelianInvariants{{4, 6}, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((AbelianInvariants{{}, 1}.order()), std::domain_error);
}

TEST(AbelianInvariants, FromCyclicOrders) {
  const std::vector<std::uint64_t> orders{4, 6, 1};
  EXPECT_EQ(invariants_from_cyclic_orders(orders), (AbelianInvariants{{2, 12}, 0}));
  const std::vector<std::uint64_t> with_free{0, 3};
  EXPECT_EQ(invariants_from_cyclic_orders(with_free), (AbelianInvariants{{3}, 1}));
}

TEST(Smith, KnownExamples) {
  EXPECT_EQ(cokernel_invariants(IntMatrix::from_rows({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}, 3)),
            (AbelianInvariants{{2, 6, 12}, 0}));
  EXPECT_EQ(cokernel_invariants(IntMatrix::from_rows({{2, 0}, {0, 3}}, 2)), (AbelianInvariants{{6}, 0}));
  EXPECT_EQ(cokernel_invariants(IntMatrix::from_rows({{3, 0, 0}}, 3)), (AbelianInvariants{{3}, 2}));
  EXPECT_EQ(cokernel_invariants(IntMatrix(0, 2)), (AbelianInvariants{{}, 2}));
}

TEST(Smith, Decomposition) {
  auto rng = test::rng(1);
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = random_matrix(rng, 1 + trial % 5, 1 + (trial / 5) % 5, -9, 9);
    const auto s = smith_normal_form(a);
    EXPECT_EQ(s.left * a * s.right, s.diagonal);
    EXPECT_TRUE(s.diagonal.is_diagonal());
    EXPECT_EQ(s.right * s.right_inverse, IntMatrix::identity(a.cols()));
    const auto d = s.invariant_factors();
    for (std::size_t i = 0; i + 1 < d.size(); ++i) EXPECT_EQ(d[i + 1] % d[i], 0);
    EXPECT_EQ(abs(s.left.determinant()), 1);
  }
}

TEST(Smith, CokernelInvariantUnderUnimodularChange) {
  auto rng = test::rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = random_matrix(rng, 4, 4, -6, 6);
    const auto b = random_unimodular(rng, 4) * a * random_unimodular(rng, 4);
    EXPECT_EQ(cokernel_invariants(a), cokernel_invariants(b));
  }
}

TEST(Hermite, ShapeAndSpan) {
  auto rng = test::rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_matrix(rng, 5, 3, -5, 5);
    const auto h = hermite_normal_form(a);
    std::size_t lead = 0;
    for (std::size_t r = 0; r < h.rows(); ++r) {
      while (lead < h.cols() && h(r, lead) == 0) ++lead;
      ASSERT_LT(lead, h.cols());
      EXPECT_GT(h(r, lead), 0);
      for (std::size_t above = 0; above < r; ++above) {
        EXPECT_GE(h(above, lead), 0);
        EXPECT_LT(h(above, lead), h(r, lead));
      }
      ++lead;
    }
    EXPECT_EQ(cokernel_invariants(a), cokernel_invariants(h));
    EXPECT_EQ(hermite_normal_form(random_unimodular(rng, 5) * a), h);
  }
}

TEST(LeftKernel, AnnihilatesAndSpans) {
  const auto a = IntMatrix::from_rows({{1, 2}, {2, 4}, {3, 7}}, 2);
  const auto k = left_kernel(a);
  ASSERT_EQ(k.rows(), 1u);
  const auto z = k * a;
  for (std::size_t c = 0; c < 2; ++c) EXPECT_EQ(z(0, c), 0);
}

TEST(TorsionCoordinates, CanonicalAndEncoded) {
  // Z^3 / <(2,0,0), (0,3,3)>: torsion C6, free rank 1.
  const auto lattice = IntMatrix::from_rows({{2, 0, 0}, {0, 3, 3}}, 3);
  TorsionCoordinates tc(lattice, 3);
  EXPECT_EQ(tc.invariants(), (AbelianInvariants{{6}, 1}));
  const std::vector<std::int64_t> v{0, 1, 0};  // not torsion
  std::vector<std::uint64_t> out;
  EXPECT_FALSE(tc.coordinates(v, out));
  const std::vector<std::int64_t> t1{1, 0, 0};
  const std::vector<std::int64_t> t2{0, 1, 2};
  ASSERT_TRUE(tc.coordinates(t1, out));
  const auto c1 = out;
  const std::vector<std::int64_t> t1_shift{-1, 3, 3};  // t1 - (2,0,0) + (0,3,3)
  ASSERT_TRUE(tc.coordinates(t1_shift, out));
  EXPECT_EQ(out, c1);
  EXPECT_FALSE(tc.coordinates(t2, out));
  EXPECT_EQ(tc.decode(tc.encode(c1)), c1);
}

TEST(QuotientInvariants, SmallCases) {
  const std::vector<std::uint64_t> moduli{3, 9};
  EXPECT_EQ(quotient_invariants(moduli, {}), (AbelianInvariants{{3, 9}, 0}));
  EXPECT_EQ(quotient_invariants(moduli, {{1, 0}}), (AbelianInvariants{{9}, 0}));
  EXPECT_EQ(quotient_invariants(moduli, {{0, 3}}), (AbelianInvariants{{3, 3}, 0}));
  EXPECT_EQ(subgroup_invariants(moduli, {{0, 3}}), (AbelianInvariants{{3}, 0}));
  EXPECT_EQ(subgroup_invariants(moduli, {{1, 1}}), (AbelianInvariants{{9}, 0}));
}

TEST(QuotientOrderRatio, ExtraRows) {
  const auto lattice = IntMatrix::from_rows({{4, 0}, {0, 6}}, 2);
  const auto r = quotient_order_ratio(lattice, IntMatrix::from_rows({{2, 0}}, 2));
  EXPECT_EQ(r.ratio, 2u);
  EXPECT_THROW(quotient_order_ratio(IntMatrix::from_rows({{4, 0}}, 2), IntMatrix::from_rows({{0, 1}}, 2)),
               std::logic_error);
}

TEST(MatrixIo, RoundTrip) {
  auto rng = test::rng(4);
  const auto a = random_matrix(rng, 3, 4, -100, 100);
  std::stringstream s;
  write_matrix(s, a);
  EXPECT_EQ(read_matrix(s), a);
}

TEST(Howell, SpanOrderMatchesEnumeration) {
  auto rng = test::rng(5);
  for (std::uint64_t n : {4u, 6u, 8u, 9u, 12u}) {
    std::uniform_int_distribution<std::uint64_t> d(0, n - 1);
    for (int trial = 0; trial < 8; ++trial) {
      ModMatrix a(3, 3, n);
      for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) a(r, c) = d(rng);
      EXPECT_EQ(span_order(a), brute_span(a).size()) << "n=" << n;
    }
  }
}

TEST(Howell, CanonicalForm) {
  auto rng = test::rng(6);
  for (std::uint64_t n : {6u, 8u, 12u, 27u}) {
    std::uniform_int_distribution<std::uint64_t> d(0, n - 1);
    for (int trial = 0; trial < 10; ++trial) {
      ModMatrix a(4, 4, n);
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) a(r, c) = d(rng);
      // Same span: add random combinations of rows, shuffle.
      ModMatrix b(0, 4, n);
      for (int extra = 0; extra < 6; ++extra) {
        std::vector<std::uint64_t> row(4, 0);
        for (std::size_t r = 0; r < 4; ++r) {
          const auto k = d(rng);
          for (std::size_t c = 0; c < 4; ++c) row[c] = (row[c] + k * a(r, c)) % n;
        }
        b.append_row(row);
      }
      for (std::size_t r = 0; r < 4; ++r) b.append_row(a.row(r));
      EXPECT_EQ(howell_form(a), howell_form(b));
      EXPECT_EQ(howell_form(howell_form(a)), howell_form(a));
    }
  }
}

TEST(Howell, KernelsAndSolve) {
  auto rng = test::rng(7);
  const std::uint64_t n = 12;
  std::uniform_int_distribution<std::uint64_t> d(0, n - 1);
  for (int trial = 0; trial < 10; ++trial) {
    ModMatrix a(3, 4, n);
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 4; ++c) a(r, c) = d(rng);
    const auto k = howell_kernel(a);
    for (std::size_t r = 0; r < k.rows(); ++r)
      for (std::size_t i = 0; i < 3; ++i) {
        std::uint64_t s = 0;
        for (std::size_t c = 0; c < 4; ++c) s += a(i, c) * k(r, c);
        EXPECT_EQ(s % n, 0u);
      }
    // |ker| * |image| = n^cols
    const mpz_class total = span_order(a.transposed()) * howell_span_order(k);
    EXPECT_EQ(total, 12 * 12 * 12 * 12);

    const auto lk = howell_left_kernel(a);
    for (std::size_t r = 0; r < lk.rows(); ++r)
      for (std::size_t c = 0; c < 4; ++c) {
        std::uint64_t s = 0;
        for (std::size_t i = 0; i < 3; ++i) s += lk(r, i) * a(i, c);
        EXPECT_EQ(s % n, 0u);
      }

    std::vector<std::uint64_t> x(4);
    for (auto& v : x) v = d(rng);
    std::vector<std::uint64_t> b(3, 0);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t c = 0; c < 4; ++c) b[i] = (b[i] + a(i, c) * x[c]) % n;
    const auto sol = howell_solve(a, b);
    ASSERT_TRUE(sol.solvable);
    for (std::size_t i = 0; i < 3; ++i) {
      std::uint64_t s = 0;
      for (std::size_t c = 0; c < 4; ++c) s += a(i, c) * sol.particular[c];
      EXPECT_EQ(s % n, b[i]);
    }
  }
  ModMatrix z(1, 1, 4);
  z(0, 0) = 2;
  const std::vector<std::uint64_t> odd{1};
  EXPECT_FALSE(howell_solve(z, odd).solvable);
}

TEST(Howell, ContainsAndAccumulator) {
  auto rng = test::rng(8);
  const std::uint64_t n = 9;
  std::uniform_int_distribution<std::uint64_t> d(0, n - 1);
  ModMatrix all(0, 5, n);
  HowellAccumulator acc(5, n, 3);
  for (int r = 0; r < 11; ++r) {
    std::vector<std::uint64_t> row(5);
    for (auto& v : row) v = d(rng) * 3 % n;
    all.append_row(row);
    acc.add_row(row);
  }
  const auto h = acc.finish();
  EXPECT_EQ(h, howell_form(all));
  for (std::size_t r = 0; r < all.rows(); ++r) EXPECT_TRUE(howell_contains(h, all.row(r)));
  const std::vector<std::uint64_t> unit{1, 0, 0, 0, 0};
  EXPECT_FALSE(howell_contains(h, unit));
}

TEST(Smith, SmallDiagonals) {
  EXPECT_EQ(smith_normal_form(IntMatrix::identity(3)).invariant_factors(), (std::vector<mpz_class>{1, 1, 1}));
  EXPECT_EQ(smith_normal_form(IntMatrix::from_rows({{0, 1}, {1, 0}}, 2)).invariant_factors(), (std::vector<mpz_class>{1, 1}));
  EXPECT_EQ(smith_normal_form(IntMatrix::from_rows({{2, 0}, {0, 3}}, 2)).invariant_factors(), (std::vector<mpz_class>{1, 6}));
  EXPECT_EQ(cokernel_invariants(IntMatrix::from_rows({{5, 0}, {0, 5}}, 2)), (AbelianInvariants{{5, 5}, 0}));
  EXPECT_EQ(cokernel_invariants(IntMatrix::from_rows({{2, 4}, {0, 6}}, 2)), (AbelianInvariants{{2, 6}, 0}));
}

TEST(QuotientOrderRatio, SmallCases) {
  const auto pp = IntMatrix::from_rows({{5, 0}, {0, 5}}, 2);
  EXPECT_EQ(quotient_order_ratio(pp, IntMatrix(0, 2)).ratio, 1u);
  const auto r = quotient_order_ratio(pp, IntMatrix::from_rows({{1, 0}}, 2));
  EXPECT_EQ(r.ratio, 5u);
  EXPECT_EQ(r.quotient, (AbelianInvariants{{5}, 0}));
  EXPECT_EQ(quotient_order_ratio(IntMatrix::from_rows({{4, 0}, {0, 2}}, 2), IntMatrix::from_rows({{2, 0}}, 2)).ratio, 2u);
}

TEST(Howell, SmallKernels) {
  ModMatrix two(1, 1, 4);
  two(0, 0) = 2;
  const auto k = howell_kernel(two);
  EXPECT_EQ(howell_span_order(k), 2);
  EXPECT_TRUE(howell_contains(k, std::vector<std::uint64_t>{2}));

  ModMatrix id(3, 3, 7);
  for (std::size_t i = 0; i < 3; ++i) id(i, i) = 1;
  EXPECT_EQ(howell_span_order(howell_kernel(id)), 1);
}

TEST(Howell, LargeRandomKernel) {
  auto rng = test::rng(9);
  const std::uint64_t n = 9;
  std::uniform_int_distribution<std::uint64_t> d(0, n - 1);
  ModMatrix a(20, 30, n);
  for (std::size_t r = 0; r < 20; ++r)
    for (std::size_t c = 0; c < 30; ++c) a(r, c) = d(rng);
  const auto k = howell_kernel(a);
  auto annihilated = [&](std::span<const std::uint64_t> x) {
    for (std::size_t i = 0; i < 20; ++i) {
      std::uint64_t s = 0;
      for (std::size_t c = 0; c < 30; ++c) s += a(i, c) * x[c];
      if (s % n) return false;
    }
    return true;
  };
  for (std::size_t r = 0; r < k.rows(); ++r) EXPECT_TRUE(annihilated(k.row(r)));
  // Random combinations of the kernel generators stay in the kernel.
  for (int t = 0; t < 50; ++t) {
    std::vector<std::uint64_t> x(30, 0);
    for (std::size_t r = 0; r < k.rows(); ++r) {
      const auto m = d(rng);
      for (std::size_t c = 0; c < 30; ++c) x[c] = (x[c] + m * k(r, c)) % n;
    }
    EXPECT_TRUE(annihilated(x));
    EXPECT_TRUE(howell_contains(k, x));
  }
  mpz_class total;
  mpz_ui_pow_ui(total.get_mpz_t(), n, 30);
  EXPECT_EQ(span_order(a.transposed()) * howell_span_order(k), total);
}
