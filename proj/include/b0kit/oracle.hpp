#pragma once

// Brute-force cohomology of small groups from explicit normalized 2-cocycles:
// H^2(G, Z/n), H^2(G, Q/Z) and B0(G) as the classes whose restriction to
// every bicyclic subgroup vanishes.
//
// A normalized cocycle is determined by its values f(a, s) for a in G and s
// in a generating set S. Along a breadth-first spanning tree of the Cayley
// graph (right multiplication by S) a coboundary moves every tree-edge value
// to zero, so cocycles are parametrised by the non-tree edges; the cocycle
// identity only has to be imposed with the last argument in S.

#include <cstdint>
#include <vector>

#include "b0kit/howell.hpp"
#include "b0kit/linalg.hpp"
#include "b0kit/pcgroup.hpp"

namespace b0kit::oracle {

inline constexpr std::uint64_t kDefaultOracleBound = 128;
inline constexpr std::uint64_t kSlowOracleBound = 243;

class MulTable {
 public:
  /// Dense table by collection; associativity is verified. Throws
  /// BudgetError above `bound`.
  explicit MulTable(const PcGroup& g, std::uint64_t bound = kDefaultOracleBound);
  /// From an explicit table (row-major, identity at index 0).
  explicit MulTable(std::vector<std::uint32_t> table, std::size_t order);

  std::size_t order() const noexcept { return m_; }
  std::uint32_t identity() const noexcept { return 0; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept { return t_[a * m_ + b]; }
  std::uint32_t inverse(std::uint32_t a) const noexcept { return inv_[a]; }
  bool commute(std::uint32_t a, std::uint32_t b) const noexcept { return mul(a, b) == mul(b, a); }

 private:
  void finish();

  std::size_t m_ = 0;
  std::vector<std::uint32_t> t_;
  std::vector<std::uint32_t> inv_;
};

/// Quotient of a finite Z/n-module span(basis) by span(sub), with one
/// representative per invariant factor.
struct QuotientWithReps {
  AbelianInvariants invariants;
  std::vector<std::uint64_t> orders;  // order of each representative
  std::vector<std::vector<std::uint64_t>> representatives;  // rows in ambient coordinates
};

QuotientWithReps quotient_with_representatives(const linalg::ModMatrix& basis, const linalg::ModMatrix& sub);

class Cohomology {
 public:
  /// Solves the cocycle system of G with coefficients Z/n (n = |G| when 0).
  explicit Cohomology(const MulTable& t, std::uint64_t n = 0);

  std::uint64_t modulus() const noexcept { return n_; }
  const std::vector<std::uint32_t>& generators() const noexcept { return gens_; }
  std::size_t unknowns() const noexcept { return unknowns_; }

  /// H^2(G, Z/n) with representatives (gauge-fixed coordinates).
  const QuotientWithReps& h2_mod_n() const noexcept { return h2n_; }
  /// H^2(G, Q/Z) as a quotient of H^2(G, Z/n) by the connecting image;
  /// empty unless |G| divides n.
  const QuotientWithReps& h2_qz() const noexcept { return h2q_; }
  std::uint64_t hom_order() const noexcept { return hom_order_; }
  std::uint64_t cocycle_count() const noexcept { return cocycle_count_; }
  std::uint64_t coboundary_count() const noexcept { return coboundary_count_; }
  /// n^|S| = |coboundaries of tree-additive cochains| * |Hom(G, Z/n)|.
  bool coboundary_count_consistent() const;

  /// Full normalized cocycle table f(x, y) (row-major) from gauge-fixed
  /// coordinates.
  std::vector<std::uint64_t> expand(const std::vector<std::uint64_t>& coords) const;
  /// f(a, b) from gauge-fixed coordinates.
  std::uint64_t value(const std::vector<std::uint64_t>& coords, std::uint32_t a, std::uint32_t b) const;

  /// Subgroup (of the lambda-space over the H^2(G,Q/Z) representatives,
  /// as a Howell basis over Z/n) of classes whose restriction to <x, y>
  /// vanishes in H^2(<x,y>, Q/Z). x and y must commute; |G| must divide n.
  linalg::ModMatrix restriction_kernel(std::uint32_t x, std::uint32_t y) const;

  /// B0(G) = intersection of restriction kernels over all bicyclic
  /// subgroups. `subgroups_seen` reports how many distinct ones were used.
  AbelianInvariants b0(std::size_t* subgroups_seen = nullptr) const;

 private:
  std::vector<std::pair<std::uint32_t, std::uint32_t>> path(std::uint32_t y) const;
  long long column(std::uint32_t a, std::size_t s) const { return col_[a * gens_.size() + s]; }
  std::vector<std::uint64_t> gauge_fixed(const std::vector<std::int64_t>& table) const;

  const MulTable* t_;
  std::uint64_t n_;
  std::vector<std::uint32_t> gens_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> parent_gen_;  // index into gens_
  std::vector<std::uint32_t> bfs_order_;
  std::vector<long long> col_;  // (a, s) -> unknown column or -1 on tree edges
  std::size_t unknowns_ = 0;
  linalg::ModMatrix cocycles_{0, 0, 2};  // Howell basis of gauge-fixed cocycles
  QuotientWithReps h2n_;
  QuotientWithReps h2q_;
  std::uint64_t hom_order_ = 1;
  std::uint64_t cocycle_count_ = 1;
  std::uint64_t coboundary_count_ = 1;
};

/// H^2(G, Z/n) with one full normalized cocycle table f(x, y) (row-major,
/// m x m) per invariant factor.
struct CocycleSpace {
  std::uint64_t modulus = 2;
  std::size_t order = 0;  // |G|
  AbelianInvariants invariants;
  std::vector<std::vector<std::uint64_t>> basis;
};

/// Checks f(x,y) + f(xy,z) = f(y,z) + f(x,yz) and normalization.
bool is_normalized_cocycle(const MulTable& t, const std::vector<std::uint64_t>& f, std::uint64_t n);

CocycleSpace h2_mod_n(const MulTable& t, std::uint64_t n);
AbelianInvariants h2_qz(const MulTable& t);
AbelianInvariants b0_direct(const MulTable& t);

}  // namespace b0kit::oracle
