#pragma once

// Table-driven group kernels. Elements are addressed by their mixed-radix
// index; right multiplication by a pc generator, inversion and conjugation
// by generators are precomputed once (in parallel), after which products,
// commutation tests and cover lifts are table walks. The serial collection
// path in b0kit::reference computes the same quantities for testing.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "b0kit/homology.hpp"
#include "b0kit/pcgroup.hpp"

namespace b0kit::kernels {

using Index = std::uint32_t;

inline constexpr std::uint64_t kDefaultTableBudget = 4'000'000;

int thread_count();
/// k <= 0 leaves the OpenMP default in place.
void set_thread_count(int k);

class GroupTables {
 public:
  explicit GroupTables(const PcGroup& g, std::uint64_t max_order = kDefaultTableBudget);

  const PcGroup& group() const noexcept { return *g_; }
  std::uint64_t order() const noexcept { return order_; }
  int rank() const noexcept { return n_; }

  Index identity() const noexcept { return 0; }
  Index generator(int k) const noexcept { return generators_[static_cast<std::size_t>(k)]; }
  /// x * g_k
  Index step(Index x, int k) const noexcept { return right_[static_cast<std::size_t>(x) * nn_ + static_cast<std::size_t>(k)]; }
  /// g_k^{-1} x g_k
  Index conjugate_by_generator(Index x, int k) const noexcept {
    return conj_[static_cast<std::size_t>(x) * nn_ + static_cast<std::size_t>(k)];
  }
  Index inverse(Index x) const noexcept { return inverse_[x]; }
  std::span<const std::uint8_t> exponents(Index x) const noexcept {
    return {exps_.data() + static_cast<std::size_t>(x) * nn_, nn_};
  }

  Index multiply(Index x, Index y) const noexcept {
    const auto e = exponents(y);
    for (std::size_t l = 0; l < nn_; ++l)
      for (int r = 0; r < e[l]; ++r) x = step(x, static_cast<int>(l));
    return x;
  }
  bool commute(Index x, Index y) const noexcept { return multiply(x, y) == multiply(y, x); }
  /// y^{-1} x y
  Index conjugate(Index x, Index y) const noexcept { return multiply(inverse(y), multiply(x, y)); }
  std::uint64_t element_order(Index x) const noexcept;

  Element element(Index x) const;
  Index index(const Element& e) const;

 private:
  const PcGroup* g_;
  int n_;
  std::size_t nn_;
  std::uint64_t order_;
  std::vector<Index> generators_;
  std::vector<Index> right_;
  std::vector<Index> conj_;
  std::vector<Index> inverse_;
  std::vector<std::uint8_t> exps_;
};

/// Tail increments c(x, k) with lift(x) g_k = lift(x g_k) t^{c(x,k)} in the
/// cover, where lift() is the normal word with zero tails.
class CoverTables {
 public:
  CoverTables(const GroupTables& t, const homology::Cover& cover);

  int tail_count() const noexcept { return m_; }
  const homology::Cover& cover() const noexcept { return *cover_; }

  /// Adds the tails of lift(x) lift(y) to acc and returns x y.
  Index lifted_product(Index x, Index y, std::int64_t* acc) const noexcept;
  /// Tails of [x~, y~] for commuting x, y; returns false when they do not
  /// commute (out is then unspecified).
  bool commutator_lift(Index x, Index y, std::vector<std::int64_t>& out) const;

 private:
  const GroupTables* t_;
  const homology::Cover* cover_;
  int m_;
  std::vector<std::int32_t> incr_;  // order x n x m
};

// ---- Classes, centralizers and pair enumeration ----------------------------

struct ConjugacyClasses {
  std::vector<Index> representatives;  // smallest index of each class
  std::vector<std::uint32_t> class_of;  // per element
  std::vector<std::uint64_t> sizes;     // per class
};

ConjugacyClasses conjugacy_classes(const GroupTables& t);

/// Elements commuting with x, in increasing order.
std::vector<Index> centralizer(const GroupTables& t, Index x);

std::vector<Index> center(const GroupTables& t);
/// Closure of `gens` under multiplication; sorted.
std::vector<Index> generate(const GroupTables& t, std::span<const Index> gens);
/// Normal closure of the generator commutators; sorted.
std::vector<Index> derived_subgroup(const GroupTables& t);
std::uint64_t exponent(const GroupTables& t);

enum class PairStrategy { Full, ConjReduced };

const char* to_string(PairStrategy s);
PairStrategy parse_strategy(const std::string& s);

/// Outer elements of the pair scan: all of G, or one per conjugacy class.
std::vector<Index> outer_elements(const GroupTables& t, PairStrategy s);

/// Number of commuting pairs the strategy visits.
std::uint64_t commuting_pair_count(const GroupTables& t, PairStrategy s);

}  // namespace b0kit::kernels
