#include "b0kit/kernels.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <stdexcept>

#include <omp.h>

namespace b0kit::kernels {

int thread_count() { return omp_get_max_threads(); }

void set_thread_count(int k) {
  if (k > 0) omp_set_num_threads(k);
}

GroupTables::GroupTables(const PcGroup& g, std::uint64_t max_order)
    : g_(&g), n_(g.rank()), nn_(static_cast<std::size_t>(g.rank())), order_(g.order()) {
  if (order_ > max_order || order_ > 0xffffffffULL)
    throw BudgetError("group of order " + std::to_string(order_) + " exceeds the table budget of " +
                      std::to_string(max_order));
  for (int o : g.presentation().relative_orders())
    if (o > 255) throw std::invalid_argument("tables need relative orders below 256");

  const auto& orders = g.presentation().relative_orders();
  right_.resize(order_ * nn_);
  conj_.resize(order_ * nn_);
  inverse_.resize(order_);
  exps_.resize(order_ * nn_);
  for (int k = 0; k < n_; ++k) generators_.push_back(static_cast<Index>(g.index_of(g.generator(k))));

  std::vector<Element> gen_inv;
  for (int k = 0; k < n_; ++k) gen_inv.push_back(g.inverse(g.generator(k)));

  const auto total = static_cast<long long>(order_);
  std::exception_ptr error;
#pragma omp parallel
  {
    Element x;
#pragma omp for schedule(static)
    for (long long i = 0; i < total; ++i) try {
      const auto idx = static_cast<std::uint64_t>(i);
      exponents_at(orders, idx, x.exponents);
      for (std::size_t l = 0; l < nn_; ++l) exps_[idx * nn_ + l] = static_cast<std::uint8_t>(x.exponents[l]);
      for (int k = 0; k < n_; ++k) {
        const Element gk = g.generator(k);
        const Element xg = g.multiply(x, gk);
        right_[idx * nn_ + static_cast<std::size_t>(k)] = static_cast<Index>(g.index_of(xg));
        conj_[idx * nn_ + static_cast<std::size_t>(k)] =
            static_cast<Index>(g.index_of(g.multiply(gen_inv[static_cast<std::size_t>(k)], xg)));
      }
      inverse_[idx] = static_cast<Index>(g.index_of(g.inverse(x)));
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

std::uint64_t GroupTables::element_order(Index x) const noexcept {
  std::uint64_t k = 1;
  Index y = x;
  while (y != 0) {
    y = multiply(y, x);
    ++k;
  }
  return k;
}

Element GroupTables::element(Index x) const { return g_->element_at(x); }

Index GroupTables::index(const Element& e) const { return static_cast<Index>(g_->index_of(e)); }

// ---- Cover tables ------------------------------------------------------------

CoverTables::CoverTables(const GroupTables& t, const homology::Cover& cover)
    : t_(&t), cover_(&cover), m_(cover.presentation().tail_count()) {
  if (!(cover.base() == t.group().presentation()))
    throw std::invalid_argument("cover and tables describe different presentations");
  const auto n = static_cast<std::size_t>(t.rank());
  const auto m = static_cast<std::size_t>(m_);
  incr_.assign(t.order() * n * m, 0);
  const auto& orders = t.group().presentation().relative_orders();
  const auto& col = cover.collector();
  const auto total = static_cast<long long>(t.order());
  std::exception_ptr error;
#pragma omp parallel
  {
    Exponents e;
#pragma omp for schedule(static)
    for (long long i = 0; i < total; ++i) try {
      const auto idx = static_cast<std::uint64_t>(i);
      exponents_at(orders, idx, e);
      for (std::size_t k = 0; k < n; ++k) {
        auto w = col.lift(e);
        col.multiply_generator(w, static_cast<int>(k));
        auto* dst = &incr_[(idx * n + k) * m];
        for (std::size_t s = 0; s < m; ++s) {
          if (w.tails[s] > INT32_MAX || w.tails[s] < INT32_MIN) throw std::overflow_error("tail increment overflow");
          dst[s] = static_cast<std::int32_t>(w.tails[s]);
        }
      }
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

Index CoverTables::lifted_product(Index x, Index y, std::int64_t* acc) const noexcept {
  const auto n = static_cast<std::size_t>(t_->rank());
  const auto m = static_cast<std::size_t>(m_);
  const auto e = t_->exponents(y);
  for (std::size_t l = 0; l < n; ++l)
    for (int r = 0; r < e[l]; ++r) {
      const auto* inc = &incr_[(static_cast<std::size_t>(x) * n + l) * m];
      for (std::size_t s = 0; s < m; ++s) acc[s] += inc[s];
      x = t_->step(x, static_cast<int>(l));
    }
  return x;
}

bool CoverTables::commutator_lift(Index x, Index y, std::vector<std::int64_t>& out) const {
  const auto m = static_cast<std::size_t>(m_);
  out.assign(m, 0);
  std::vector<std::int64_t> other(m, 0);
  const Index xy = lifted_product(x, y, out.data());
  const Index yx = lifted_product(y, x, other.data());
  if (xy != yx) return false;
  for (std::size_t s = 0; s < m; ++s) out[s] -= other[s];
  return true;
}

// ---- Classes -----------------------------------------------------------------

ConjugacyClasses conjugacy_classes(const GroupTables& t) {
  ConjugacyClasses c;
  const auto order = t.order();
  constexpr auto unset = static_cast<std::uint32_t>(-1);
  c.class_of.assign(order, unset);
  std::vector<Index> queue;
  for (Index x = 0; x < order; ++x) {
    if (c.class_of[x] != unset) continue;
    const auto id = static_cast<std::uint32_t>(c.representatives.size());
    c.representatives.push_back(x);
    queue.assign(1, x);
    c.class_of[x] = id;
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (int k = 0; k < t.rank(); ++k) {
        const Index y = t.conjugate_by_generator(queue[q], k);
        if (c.class_of[y] == unset) {
          c.class_of[y] = id;
          queue.push_back(y);
        }
      }
    c.sizes.push_back(queue.size());
  }
  return c;
}

std::vector<Index> centralizer(const GroupTables& t, Index x) {
  std::vector<Index> out;
  for (Index y = 0; y < t.order(); ++y)
    if (t.commute(x, y)) out.push_back(y);
  return out;
}

std::vector<Index> center(const GroupTables& t) {
  std::vector<Index> out;
  for (Index x = 0; x < t.order(); ++x) {
    bool central = true;
    for (int k = 0; k < t.rank() && central; ++k) central = t.conjugate_by_generator(x, k) == x;
    if (central) out.push_back(x);
  }
  return out;
}

std::vector<Index> generate(const GroupTables& t, std::span<const Index> gens) {
  std::vector<char> seen(t.order(), 0);
  std::vector<Index> out{0};
  seen[0] = 1;
  for (std::size_t q = 0; q < out.size(); ++q)
    for (Index s : gens) {
      const Index y = t.multiply(out[q], s);
      if (!seen[y]) {
        seen[y] = 1;
        out.push_back(y);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Index> derived_subgroup(const GroupTables& t) {
  std::vector<Index> gens;
  for (int i = 0; i < t.rank(); ++i)
    for (int j = i + 1; j < t.rank(); ++j) {
      const Index a = t.generator(j), b = t.generator(i);
      const Index c = t.multiply(t.inverse(t.multiply(b, a)), t.multiply(a, b));
      if (c != 0) gens.push_back(c);
    }
  for (;;) {
    auto h = generate(t, gens);
    bool normal = true;
    for (Index x : std::vector<Index>(gens))
      for (int k = 0; k < t.rank(); ++k) {
        const Index y = t.conjugate_by_generator(x, k);
        if (!std::binary_search(h.begin(), h.end(), y)) {
          gens.push_back(y);
          normal = false;
        }
      }
    if (normal) return h;
  }
}

std::uint64_t exponent(const GroupTables& t) {
  std::uint64_t e = 1;
  const auto total = static_cast<long long>(t.order());
#pragma omp parallel
  {
    std::uint64_t local = 1;
#pragma omp for schedule(static) nowait
    for (long long i = 0; i < total; ++i) local = std::lcm(local, t.element_order(static_cast<Index>(i)));
#pragma omp critical
    e = std::lcm(e, local);
  }
  return e;
}

const char* to_string(PairStrategy s) { return s == PairStrategy::Full ? "full" : "conj"; }

PairStrategy parse_strategy(const std::string& s) {
  if (s == "full" || s == "FULL") return PairStrategy::Full;
  if (s == "conj" || s == "CONJ" || s == "conj_reduced" || s == "CONJ_REDUCED") return PairStrategy::ConjReduced;
  throw std::invalid_argument("unknown pair strategy '" + s + "' (expected full or conj)");
}

std::vector<Index> outer_elements(const GroupTables& t, PairStrategy s) {
  if (s == PairStrategy::ConjReduced) return conjugacy_classes(t).representatives;
  std::vector<Index> all(t.order());
  std::iota(all.begin(), all.end(), Index{0});
  return all;
}

std::uint64_t commuting_pair_count(const GroupTables& t, PairStrategy s) {
  const auto outer = outer_elements(t, s);
  std::uint64_t total = 0;
  const auto count = static_cast<long long>(outer.size());
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : total)
  for (long long i = 0; i < count; ++i) {
    const Index x = outer[static_cast<std::size_t>(i)];
    for (Index y = 0; y < t.order(); ++y)
      if (t.commute(x, y)) ++total;
  }
  return total;
}

}  // namespace b0kit::kernels
