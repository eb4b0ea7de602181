#include "b0kit/reference.hpp"

#include <algorithm>
#include <set>

#include "b0kit/homology.hpp"

namespace b0kit::reference {

Classes conjugacy_classes(const PcGroup& g) {
  Classes c;
  const auto order = g.order();
  std::vector<char> done(order, 0);
  std::vector<Element> gens;
  for (int k = 0; k < g.rank(); ++k) gens.push_back(g.generator(k));
  for (std::uint64_t x = 0; x < order; ++x) {
    if (done[x]) continue;
    c.representatives.push_back(x);
    std::vector<Element> queue{g.element_at(x)};
    done[x] = 1;
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (const auto& s : gens) {
        auto y = g.conjugate(queue[q], s);
        const auto iy = g.index_of(y);
        if (!done[iy]) {
          done[iy] = 1;
          queue.push_back(std::move(y));
        }
      }
    c.sizes.push_back(queue.size());
  }
  return c;
}

namespace {

std::vector<std::uint64_t> outer(const PcGroup& g, kernels::PairStrategy s) {
  if (s == kernels::PairStrategy::ConjReduced) return conjugacy_classes(g).representatives;
  std::vector<std::uint64_t> all(g.order());
  for (std::uint64_t i = 0; i < all.size(); ++i) all[i] = i;
  return all;
}

template <class F>
void for_each_pair(const PcGroup& g, kernels::PairStrategy s, F&& f) {
  std::vector<Element> el;
  el.reserve(g.order());
  for (std::uint64_t i = 0; i < g.order(); ++i) el.push_back(g.element_at(i));
  for (auto x : outer(g, s))
    for (std::uint64_t y = 0; y < el.size(); ++y)
      if (g.multiply(el[x], el[y]) == g.multiply(el[y], el[x])) f(x, y, el[x], el[y]);
}

}  // namespace

std::vector<std::pair<std::uint64_t, std::uint64_t>> commuting_pairs(const PcGroup& g, kernels::PairStrategy s) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for_each_pair(g, s, [&](std::uint64_t x, std::uint64_t y, const Element&, const Element&) { out.emplace_back(x, y); });
  return out;
}

std::uint64_t commuting_pair_count(const PcGroup& g, kernels::PairStrategy s) {
  std::uint64_t n = 0;
  for_each_pair(g, s, [&](std::uint64_t, std::uint64_t, const Element&, const Element&) { ++n; });
  return n;
}

AbelianInvariants b0(const PcPresentation& p, kernels::PairStrategy s) {
  PcGroup g(p);
  homology::Cover cover(p);
  std::set<std::vector<std::uint64_t>> lifts;
  for_each_pair(g, s, [&](std::uint64_t, std::uint64_t, const Element& x, const Element& y) {
    auto c = cover.lift_commutator(x, y);
    if (std::any_of(c.begin(), c.end(), [](std::uint64_t v) { return v != 0; })) lifts.insert(std::move(c));
  });
  return linalg::quotient_invariants(cover.coordinates().moduli(), {lifts.begin(), lifts.end()});
}

}  // namespace b0kit::reference
