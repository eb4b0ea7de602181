#include "b0kit/homology.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <stdexcept>

namespace b0kit::homology {

CoverPresentation build_cover(const PcPresentation& p) {
  CoverPresentation c{p, TailLayout::for_presentation(p.rank()), {}, overlaps(p.rank())};
  const auto m = static_cast<std::size_t>(c.layout.count);
  std::vector<std::vector<long long>> rows(c.overlaps.size(), std::vector<long long>(m, 0));
  Collector col(c.base, &c.layout);
  bool base_mismatch = false;
  std::exception_ptr error;
  const auto count = static_cast<long long>(c.overlaps.size());
#pragma omp parallel for schedule(dynamic) reduction(|| : base_mismatch)
  for (long long k = 0; k < count; ++k) {
    try {
      auto [l, r] = evaluate_overlap(col, c.overlaps[static_cast<std::size_t>(k)]);
      if (l.exponents != r.exponents) base_mismatch = true;
      for (std::size_t t = 0; t < m; ++t) rows[static_cast<std::size_t>(k)][t] = l.tails[t] - r.tails[t];
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  if (base_mismatch) throw PresentationError("cover of an inconsistent presentation");
  c.relation_lattice = linalg::IntMatrix::from_rows(rows, m);
  return c;
}

Cover::Cover(const PcPresentation& p)
    : cover_(build_cover(p)),
      collector_(cover_.base, &cover_.layout),
      coords_(cover_.relation_lattice, static_cast<std::size_t>(cover_.layout.count)),
      multiplier_(coords_.invariants()) {
  free_rank_ = multiplier_.free_rank;
  multiplier_.free_rank = 0;
  if (free_rank_ != p.rank())
    throw std::logic_error("cover tail lattice has free rank " + std::to_string(free_rank_) + ", expected " +
                           std::to_string(p.rank()));
}

std::vector<std::int64_t> Cover::lift_commutator_raw(const Element& x, const Element& y) const {
  auto xy = collector_.lift(x.exponents);
  collector_.multiply(xy, collector_.lift(y.exponents));
  auto yx = collector_.lift(y.exponents);
  collector_.multiply(yx, collector_.lift(x.exponents));
  if (xy.exponents != yx.exponents) throw std::invalid_argument("lift_commutator needs commuting elements");
  std::vector<std::int64_t> d(xy.tails.size());
  for (std::size_t t = 0; t < d.size(); ++t) d[t] = xy.tails[t] - yx.tails[t];
  return d;
}

std::vector<std::uint64_t> Cover::canonical(const std::vector<std::int64_t>& tails) const {
  std::vector<std::uint64_t> out;
  if (!coords_.coordinates(tails, out)) throw std::logic_error("commutator lift is not torsion modulo the tail lattice");
  return out;
}

std::vector<std::uint64_t> Cover::lift_commutator(const Element& x, const Element& y) const {
  return canonical(lift_commutator_raw(x, y));
}

AbelianInvariants schur_multiplier(const PcPresentation& p) { return Cover(p).multiplier(); }

// ---- Characters ------------------------------------------------------------

CharacterSpace::CharacterSpace(const PcGroup& g, const Subgroup& n) : g_(&g) {
  gens_ = n.generators;
  for (std::size_t a = 0; a < gens_.size(); ++a)
    for (std::size_t b = a + 1; b < gens_.size(); ++b)
      if (g.multiply(gens_[a], gens_[b]) != g.multiply(gens_[b], gens_[a]))
        throw std::invalid_argument("subgroup is not abelian");
  for (int k = 0; k < g.rank(); ++k)
    for (const auto& h : gens_)
      if (!n.contains(g.index_of(g.conjugate(h, g.generator(k)))))
        throw std::invalid_argument("subgroup is not normal");

  // Breadth-first enumeration of N recording one coordinate vector per
  // element; every second arrival at an element yields a relation.
  const std::size_t k = gens_.size();
  std::vector<std::pair<std::uint64_t, std::vector<long long>>> found;
  std::vector<std::vector<long long>> rels;
  {
    std::vector<Element> frontier{g.identity()};
    std::vector<std::pair<std::uint64_t, std::size_t>> where;  // index -> position in found
    auto lookup = [&](std::uint64_t idx) -> long long {
      auto it = std::lower_bound(where.begin(), where.end(), std::make_pair(idx, std::size_t{0}));
      if (it != where.end() && it->first == idx) return static_cast<long long>(it->second);
      return -1;
    };
    auto insert = [&](std::uint64_t idx, std::size_t pos) {
      auto it = std::lower_bound(where.begin(), where.end(), std::make_pair(idx, std::size_t{0}));
      where.insert(it, {idx, pos});
    };
    found.push_back({g.index_of(g.identity()), std::vector<long long>(k, 0)});
    insert(found.back().first, 0);
    std::vector<std::size_t> frontier_pos{0};
    while (!frontier.empty()) {
      std::vector<Element> next;
      std::vector<std::size_t> next_pos;
      for (std::size_t f = 0; f < frontier.size(); ++f) {
        for (std::size_t s = 0; s < k; ++s) {
          Element y = g.multiply(frontier[f], gens_[s]);
          auto v = found[frontier_pos[f]].second;
          v[s] += 1;
          const auto idx = g.index_of(y);
          const long long at = lookup(idx);
          if (at < 0) {
            found.push_back({idx, v});
            insert(idx, found.size() - 1);
            next.push_back(std::move(y));
            next_pos.push_back(found.size() - 1);
          } else {
            const auto& w = found[static_cast<std::size_t>(at)].second;
            std::vector<long long> r(k);
            for (std::size_t t = 0; t < k; ++t) r[t] = v[t] - w[t];
            if (std::any_of(r.begin(), r.end(), [](long long x) { return x != 0; })) rels.push_back(std::move(r));
          }
        }
      }
      frontier = std::move(next);
      frontier_pos = std::move(next_pos);
    }
  }
  if (found.size() != n.order()) throw std::invalid_argument("subgroup generators do not generate the subgroup");

  std::sort(found.begin(), found.end());
  for (auto& [idx, v] : found) {
    index_.push_back(idx);
    coords_.push_back(std::move(v));
  }

  std::uint64_t e = 1;
  for (const auto& h : gens_) e = std::lcm(e, g.element_order(h));
  modulus_ = std::max<std::uint64_t>(e, 2);

  relations_ = linalg::ModMatrix(0, k, modulus_);
  for (const auto& r : rels) {
    const std::vector<std::int64_t> r64(r.begin(), r.end());
    relations_.append_row_signed(r64);
  }
  characters_ = linalg::howell_kernel(relations_);

  linalg::ModMatrix fixed_system = relations_;
  std::vector<std::int64_t> row(k);
  for (int gi = 0; gi < g.rank(); ++gi) {
    const Element x = g.generator(gi);
    // (^x chi)(h_a) - chi(h_a) = sum_b (A[a][b] - delta_ab) chi(h_b)
    for (std::size_t a = 0; a < k; ++a) {
      const auto& c = coordinates(g.conjugate(gens_[a], x));
      for (std::size_t b = 0; b < k; ++b) row[b] = c[b] - (a == b ? 1 : 0);
      fixed_system.append_row_signed(row);
    }
  }
  fixed_ = linalg::howell_kernel(fixed_system);
}

std::uint64_t CharacterSpace::character_count() const { return linalg::howell_span_order(characters_).get_ui(); }

std::uint64_t CharacterSpace::fixed_count() const { return linalg::howell_span_order(fixed_).get_ui(); }

const std::vector<long long>& CharacterSpace::coordinates(const Element& h) const {
  const auto idx = g_->index_of(h);
  auto it = std::lower_bound(index_.begin(), index_.end(), idx);
  if (it == index_.end() || *it != idx) throw std::invalid_argument("element is not in the subgroup");
  return coords_[static_cast<std::size_t>(it - index_.begin())];
}

std::uint64_t CharacterSpace::evaluate(const std::vector<std::uint64_t>& chi, const Element& h) const {
  const auto& c = coordinates(h);
  const auto n = static_cast<long long>(modulus_);
  long long v = 0;
  for (std::size_t b = 0; b < c.size(); ++b) v = (v + (c[b] % n + n) % n * static_cast<long long>(chi[b] % modulus_)) % n;
  return static_cast<std::uint64_t>(v);
}

std::vector<std::uint64_t> CharacterSpace::act(const Element& x, const std::vector<std::uint64_t>& chi) const {
  std::vector<std::uint64_t> out(gens_.size());
  for (std::size_t a = 0; a < gens_.size(); ++a) out[a] = evaluate(chi, g_->conjugate(gens_[a], x));
  return out;
}

bool CharacterSpace::is_character(const std::vector<std::uint64_t>& values) const {
  return values.size() == gens_.size() && linalg::howell_contains(characters_, values);
}

bool CharacterSpace::is_fixed(const std::vector<std::uint64_t>& values) const {
  return values.size() == gens_.size() && linalg::howell_contains(fixed_, values);
}

}  // namespace b0kit::homology
