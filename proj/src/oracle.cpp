#include "b0kit/oracle.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace b0kit::oracle {

using linalg::ModMatrix;

namespace {

std::uint64_t to_u64(const mpz_class& v) { return static_cast<std::uint64_t>(v.get_ui()); }

std::uint64_t mod(long long v, std::uint64_t n) {
  const auto m = static_cast<long long>(n);
  return static_cast<std::uint64_t>(((v % m) + m) % m);
}

/// Elements of the subgroup generated by `gens` (closure under right
/// multiplication, enough in a finite group).
std::vector<std::uint32_t> closure(const MulTable& t, const std::vector<std::uint32_t>& gens,
                                   std::vector<char>& seen) {
  seen.assign(t.order(), 0);
  std::vector<std::uint32_t> out{0};
  seen[0] = 1;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (auto s : gens) {
      const auto c = t.mul(out[i], s);
      if (!seen[c]) {
        seen[c] = 1;
        out.push_back(c);
      }
    }
  return out;
}

/// Spanning tree of the Cayley graph of <gens> (gens distinct, non-trivial).
struct Tree {
  std::vector<std::uint32_t> elements;  // BFS order, identity first
  std::vector<long long> local;         // global -> position in elements, -1 outside
  std::vector<std::uint32_t> parent;    // by position
  std::vector<std::uint32_t> parent_gen;
  std::vector<char> tree_edge;  // position * |gens| + s
  std::vector<std::vector<long long>> counts;  // generator counts along the tree path

  Tree(const MulTable& t, const std::vector<std::uint32_t>& gens) {
    const auto k = gens.size();
    local.assign(t.order(), -1);
    elements.push_back(0);
    local[0] = 0;
    parent.push_back(0);
    parent_gen.push_back(0);
    counts.emplace_back(k, 0);
    for (std::size_t i = 0; i < elements.size(); ++i) {
      for (std::size_t s = 0; s < k; ++s) {
        const auto c = t.mul(elements[i], gens[s]);
        if (local[c] >= 0) continue;
        local[c] = static_cast<long long>(elements.size());
        elements.push_back(c);
        parent.push_back(static_cast<std::uint32_t>(i));
        parent_gen.push_back(static_cast<std::uint32_t>(s));
        auto cnt = counts[i];
        ++cnt[s];
        counts.push_back(std::move(cnt));
      }
    }
    tree_edge.assign(elements.size() * k, 0);
    for (std::size_t i = 1; i < elements.size(); ++i) tree_edge[parent[i] * k + parent_gen[i]] = 1;
  }
};

/// Howell basis of Hom(<gens>, Z/n) as values on the generators.
ModMatrix characters(const MulTable& t, const Tree& tree, const std::vector<std::uint32_t>& gens, std::uint64_t n) {
  const auto k = gens.size();
  ModMatrix rel(0, k, n);
  std::vector<std::int64_t> row(k);
  for (std::size_t i = 0; i < tree.elements.size(); ++i)
    for (std::size_t s = 0; s < k; ++s) {
      if (tree.tree_edge[i * k + s]) continue;
      const auto z = static_cast<std::size_t>(tree.local[t.mul(tree.elements[i], gens[s])]);
      for (std::size_t j = 0; j < k; ++j) row[j] = tree.counts[i][j] - tree.counts[z][j];
      ++row[s];
      rel.append_row_signed(row);
    }
  if (rel.rows() == 0) {
    ModMatrix all(0, k, n);
    std::vector<std::uint64_t> e(k, 0);
    for (std::size_t j = 0; j < k; ++j) {
      e.assign(k, 0);
      e[j] = 1;
      all.append_row(e);
    }
    return all;
  }
  return linalg::howell_kernel(rel);
}

/// Values chi~(a) in [0, n) of a character given on the generators.
std::vector<std::uint64_t> character_values(const Tree& tree, std::span<const std::uint64_t> chi, std::uint64_t n) {
  std::vector<std::uint64_t> v(tree.elements.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < chi.size(); ++j) acc = (acc + mod(tree.counts[i][j], n) * chi[j]) % n;
    v[i] = acc;
  }
  return v;
}

bool trivial_mod(const ModMatrix& u, const std::vector<std::uint64_t>& d) {
  for (std::size_t r = 0; r < u.rows(); ++r)
    for (std::size_t c = 0; c < u.cols(); ++c)
      if (u(r, c) % d[c] != 0) return false;
  return true;
}

}  // namespace

MulTable::MulTable(const PcGroup& g, std::uint64_t bound) {
  const auto order = g.order();
  if (order > bound)
    throw BudgetError("group of order " + std::to_string(order) + " is above the oracle bound " + std::to_string(bound));
  m_ = static_cast<std::size_t>(order);
  std::vector<Element> el;
  el.reserve(m_);
  for (std::size_t i = 0; i < m_; ++i) el.push_back(g.element_at(i));
  t_.resize(m_ * m_);
  for (std::size_t a = 0; a < m_; ++a)
    for (std::size_t b = 0; b < m_; ++b) t_[a * m_ + b] = static_cast<std::uint32_t>(g.index_of(g.multiply(el[a], el[b])));
  finish();
}

MulTable::MulTable(std::vector<std::uint32_t> table, std::size_t order) : m_(order), t_(std::move(table)) {
  if (t_.size() != m_ * m_ || m_ == 0) throw std::invalid_argument("table size does not match the order");
  for (auto v : t_)
    if (v >= m_) throw std::invalid_argument("table entry out of range");
  finish();
}

void MulTable::finish() {
  for (std::size_t a = 0; a < m_; ++a)
    if (mul(0, static_cast<std::uint32_t>(a)) != a || mul(static_cast<std::uint32_t>(a), 0) != a)
      throw std::invalid_argument("index 0 is not the identity");
  inv_.assign(m_, 0);
  for (std::uint32_t a = 0; a < m_; ++a) {
    std::size_t found = 0;
    for (std::uint32_t b = 0; b < m_; ++b)
      if (mul(a, b) == 0) {
        inv_[a] = b;
        ++found;
      }
    if (found != 1) throw std::invalid_argument("table is not a group: element without a unique inverse");
  }
  for (std::uint32_t a = 0; a < m_; ++a)
    for (std::uint32_t b = 0; b < m_; ++b) {
      const auto ab = mul(a, b);
      for (std::uint32_t c = 0; c < m_; ++c)
        if (mul(ab, c) != mul(a, mul(b, c))) throw std::invalid_argument("table is not associative");
    }
}

QuotientWithReps quotient_with_representatives(const ModMatrix& basis, const ModMatrix& sub) {
  QuotientWithReps q;
  const auto k = basis.rows();
  const auto n = basis.modulus();
  if (k == 0) return q;
  ModMatrix stacked(0, basis.cols(), n);
  for (std::size_t r = 0; r < k; ++r) stacked.append_row(basis.row(r));
  for (std::size_t r = 0; r < sub.rows(); ++r) stacked.append_row(sub.row(r));
  const auto lk = linalg::howell_left_kernel(stacked);

  linalg::IntMatrix rel(0, k);
  std::vector<long long> row(k);
  for (std::size_t r = 0; r < lk.rows(); ++r) {
    for (std::size_t j = 0; j < k; ++j) row[j] = static_cast<long long>(lk(r, j));
    rel.append_row(row);
  }
  for (std::size_t j = 0; j < k; ++j) {
    row.assign(k, 0);
    row[j] = static_cast<long long>(n);
    rel.append_row(row);
  }
  const auto snf = linalg::smith_normal_form(rel);
  for (std::size_t i = 0; i < snf.rank; ++i) {
    const auto d = to_u64(snf.diagonal(i, i));
    if (d < 2) continue;
    q.orders.push_back(d);
    std::vector<std::uint64_t> rep(basis.cols(), 0);
    for (std::size_t j = 0; j < k; ++j) {
      const mpz_class c = snf.right_inverse(i, j) % static_cast<unsigned long>(n);
      const auto cj = mod(c.get_si(), n);
      if (cj == 0) continue;
      for (std::size_t col = 0; col < basis.cols(); ++col) rep[col] = (rep[col] + cj * basis(j, col)) % n;
    }
    q.representatives.push_back(std::move(rep));
  }
  q.invariants = invariants_from_cyclic_orders(q.orders);
  return q;
}

Cohomology::Cohomology(const MulTable& t, std::uint64_t n) : t_(&t), n_(n == 0 ? t.order() : n) {
  const auto m = t.order();
  if (n_ < 2) n_ = 2;  // trivial group
  cocycles_ = ModMatrix(0, 0, n_);

  // Greedy generating set: repeatedly add the element that enlarges the
  // generated subgroup most.
  std::vector<char> seen;
  std::size_t have = 1;
  while (have < m) {
    std::size_t best_size = 0;
    std::uint32_t best = 0;
    for (std::uint32_t c = 1; c < m; ++c) {
      if (std::find(gens_.begin(), gens_.end(), c) != gens_.end()) continue;
      auto trial = gens_;
      trial.push_back(c);
      const auto size = closure(t, trial, seen).size();
      if (size > best_size) {
        best_size = size;
        best = c;
      }
    }
    gens_.push_back(best);
    have = best_size;
  }

  const auto k = gens_.size();
  const Tree tree(t, gens_);
  bfs_order_ = tree.elements;
  parent_.assign(m, 0);
  parent_gen_.assign(m, 0);
  for (std::size_t i = 1; i < m; ++i) {
    parent_[tree.elements[i]] = tree.elements[tree.parent[i]];
    parent_gen_[tree.elements[i]] = tree.parent_gen[i];
  }
  col_.assign(m * k, -1);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t s = 0; s < k; ++s)
      if (!tree.tree_edge[i * k + s]) col_[tree.elements[i] * k + s] = static_cast<long long>(unknowns_++);
  if (unknowns_ == 0) return;  // trivial group

  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> paths(m);
  for (std::uint32_t y = 0; y < m; ++y) paths[y] = path(y);

  // Cocycle identity f(x,y) + f(xy,s) = f(y,s) + f(x,ys) for every non-tree
  // edge (y, s); on tree edges it holds by construction.
  linalg::HowellAccumulator acc(unknowns_, n_);
  std::vector<long long> dense(unknowns_, 0);
  std::vector<std::uint64_t> row(unknowns_);
  auto add = [&](std::uint32_t a, std::size_t s, long long c) {
    const auto col = column(a, s);
    if (col >= 0) dense[static_cast<std::size_t>(col)] += c;
  };
  for (std::uint32_t x = 1; x < m; ++x)
    for (std::uint32_t y = 0; y < m; ++y)
      for (std::size_t s = 0; s < k; ++s) {
        if (column(y, s) < 0) continue;
        const auto z = t.mul(y, gens_[s]);
        std::fill(dense.begin(), dense.end(), 0);
        for (auto [p, g] : paths[y]) add(t.mul(x, p), g, 1);
        add(t.mul(x, y), s, 1);
        add(y, s, -1);
        for (auto [p, g] : paths[z]) add(t.mul(x, p), g, -1);
        bool zero = true;
        for (std::size_t c = 0; c < unknowns_; ++c) {
          row[c] = mod(dense[c], n_);
          zero = zero && row[c] == 0;
        }
        if (!zero) acc.add_row(row);
      }
  const auto relations = acc.finish();
  if (relations.rows() == 0) {
    cocycles_ = ModMatrix(0, unknowns_, n_);
    std::vector<std::uint64_t> e(unknowns_, 0);
    for (std::size_t c = 0; c < unknowns_; ++c) {
      e.assign(unknowns_, 0);
      e[c] = 1;
      cocycles_.append_row(e);
    }
  } else {
    cocycles_ = linalg::howell_kernel(relations);
  }
  cocycle_count_ = to_u64(linalg::howell_span_order(cocycles_));

  // Coboundaries of the cochains that are additive along the tree.
  ModMatrix cob(0, unknowns_, n_);
  for (std::size_t s0 = 0; s0 < k; ++s0) {
    std::vector<std::int64_t> f(m * k, 0);
    std::vector<long long> c(m, 0);
    for (std::size_t i = 1; i < m; ++i) {
      const auto g = tree.parent_gen[i];
      c[tree.elements[i]] = c[tree.elements[tree.parent[i]]] + (g == s0 ? 1 : 0);
    }
    for (std::uint32_t a = 0; a < m; ++a)
      for (std::size_t s = 0; s < k; ++s) f[a * k + s] = c[a] + c[gens_[s]] - c[t.mul(a, gens_[s])];
    cob.append_row(gauge_fixed(f));
  }
  coboundary_count_ = to_u64(linalg::span_order(cob));
  h2n_ = quotient_with_representatives(cocycles_, cob);
  const auto h2n_order = cocycle_count_ / coboundary_count_;
  if (h2n_.invariants.order() != h2n_order) throw std::logic_error("cocycle quotient has the wrong order");
  const auto chars = characters(t, tree, gens_, n_);
  hom_order_ = to_u64(linalg::howell_span_order(chars));
  // Q/Z coefficients are only reached through Z/n when |G| divides n.
  if (n_ % m != 0) return;

  // Connecting image of Hom(G, Q/Z): carry cocycles of Hom(G, Z/n).
  ModMatrix sub = cob;
  for (std::size_t r = 0; r < chars.rows(); ++r) {
    auto v = character_values(tree, chars.row(r), n_);
    std::vector<std::uint64_t> chi(m);
    for (std::size_t i = 0; i < m; ++i) chi[tree.elements[i]] = v[i];
    std::vector<std::int64_t> f(m * k);
    for (std::uint32_t a = 0; a < m; ++a)
      for (std::size_t s = 0; s < k; ++s) {
        const auto sum = chi[a] + chi[gens_[s]] - chi[t.mul(a, gens_[s])] + n_;
        if (sum % n_ != 0) throw std::logic_error("character solve returned a non-homomorphism");
        f[a * k + s] = static_cast<std::int64_t>(sum / n_) - 1;
      }
    sub.append_row(gauge_fixed(f));
  }
  h2q_ = quotient_with_representatives(cocycles_, sub);

  if (h2n_order != h2q_.invariants.order() * hom_order_)
    throw std::logic_error("cohomology exactness check failed: |H2(Z/n)| = " + std::to_string(h2n_order) +
                           ", |H2(Q/Z)| * |Hom| = " + std::to_string(h2q_.invariants.order() * hom_order_));
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> Cohomology::path(std::uint32_t y) const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  while (y != 0) {
    out.emplace_back(parent_[y], parent_gen_[y]);
    y = parent_[y];
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<std::uint64_t> Cohomology::gauge_fixed(const std::vector<std::int64_t>& f) const {
  const auto m = t_->order();
  const auto k = gens_.size();
  std::vector<long long> c(m, 0);
  for (std::size_t i = 1; i < m; ++i) {
    const auto x = bfs_order_[i];
    const auto p = parent_[x];
    const auto g = parent_gen_[x];
    c[x] = c[p] + c[gens_[g]] - f[p * k + g];
  }
  std::vector<std::uint64_t> out(unknowns_, 0);
  for (std::uint32_t a = 0; a < m; ++a)
    for (std::size_t s = 0; s < k; ++s) {
      const auto col = column(a, s);
      if (col < 0) continue;
      out[static_cast<std::size_t>(col)] = mod(f[a * k + s] - (c[a] + c[gens_[s]] - c[t_->mul(a, gens_[s])]), n_);
    }
  return out;
}

std::uint64_t Cohomology::value(const std::vector<std::uint64_t>& coords, std::uint32_t a, std::uint32_t b) const {
  std::uint64_t v = 0;
  for (auto [p, g] : path(b)) {
    const auto col = column(t_->mul(a, p), g);
    if (col >= 0) v = (v + coords[static_cast<std::size_t>(col)]) % n_;
  }
  return v;
}

std::vector<std::uint64_t> Cohomology::expand(const std::vector<std::uint64_t>& coords) const {
  const auto m = t_->order();
  std::vector<std::uint64_t> f(m * m, 0);
  for (std::uint32_t a = 0; a < m; ++a)
    for (std::uint32_t b = 0; b < m; ++b) f[a * m + b] = value(coords, a, b);
  return f;
}

ModMatrix Cohomology::restriction_kernel(std::uint32_t x, std::uint32_t y) const {
  const auto s = h2q_.representatives.size();
  ModMatrix u(0, s, n_);
  std::vector<std::uint64_t> e(s);
  for (std::size_t i = 0; i < s; ++i) {
    e.assign(s, 0);
    e[i] = 1;
    u.append_row(e);
  }
  if (s == 0) return u;
  if (!t_->commute(x, y)) throw std::invalid_argument("restriction_kernel needs commuting elements");

  std::vector<std::uint32_t> ga;
  for (auto g : {x, y})
    if (g != 0 && std::find(ga.begin(), ga.end(), g) == ga.end()) ga.push_back(g);
  if (ga.empty()) return u;
  const Tree tree(*t_, ga);
  const auto na = tree.elements.size();
  const auto k = ga.size();
  const auto cols = na * k;

  // Restricted cocycles of the H2(G, Q/Z) representatives, then the classes
  // that die in H2(A, Q/Z): coboundaries and carries of Hom(A, Z/n).
  ModMatrix m(0, cols, n_);
  std::vector<std::uint64_t> row(cols);
  for (std::size_t r = 0; r < s; ++r) {
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < k; ++j) row[i * k + j] = value(h2q_.representatives[r], tree.elements[i], ga[j]);
    m.append_row(row);
  }
  for (std::size_t b = 1; b < na; ++b) {
    std::vector<std::int64_t> d(cols, 0);
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        const auto prod = static_cast<std::size_t>(tree.local[t_->mul(tree.elements[i], ga[j])]);
        d[i * k + j] = (i == b ? 1 : 0) + (tree.elements[b] == ga[j] ? 1 : 0) - (prod == b ? 1 : 0);
      }
    m.append_row_signed(d);
  }
  const auto chars = characters(*t_, tree, ga, n_);
  for (std::size_t r = 0; r < chars.rows(); ++r) {
    const auto v = character_values(tree, chars.row(r), n_);
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        const auto sj = static_cast<std::size_t>(tree.local[ga[j]]);
        const auto prod = static_cast<std::size_t>(tree.local[t_->mul(tree.elements[i], ga[j])]);
        row[i * k + j] = (v[i] + v[sj] + n_ - v[prod]) / n_ - 1;
      }
    m.append_row(row);
  }
  const auto lk = linalg::howell_left_kernel(m);
  ModMatrix out(0, s, n_);
  for (std::size_t r = 0; r < lk.rows(); ++r) {
    for (std::size_t i = 0; i < s; ++i) e[i] = lk(r, i);
    out.append_row(e);
  }
  return linalg::howell_form(out);
}

AbelianInvariants Cohomology::b0(std::size_t* subgroups_seen) const {
  const auto s = h2q_.representatives.size();
  const auto& d = h2q_.orders;
  if (subgroups_seen) *subgroups_seen = 0;
  if (s == 0) return {};

  const auto m = t_->order();
  // Distinct bicyclic subgroups, largest first.
  std::set<std::vector<std::uint32_t>> seen_sets;
  std::vector<std::pair<std::size_t, std::pair<std::uint32_t, std::uint32_t>>> todo;
  std::vector<char> mark;
  for (std::uint32_t x = 1; x < m; ++x)
    for (std::uint32_t y = x + 1; y < m; ++y) {
      if (!t_->commute(x, y)) continue;
      auto el = closure(*t_, {x, y}, mark);
      std::sort(el.begin(), el.end());
      const auto size = el.size();
      if (seen_sets.insert(std::move(el)).second) todo.push_back({size, {x, y}});
    }
  std::stable_sort(todo.begin(), todo.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  if (subgroups_seen) *subgroups_seen = todo.size();

  ModMatrix u(0, s, n_);
  std::vector<std::uint64_t> e(s);
  for (std::size_t i = 0; i < s; ++i) {
    e.assign(s, 0);
    e[i] = 1;
    u.append_row(e);
  }
  for (const auto& [size, pair] : todo) {
    if (trivial_mod(u, d)) break;
    const auto ker = restriction_kernel(pair.first, pair.second);
    // u <- u cap ker via the left kernel of [u; ker].
    ModMatrix stacked(0, s, n_);
    for (std::size_t r = 0; r < u.rows(); ++r) stacked.append_row(u.row(r));
    for (std::size_t r = 0; r < ker.rows(); ++r) stacked.append_row(ker.row(r));
    const auto lk = linalg::howell_left_kernel(stacked);
    ModMatrix next(0, s, n_);
    for (std::size_t r = 0; r < lk.rows(); ++r) {
      e.assign(s, 0);
      for (std::size_t i = 0; i < u.rows(); ++i)
        for (std::size_t c = 0; c < s; ++c) e[c] = (e[c] + lk(r, i) * u(i, c)) % n_;
      next.append_row(e);
    }
    u = next.rows() ? linalg::howell_form(next) : ModMatrix(0, s, n_);
  }
  std::vector<std::vector<std::uint64_t>> gens;
  for (std::size_t r = 0; r < u.rows(); ++r) {
    std::vector<std::uint64_t> g(s);
    for (std::size_t c = 0; c < s; ++c) g[c] = u(r, c) % d[c];
    gens.push_back(std::move(g));
  }
  return linalg::subgroup_invariants(d, gens);
}

bool Cohomology::coboundary_count_consistent() const {
  mpz_class lhs = 1;
  for (std::size_t i = 0; i < gens_.size(); ++i) lhs *= static_cast<unsigned long>(n_);
  return lhs == mpz_class(static_cast<unsigned long>(coboundary_count_)) * static_cast<unsigned long>(hom_order_);
}

bool is_normalized_cocycle(const MulTable& t, const std::vector<std::uint64_t>& f, std::uint64_t n) {
  const auto m = t.order();
  if (f.size() != m * m) return false;
  for (std::size_t a = 0; a < m; ++a)
    if (f[a] % n != 0 || f[a * m] % n != 0) return false;
  for (std::uint32_t x = 0; x < m; ++x)
    for (std::uint32_t y = 0; y < m; ++y) {
      const auto xy = t.mul(x, y);
      for (std::uint32_t z = 0; z < m; ++z)
        if ((f[x * m + y] + f[xy * m + z]) % n != (f[y * m + z] + f[x * m + t.mul(y, z)]) % n) return false;
    }
  return true;
}

CocycleSpace h2_mod_n(const MulTable& t, std::uint64_t n) {
  if (n < 2) throw std::invalid_argument("coefficient modulus must be at least 2");
  const Cohomology h(t, n);
  CocycleSpace c;
  c.modulus = n;
  c.order = t.order();
  c.invariants = h.h2_mod_n().invariants;
  for (const auto& rep : h.h2_mod_n().representatives) c.basis.push_back(h.expand(rep));
  return c;
}

AbelianInvariants h2_qz(const MulTable& t) { return Cohomology(t).h2_qz().invariants; }

AbelianInvariants b0_direct(const MulTable& t) { return Cohomology(t).b0(); }

}  // namespace b0kit::oracle
