#include "b0kit/linalg.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace b0kit {

namespace {

int cmpabs(const mpz_class& a, const mpz_class& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

std::uint64_t to_u64(const mpz_class& v) {
  if (sgn(v) < 0 || !v.fits_ulong_p())
    throw std::overflow_error("invariant factor does not fit in 64 bits");
  return v.get_ui();
}

std::int64_t to_i64(const mpz_class& v) {
  if (!v.fits_slong_p())
    throw std::overflow_error("matrix entry does not fit in 64 bits");
  return v.get_si();
}

}  // namespace

std::uint64_t AbelianInvariants::torsion_order() const {
  std::uint64_t result = 1;
  for (auto d : torsion) {
    if (d != 0 && result > std::numeric_limits<std::uint64_t>::max() / d)
      throw std::overflow_error("group order overflows 64 bits");
    result *= d;
  }
  return result;
}

std::uint64_t AbelianInvariants::order() const {
  if (free_rank != 0)
    throw std::domain_error("infinite abelian group has no finite order");
  return torsion_order();
}

void AbelianInvariants::validate() const {
  if (free_rank < 0)
    throw std::invalid_argument("negative free rank");
  for (std::size_t i = 0; i < torsion.size(); ++i) {
    if (torsion[i] < 2)
      throw std::invalid_argument("invariant factor < 2");
    if (i > 0 && torsion[i] % torsion[i - 1] != 0)
      throw std::invalid_argument("invariant factors do not form a divisibility chain");
  }
}

std::string AbelianInvariants::to_string() const {
  if (is_trivial())
    return "1";
  std::ostringstream os;
  bool first = true;
  for (auto d : torsion) {
    os << (first ? "" : " x ") << "C" << d;
    first = false;
  }
  for (int i = 0; i < free_rank; ++i) {
    os << (first ? "" : " x ") << "Z";
    first = false;
  }
  return os.str();
}

AbelianInvariants invariants_from_cyclic_orders(std::span<const std::uint64_t> orders) {
  linalg::IntMatrix m(orders.size(), orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i)
    m(i, i) = mpz_class(static_cast<unsigned long>(orders[i]));
  return linalg::cokernel_invariants(m);
}

namespace linalg {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long long>>& rows, std::size_t cols) {
  IntMatrix m(0, cols);
  for (const auto& r : rows)
    m.append_row(std::span<const long long>(r));
  return m;
}

void IntMatrix::append_row(std::span<const long long> row) {
  if (row.size() != cols_)
    throw std::invalid_argument("row length does not match column count");
  for (auto v : row)
    data_.emplace_back(static_cast<long>(v));
  ++rows_;
}

void IntMatrix::append_row(std::span<const mpz_class> row) {
  if (row.size() != cols_)
    throw std::invalid_argument("row length does not match column count");
  data_.insert(data_.end(), row.begin(), row.end());
  ++rows_;
}

std::vector<mpz_class> IntMatrix::row(std::size_t r) const {
  return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
          data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

void IntMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b)
    return;
  for (std::size_t c = 0; c < cols_; ++c)
    (*this)(a, c).swap((*this)(b, c));
}

void IntMatrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b)
    return;
  for (std::size_t r = 0; r < rows_; ++r)
    (*this)(r, a).swap((*this)(r, b));
}

void IntMatrix::add_row_multiple(std::size_t dst, std::size_t src, const mpz_class& factor) {
  if (sgn(factor) == 0)
    return;
  for (std::size_t c = 0; c < cols_; ++c) {
    const auto& s = (*this)(src, c);
    if (sgn(s) != 0)
      (*this)(dst, c) += factor * s;
  }
}

void IntMatrix::add_col_multiple(std::size_t dst, std::size_t src, const mpz_class& factor) {
  if (sgn(factor) == 0)
    return;
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto& s = (*this)(r, src);
    if (sgn(s) != 0)
      (*this)(r, dst) += factor * s;
  }
}

void IntMatrix::negate_row(std::size_t r) {
  for (std::size_t c = 0; c < cols_; ++c)
    (*this)(r, c) = -(*this)(r, c);
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      t(c, r) = (*this)(r, c);
  return t;
}

bool IntMatrix::is_diagonal() const {
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (r != c && sgn((*this)(r, c)) != 0)
        return false;
  return true;
}

mpz_class IntMatrix::determinant() const {
  if (rows_ != cols_)
    throw std::invalid_argument("determinant of a non-square matrix");
  const std::size_t n = rows_;
  if (n == 0)
    return 1;
  IntMatrix m = *this;
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(m(k, k)) == 0) {
      std::size_t swap = k + 1;
      while (swap < n && sgn(m(swap, k)) == 0)
        ++swap;
      if (swap == n)
        return 0;
      m.swap_rows(k, swap);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = v;
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_)
    throw std::invalid_argument("matrix dimensions do not agree");
  IntMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const auto& aik = a(i, k);
      if (sgn(aik) == 0)
        continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        out(i, j) += aik * b(k, j);
    }
  return out;
}

bool operator==(const IntMatrix& a, const IntMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::vector<mpz_class> SmithForm::invariant_factors() const {
  std::vector<mpz_class> out;
  out.reserve(rank);
  for (std::size_t i = 0; i < rank; ++i)
    out.push_back(diagonal(i, i));
  return out;
}

namespace {

// Smallest nonzero |entry| in the trailing submatrix starting at (t, t).
bool find_min_pivot(const IntMatrix& d, std::size_t t, std::size_t& pr, std::size_t& pc) {
  bool found = false;
  mpz_class best;
  for (std::size_t r = t; r < d.rows(); ++r)
    for (std::size_t c = t; c < d.cols(); ++c) {
      const auto& v = d(r, c);
      if (sgn(v) == 0)
        continue;
      if (!found || cmpabs(v, best) < 0) {
        best = v;
        pr = r;
        pc = c;
        found = true;
        if (best == 1 || best == -1)
          return true;
      }
    }
  return found;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& a) {
  SmithForm s;
  s.diagonal = a;
  s.left = IntMatrix::identity(a.rows());
  s.right = IntMatrix::identity(a.cols());
  s.right_inverse = IntMatrix::identity(a.cols());
  IntMatrix& d = s.diagonal;
  auto& u = s.left;
  auto& v = s.right;
  auto& vinv = s.right_inverse;

  auto swap_rows = [&](std::size_t x, std::size_t y) {
    d.swap_rows(x, y);
    u.swap_rows(x, y);
  };
  auto swap_cols = [&](std::size_t x, std::size_t y) {
    d.swap_cols(x, y);
    v.swap_cols(x, y);
    vinv.swap_rows(x, y);
  };
  // col[dst] += f * col[src]; V picks up the same op, V^{-1} the inverse.
  auto add_col = [&](std::size_t dst, std::size_t src, const mpz_class& f) {
    d.add_col_multiple(dst, src, f);
    v.add_col_multiple(dst, src, f);
    vinv.add_row_multiple(src, dst, -f);
  };
  auto add_row = [&](std::size_t dst, std::size_t src, const mpz_class& f) {
    d.add_row_multiple(dst, src, f);
    u.add_row_multiple(dst, src, f);
  };

  const std::size_t limit = std::min(a.rows(), a.cols());
  std::size_t t = 0;
  mpz_class q;
  for (; t < limit; ++t) {
    std::size_t pr = 0, pc = 0;
    if (!find_min_pivot(d, t, pr, pc))
      break;
    swap_rows(t, pr);
    swap_cols(t, pc);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < d.rows(); ++i) {
        if (sgn(d(i, t)) == 0)
          continue;
        mpz_tdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
        add_row(i, t, -q);
        if (sgn(d(i, t)) != 0)
          clean = false;
      }
      for (std::size_t j = t + 1; j < d.cols(); ++j) {
        if (sgn(d(t, j)) == 0)
          continue;
        mpz_tdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
        add_col(j, t, -q);
        if (sgn(d(t, j)) != 0)
          clean = false;
      }
      if (!clean) {
        // Move the smallest remainder in row/column t onto the pivot.
        std::size_t br = t, bc = t;
        for (std::size_t i = t + 1; i < d.rows(); ++i)
          if (sgn(d(i, t)) != 0 && cmpabs(d(i, t), d(br, bc)) < 0) {
            br = i;
            bc = t;
          }
        for (std::size_t j = t + 1; j < d.cols(); ++j)
          if (sgn(d(t, j)) != 0 && cmpabs(d(t, j), d(br, bc)) < 0) {
            br = t;
            bc = j;
          }
        swap_rows(t, br);
        swap_cols(t, bc);
        continue;
      }
      // Divisibility: fold an offending row into row t and repeat.
      bool offending = false;
      for (std::size_t i = t + 1; i < d.rows() && !offending; ++i)
        for (std::size_t j = t + 1; j < d.cols(); ++j)
          if (sgn(d(i, j)) != 0 && !mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) {
            add_row(t, i, 1);
            offending = true;
            break;
          }
      if (!offending)
        break;
    }
    if (sgn(d(t, t)) < 0) {
      d.negate_row(t);
      u.negate_row(t);
    }
  }
  s.rank = t;
  return s;
}

IntMatrix hermite_normal_form(const IntMatrix& a) {
  IntMatrix h = a;
  std::size_t r = 0;
  mpz_class g, x, y, q;
  for (std::size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
    // Fold every row below r into row r with unimodular 2x2 steps.
    for (std::size_t i = r + 1; i < h.rows(); ++i) {
      if (sgn(h(i, c)) == 0)
        continue;
      if (sgn(h(r, c)) == 0) {
        h.swap_rows(r, i);
        continue;
      }
      mpz_class av = h(r, c), bv = h(i, c);
      mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), av.get_mpz_t(), bv.get_mpz_t());
      mpz_class ua = av / g, ub = bv / g;
      for (std::size_t k = 0; k < h.cols(); ++k) {
        mpz_class top = x * h(r, k) + y * h(i, k);
        mpz_class bottom = -ub * h(r, k) + ua * h(i, k);
        h(r, k) = top;
        h(i, k) = bottom;
      }
    }
    if (sgn(h(r, c)) == 0)
      continue;
    if (sgn(h(r, c)) < 0)
      h.negate_row(r);
    for (std::size_t i = 0; i < r; ++i) {
      mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(r, c).get_mpz_t());
      h.add_row_multiple(i, r, -q);
    }
    ++r;
  }
  IntMatrix out(0, h.cols());
  for (std::size_t i = 0; i < r; ++i)
    out.append_row(std::span<const mpz_class>(h.row(i)));
  return out;
}

AbelianInvariants cokernel_invariants(const IntMatrix& a) {
  const auto s = smith_normal_form(a);
  AbelianInvariants inv;
  for (const auto& d : s.invariant_factors())
    if (d > 1)
      inv.torsion.push_back(to_u64(d));
  inv.free_rank = static_cast<int>(a.cols() - s.rank);
  return inv;
}

IntMatrix left_kernel(const IntMatrix& a) {
  const auto s = smith_normal_form(a);
  IntMatrix k(0, a.rows());
  for (std::size_t i = s.rank; i < a.rows(); ++i)
    k.append_row(std::span<const mpz_class>(s.left.row(i)));
  return k;
}

TorsionCoordinates::TorsionCoordinates(const IntMatrix& lattice, std::size_t ambient_dim)
    : ambient_dim_(ambient_dim) {
  if (lattice.cols() != ambient_dim)
    throw std::invalid_argument("lattice width differs from ambient dimension");
  const auto s = smith_normal_form(lattice);
  rank_ = s.rank;
  right_.resize(ambient_dim * ambient_dim);
  for (std::size_t r = 0; r < ambient_dim; ++r)
    for (std::size_t c = 0; c < ambient_dim; ++c)
      right_[r * ambient_dim + c] = to_i64(s.right(r, c));
  for (std::size_t i = 0; i < rank_; ++i) {
    const auto& d = s.diagonal(i, i);
    if (d > 1) {
      torsion_columns_.push_back(i);
      moduli_.push_back(to_u64(d));
    }
  }
  for (std::size_t i = rank_; i < ambient_dim; ++i)
    free_columns_.push_back(i);
  invariants_.torsion = moduli_;
  invariants_.free_rank = static_cast<int>(ambient_dim - rank_);
}

bool TorsionCoordinates::coordinates(std::span<const std::int64_t> v,
                                     std::vector<std::uint64_t>& out) const {
  if (v.size() != ambient_dim_)
    throw std::invalid_argument("vector length differs from ambient dimension");
  for (auto c : free_columns_) {
    __int128 acc = 0;
    for (std::size_t r = 0; r < ambient_dim_; ++r)
      acc += static_cast<__int128>(v[r]) * right_[r * ambient_dim_ + c];
    if (acc != 0)
      return false;
  }
  out.resize(torsion_columns_.size());
  for (std::size_t k = 0; k < torsion_columns_.size(); ++k) {
    const auto c = torsion_columns_[k];
    __int128 acc = 0;
    for (std::size_t r = 0; r < ambient_dim_; ++r)
      acc += static_cast<__int128>(v[r]) * right_[r * ambient_dim_ + c];
    const auto m = static_cast<__int128>(moduli_[k]);
    acc %= m;
    if (acc < 0)
      acc += m;
    out[k] = static_cast<std::uint64_t>(acc);
  }
  return true;
}

std::vector<std::uint64_t> TorsionCoordinates::coordinates(std::span<const std::int64_t> v) const {
  std::vector<std::uint64_t> out;
  if (!coordinates(v, out))
    throw std::logic_error("vector is not torsion modulo the lattice");
  return out;
}

std::uint64_t TorsionCoordinates::encode(std::span<const std::uint64_t> coords) const {
  if (invariants_.torsion_order() >= (std::uint64_t{1} << 63))
    throw std::overflow_error("torsion subgroup too large for 64-bit codes");
  std::uint64_t code = 0;
  for (std::size_t k = 0; k < moduli_.size(); ++k)
    code = code * moduli_[k] + coords[k];
  return code;
}

std::vector<std::uint64_t> TorsionCoordinates::decode(std::uint64_t code) const {
  std::vector<std::uint64_t> out(moduli_.size());
  for (std::size_t k = moduli_.size(); k-- > 0;) {
    out[k] = code % moduli_[k];
    code /= moduli_[k];
  }
  return out;
}

AbelianInvariants quotient_invariants(std::span<const std::uint64_t> moduli,
                                      const std::vector<std::vector<std::uint64_t>>& generators) {
  const std::size_t k = moduli.size();
  IntMatrix rel(0, k);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<mpz_class> row(k);
    row[i] = static_cast<unsigned long>(moduli[i]);
    rel.append_row(std::span<const mpz_class>(row));
  }
  for (const auto& g : generators) {
    if (g.size() != k)
      throw std::invalid_argument("generator length differs from number of moduli");
    std::vector<mpz_class> row(k);
    for (std::size_t i = 0; i < k; ++i)
      row[i] = static_cast<unsigned long>(g[i]);
    rel.append_row(std::span<const mpz_class>(row));
  }
  return cokernel_invariants(rel);
}

AbelianInvariants subgroup_invariants(std::span<const std::uint64_t> moduli,
                                      const std::vector<std::vector<std::uint64_t>>& generators) {
  const std::size_t k = moduli.size();
  const std::size_t g = generators.size();
  if (g == 0)
    return {};
  // Relations among the generators: left kernel of [gens; diag(moduli)],
  // projected onto the generator coordinates.
  IntMatrix m(0, k);
  for (const auto& gen : generators) {
    std::vector<mpz_class> row(k);
    for (std::size_t i = 0; i < k; ++i)
      row[i] = static_cast<unsigned long>(gen[i]);
    m.append_row(std::span<const mpz_class>(row));
  }
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<mpz_class> row(k);
    row[i] = static_cast<unsigned long>(moduli[i]);
    m.append_row(std::span<const mpz_class>(row));
  }
  const IntMatrix ker = left_kernel(m);
  IntMatrix rel(0, g);
  for (std::size_t r = 0; r < ker.rows(); ++r) {
    std::vector<mpz_class> row(g);
    for (std::size_t i = 0; i < g; ++i)
      row[i] = ker(r, i);
    rel.append_row(std::span<const mpz_class>(row));
  }
  auto inv = cokernel_invariants(rel);
  if (inv.free_rank != 0)
    throw std::logic_error("subgroup of a finite group reported infinite");
  return inv;
}

QuotientRatio quotient_order_ratio(const IntMatrix& lattice, const IntMatrix& extra) {
  if (lattice.cols() != extra.cols() && extra.rows() != 0)
    throw std::invalid_argument("lattice and extra rows differ in width");
  TorsionCoordinates coords(lattice, lattice.cols());
  std::vector<std::vector<std::uint64_t>> gens;
  std::vector<std::int64_t> v(lattice.cols());
  for (std::size_t r = 0; r < extra.rows(); ++r) {
    for (std::size_t c = 0; c < extra.cols(); ++c)
      v[c] = to_i64(extra(r, c));
    std::vector<std::uint64_t> w;
    if (!coords.coordinates(v, w))
      throw std::logic_error("extra row is not torsion modulo the lattice");
    gens.push_back(std::move(w));
  }
  QuotientRatio out;
  out.quotient = quotient_invariants(coords.moduli(), gens);
  out.ratio = coords.invariants().torsion_order() / out.quotient.torsion_order();
  return out;
}

void write_matrix(std::ostream& os, const IntMatrix& m) {
  os << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c)
      os << (c ? " " : "") << m(r, c);
    os << '\n';
  }
}

IntMatrix read_matrix(std::istream& is) {
  std::size_t rows = 0, cols = 0;
  if (!(is >> rows >> cols))
    throw std::runtime_error("matrix header missing");
  IntMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      std::string tok;
      if (!(is >> tok))
        throw std::runtime_error("matrix truncated");
      m(r, c) = mpz_class(tok);
    }
  return m;
}

}  // namespace linalg
}  // namespace b0kit
