#include "b0kit/howell.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>

namespace b0kit::linalg {

namespace {

using Row = std::vector<std::uint64_t>;

std::uint64_t reduce_signed(std::int64_t v, std::uint64_t n) {
  auto r = v % static_cast<std::int64_t>(n);
  return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(n) : r);
}

// s*a + t*b = g over the integers.
std::int64_t gcdex(std::int64_t a, std::int64_t b, std::int64_t& s, std::int64_t& t) {
  std::int64_t old_r = a, r = b, old_s = 1, cur_s = 0, old_t = 0, cur_t = 1;
  while (r != 0) {
    const auto q = old_r / r;
    old_r = std::exchange(r, old_r - q * r);
    old_s = std::exchange(cur_s, old_s - q * cur_s);
    old_t = std::exchange(cur_t, old_t - q * cur_t);
  }
  s = old_s;
  t = old_t;
  return old_r;
}

// Unit w mod n with w * a = gcd(a, n) (mod n).
std::uint64_t unit_normalizer(std::uint64_t a, std::uint64_t n) {
  const auto d = std::gcd(a, n);
  const auto nd = n / d;
  if (nd == 1)
    return 1;
  std::int64_t s = 0, t = 0;
  gcdex(static_cast<std::int64_t>((a / d) % nd), static_cast<std::int64_t>(nd), s, t);
  auto w = reduce_signed(s, nd);
  while (std::gcd(w, n) != 1)
    w += nd;
  return w % n;
}

class HowellEngine {
 public:
  HowellEngine(std::size_t cols, std::uint64_t n) : cols_(cols), n_(n) {}

  void add(std::span<const std::uint64_t> r) {
    for (auto v : r)
      if (v != 0) {
        rows_.emplace_back(r.begin(), r.end());
        return;
      }
  }

  ModMatrix run() {
    std::size_t r = 0;
    std::vector<std::size_t> pivot_cols;
    for (std::size_t col = 0; col < cols_ && r < rows_.size(); ++col) {
      std::size_t piv = rows_.size();
      for (std::size_t i = r; i < rows_.size(); ++i)
        if (rows_[i][col] != 0) {
          piv = i;
          break;
        }
      if (piv == rows_.size())
        continue;
      std::swap(rows_[r], rows_[piv]);
      for (std::size_t i = r + 1; i < rows_.size(); ++i)
        if (rows_[i][col] != 0)
          combine(rows_[r], rows_[i], col);
      auto& top = rows_[r];
      const auto w = unit_normalizer(top[col], n_);
      if (w != 1)
        scale(top, w, col);
      const auto d = top[col];
      if (d != 1) {
        Row ann(cols_, 0);
        const auto f = n_ / d;
        bool nonzero = false;
        for (std::size_t k = col + 1; k < cols_; ++k) {
          ann[k] = (top[k] * f) % n_;
          nonzero |= ann[k] != 0;
        }
        if (nonzero)
          rows_.push_back(std::move(ann));
      }
      pivot_cols.push_back(col);
      ++r;
    }
    rows_.resize(r);
    for (std::size_t i = 0; i < r; ++i) {
      const auto ci = pivot_cols[i];
      const auto d = rows_[i][ci];
      for (std::size_t j = 0; j < i; ++j) {
        const auto q = rows_[j][ci] / d;
        if (q != 0)
          axpy(rows_[j], n_ - q, rows_[i], ci);
      }
    }
    ModMatrix out(0, cols_, n_);
    for (const auto& row : rows_)
      out.append_row(row);
    return out;
  }

 private:
  // dst += f * src from column `from` onward.
  void axpy(Row& dst, std::uint64_t f, const Row& src, std::size_t from) const {
    for (std::size_t k = from; k < cols_; ++k)
      if (src[k] != 0)
        dst[k] = (dst[k] + f * src[k]) % n_;
  }

  void scale(Row& row, std::uint64_t f, std::size_t from) const {
    for (std::size_t k = from; k < cols_; ++k)
      row[k] = (row[k] * f) % n_;
  }

  // Unimodular 2x2 step leaving a zero in lower[col].
  void combine(Row& upper, Row& lower, std::size_t col) {
    const auto a = upper[col];
    const auto b = lower[col];
    if (b % a == 0) {
      axpy(lower, n_ - (b / a) % n_, upper, col);
      return;
    }
    std::int64_t s = 0, t = 0;
    const auto g = gcdex(static_cast<std::int64_t>(a), static_cast<std::int64_t>(b), s, t);
    const auto us = reduce_signed(s, n_);
    const auto ut = reduce_signed(t, n_);
    const auto uu = reduce_signed(-static_cast<std::int64_t>(b) / g, n_);
    const auto uv = reduce_signed(static_cast<std::int64_t>(a) / g, n_);
    for (std::size_t k = col; k < cols_; ++k) {
      const auto x = upper[k], y = lower[k];
      if (x == 0 && y == 0)
        continue;
      upper[k] = (us * x + ut * y) % n_;
      lower[k] = (uu * x + uv * y) % n_;
    }
  }

  std::size_t cols_;
  std::uint64_t n_;
  std::vector<Row> rows_;
};

}  // namespace

ModMatrix::ModMatrix(std::size_t rows, std::size_t cols, std::uint64_t modulus)
    : rows_(rows), cols_(cols), modulus_(modulus), data_(rows * cols, 0) {
  if (modulus < 2)
    throw std::invalid_argument("modulus must be at least 2");
  if (modulus >= (std::uint64_t{1} << 31))
    throw std::invalid_argument("modulus too large for 64-bit products");
}

ModMatrix ModMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols,
                               std::uint64_t modulus) {
  ModMatrix m(0, cols, modulus);
  for (const auto& r : rows)
    m.append_row_signed(r);
  return m;
}

void ModMatrix::append_row(std::span<const std::uint64_t> row) {
  if (row.size() != cols_)
    throw std::invalid_argument("row length does not match column count");
  for (auto v : row)
    data_.push_back(v % modulus_);
  ++rows_;
}

void ModMatrix::append_row_signed(std::span<const std::int64_t> row) {
  if (row.size() != cols_)
    throw std::invalid_argument("row length does not match column count");
  for (auto v : row)
    data_.push_back(reduce_signed(v, modulus_));
  ++rows_;
}

ModMatrix ModMatrix::transposed() const {
  ModMatrix t(cols_, rows_, modulus_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      t(c, r) = (*this)(r, c);
  return t;
}

ModMatrix howell_form(const ModMatrix& a) {
  HowellEngine engine(a.cols(), a.modulus());
  for (std::size_t r = 0; r < a.rows(); ++r)
    engine.add(a.row(r));
  return engine.run();
}

mpz_class howell_span_order(const ModMatrix& howell) {
  mpz_class order = 1;
  for (std::size_t r = 0; r < howell.rows(); ++r)
    for (std::size_t c = 0; c < howell.cols(); ++c)
      if (howell(r, c) != 0) {
        order *= static_cast<unsigned long>(howell.modulus() / howell(r, c));
        break;
      }
  return order;
}

mpz_class span_order(const ModMatrix& a) { return howell_span_order(howell_form(a)); }

ModMatrix howell_left_kernel(const ModMatrix& a) {
  const std::size_t k = a.rows(), c = a.cols();
  ModMatrix aug(k, c + k, a.modulus());
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t j = 0; j < c; ++j)
      aug(r, j) = a(r, j);
    aug(r, c + r) = 1;
  }
  const auto h = howell_form(aug);
  ModMatrix ker(0, k, a.modulus());
  std::vector<std::uint64_t> tail(k);
  for (std::size_t r = 0; r < h.rows(); ++r) {
    bool zero_head = true;
    for (std::size_t j = 0; j < c && zero_head; ++j)
      zero_head = h(r, j) == 0;
    if (!zero_head)
      continue;
    for (std::size_t j = 0; j < k; ++j)
      tail[j] = h(r, c + j);
    ker.append_row(tail);
  }
  return ker;
}

ModMatrix howell_kernel(const ModMatrix& a) { return howell_left_kernel(a.transposed()); }

ModSolution howell_solve(const ModMatrix& a, std::span<const std::uint64_t> b) {
  if (b.size() != a.rows())
    throw std::invalid_argument("right-hand side length differs from row count");
  const auto n = a.modulus();
  ModMatrix aug(a.rows(), a.cols() + 1, n);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c)
      aug(r, c) = a(r, c);
    aug(r, a.cols()) = (n - b[r] % n) % n;
  }
  const auto ker = howell_kernel(aug);
  const std::size_t last = a.cols();

  ModSolution out;
  out.kernel = howell_kernel(a);
  std::vector<std::int64_t> acc(a.cols() + 1, 0);
  bool have = false;
  for (std::size_t r = 0; r < ker.rows(); ++r) {
    const auto t = static_cast<std::int64_t>(ker(r, last));
    if (t == 0)
      continue;
    if (!have) {
      for (std::size_t j = 0; j <= last; ++j)
        acc[j] = static_cast<std::int64_t>(ker(r, j));
      have = true;
      continue;
    }
    std::int64_t s = 0, u = 0;
    gcdex(acc[last], t, s, u);
    for (std::size_t j = 0; j <= last; ++j) {
      const auto v = static_cast<__int128>(s) * acc[j] + static_cast<__int128>(u) * ker(r, j);
      acc[j] = static_cast<std::int64_t>(v % static_cast<__int128>(n));
    }
  }
  if (!have)
    return out;
  const auto t = reduce_signed(acc[last], n);
  if (std::gcd(t, n) != 1)
    return out;
  std::int64_t inv = 0, dummy = 0;
  gcdex(static_cast<std::int64_t>(t), static_cast<std::int64_t>(n), inv, dummy);
  const auto w = reduce_signed(inv, n);
  out.particular.resize(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j)
    out.particular[j] = (reduce_signed(acc[j], n) * w) % n;
  out.solvable = true;
  return out;
}

bool howell_contains(const ModMatrix& howell, std::span<const std::uint64_t> v) {
  if (v.size() != howell.cols())
    throw std::invalid_argument("vector length differs from column count");
  const auto n = howell.modulus();
  std::vector<std::uint64_t> w(v.begin(), v.end());
  for (auto& x : w)
    x %= n;
  std::size_t col = 0;
  for (std::size_t r = 0; r < howell.rows(); ++r) {
    std::size_t pc = 0;
    while (pc < howell.cols() && howell(r, pc) == 0)
      ++pc;
    for (; col < pc; ++col)
      if (w[col] != 0)
        return false;
    const auto d = howell(r, pc);
    if (w[pc] % d != 0)
      return false;
    const auto q = w[pc] / d;
    for (std::size_t k = pc; k < howell.cols(); ++k)
      w[k] = (w[k] + (n - q) * howell(r, k)) % n;
    col = pc + 1;
  }
  for (; col < w.size(); ++col)
    if (w[col] != 0)
      return false;
  return true;
}

HowellAccumulator::HowellAccumulator(std::size_t cols, std::uint64_t modulus, std::size_t chunk)
    : current_(0, cols, modulus), pending_(0, cols, modulus), chunk_(chunk) {}

void HowellAccumulator::add_row(std::span<const std::uint64_t> row) {
  pending_.append_row(row);
  if (pending_.rows() >= chunk_)
    fold();
}

void HowellAccumulator::fold() {
  if (pending_.rows() == 0)
    return;
  HowellEngine engine(current_.cols(), current_.modulus());
  for (std::size_t r = 0; r < current_.rows(); ++r)
    engine.add(current_.row(r));
  for (std::size_t r = 0; r < pending_.rows(); ++r)
    engine.add(pending_.row(r));
  current_ = engine.run();
  pending_ = ModMatrix(0, current_.cols(), current_.modulus());
}

ModMatrix HowellAccumulator::finish() {
  fold();
  return current_;
}

}  // namespace b0kit::linalg
