#pragma once

// Linear algebra over Z/n for composite n via the Howell normal form.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace b0kit::linalg {

/// Dense matrix over Z/n, entries kept in [0, n). Moduli up to 2^31 so that
/// products fit in 64 bits.
class ModMatrix {
 public:
  ModMatrix(std::size_t rows, std::size_t cols, std::uint64_t modulus);
  static ModMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols,
                             std::uint64_t modulus);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::uint64_t modulus() const noexcept { return modulus_; }

  std::uint64_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::uint64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const std::uint64_t> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  void append_row(std::span<const std::uint64_t> row);
  void append_row_signed(std::span<const std::int64_t> row);

  ModMatrix transposed() const;

  friend bool operator==(const ModMatrix&, const ModMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::uint64_t modulus_ = 2;
  std::vector<std::uint64_t> data_;
};

/// Canonical Howell form of the row span: echelon, pivots divide n, entries
/// above pivots reduced, and every span vector with leading zeros in the
/// first j columns is a combination of the rows with that property.
ModMatrix howell_form(const ModMatrix& a);

/// Size of the row span of a matrix already in Howell form.
mpz_class howell_span_order(const ModMatrix& howell);

/// Size of the row span of an arbitrary matrix.
mpz_class span_order(const ModMatrix& a);

/// Howell basis of { x : x * a = 0 } (row vectors of length a.rows()).
ModMatrix howell_left_kernel(const ModMatrix& a);

/// Howell basis of { x : a * x = 0 } (vectors of length a.cols()).
ModMatrix howell_kernel(const ModMatrix& a);

struct ModSolution {
  bool solvable = false;
  std::vector<std::uint64_t> particular;
  ModMatrix kernel{0, 0, 2};
};

/// Solves a * x = b over Z/n. An inconsistent system yields solvable = false.
ModSolution howell_solve(const ModMatrix& a, std::span<const std::uint64_t> b);

/// Reduces `v` against a Howell form; returns true iff v lies in the span.
bool howell_contains(const ModMatrix& howell, std::span<const std::uint64_t> v);

/// Streams rows into a Howell form without holding the full matrix; pending
/// rows are folded in once `chunk` of them have accumulated.
class HowellAccumulator {
 public:
  HowellAccumulator(std::size_t cols, std::uint64_t modulus, std::size_t chunk = 2048);

  void add_row(std::span<const std::uint64_t> row);
  ModMatrix finish();

 private:
  void fold();

  ModMatrix current_;
  ModMatrix pending_;
  std::size_t chunk_;
};

}  // namespace b0kit::linalg
