#pragma once

// Exact integer linear algebra: Smith and Hermite normal forms, abelian
// group invariants of cokernels, and torsion coordinates for lattice
// quotients Z^m / L.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace b0kit {

/// Finitely generated abelian group Z/d1 x ... x Z/dk x Z^r with d1 | d2 | ...
/// and every d_i >= 2.
struct AbelianInvariants {
  std::vector<std::uint64_t> torsion;
  int free_rank = 0;

  bool is_trivial() const noexcept { return torsion.empty() && free_rank == 0; }
  bool is_finite() const noexcept { return free_rank == 0; }
  /// Order of the torsion part.
  std::uint64_t torsion_order() const;
  /// Throws std::domain_error when the group is infinite.
  std::uint64_t order() const;
  /// Throws std::invalid_argument when the divisibility chain is broken.
  void validate() const;
  std::string to_string() const;

  friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;
};

/// Canonical invariant factors of Z/m1 x ... x Z/mk for arbitrary moduli
/// (entries 0 count as free factors, entries 1 are dropped).
AbelianInvariants invariants_from_cyclic_orders(std::span<const std::uint64_t> orders);

namespace linalg {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<long long>>& rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  mpz_class& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const mpz_class& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  void append_row(std::span<const long long> row);
  void append_row(std::span<const mpz_class> row);
  std::vector<mpz_class> row(std::size_t r) const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  /// row[dst] += factor * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const mpz_class& factor);
  /// col[dst] += factor * col[src]
  void add_col_multiple(std::size_t dst, std::size_t src, const mpz_class& factor);
  void negate_row(std::size_t r);

  IntMatrix transposed() const;
  bool is_diagonal() const;
  /// Bareiss fraction-free elimination; square matrices only.
  mpz_class determinant() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<mpz_class> data_;
};

struct SmithForm {
  IntMatrix diagonal;       // D = U * A * V
  IntMatrix left;           // U, unimodular
  IntMatrix right;          // V, unimodular
  IntMatrix right_inverse;  // V^{-1}
  std::size_t rank = 0;

  /// The first `rank` diagonal entries, d1 | d2 | ..., all positive.
  std::vector<mpz_class> invariant_factors() const;
};

SmithForm smith_normal_form(const IntMatrix& a);

/// Row-style Hermite normal form (upper triangular, positive pivots, entries
/// above a pivot reduced into [0, pivot)); zero rows are dropped.
IntMatrix hermite_normal_form(const IntMatrix& a);

/// Invariants of Z^cols / rowspace(a).
AbelianInvariants cokernel_invariants(const IntMatrix& a);

/// Rows of `a` (as integer row vectors) spanning { x : x * a = 0 }.
IntMatrix left_kernel(const IntMatrix& a);

/// Coordinates in torsion(Z^m / L). Maps an integer row vector to its class
/// in Z/d1 x ... x Z/dk (only the factors d_i >= 2 are kept).
class TorsionCoordinates {
 public:
  TorsionCoordinates() = default;
  TorsionCoordinates(const IntMatrix& lattice, std::size_t ambient_dim);

  std::size_t ambient_dim() const noexcept { return ambient_dim_; }
  const std::vector<std::uint64_t>& moduli() const noexcept { return moduli_; }
  const AbelianInvariants& invariants() const noexcept { return invariants_; }

  /// Returns false (and leaves `out` unspecified) when v is not torsion
  /// modulo the lattice.
  bool coordinates(std::span<const std::int64_t> v, std::vector<std::uint64_t>& out) const;
  std::vector<std::uint64_t> coordinates(std::span<const std::int64_t> v) const;

  /// Mixed-radix code of a coordinate vector; requires |torsion| < 2^63.
  std::uint64_t encode(std::span<const std::uint64_t> coords) const;
  std::vector<std::uint64_t> decode(std::uint64_t code) const;

 private:
  std::size_t ambient_dim_ = 0;
  std::size_t rank_ = 0;
  // Columns of V restricted to torsion and free positions, stored as int64.
  std::vector<std::size_t> torsion_columns_;
  std::vector<std::size_t> free_columns_;
  std::vector<std::int64_t> right_;  // ambient_dim x ambient_dim, row-major
  std::vector<std::uint64_t> moduli_;
  AbelianInvariants invariants_;
};

/// Invariants of (Z/d1 x ... x Z/dk) / <generators>.
AbelianInvariants quotient_invariants(std::span<const std::uint64_t> moduli,
                                      const std::vector<std::vector<std::uint64_t>>& generators);

/// Invariants of the subgroup of Z/d1 x ... x Z/dk generated by `generators`.
AbelianInvariants subgroup_invariants(std::span<const std::uint64_t> moduli,
                                      const std::vector<std::vector<std::uint64_t>>& generators);

struct QuotientRatio {
  std::uint64_t ratio = 1;  // |torsion(Z^m/L)| / |torsion(Z^m/(L+S))|
  AbelianInvariants quotient;
};

/// Requires every row of S to be torsion modulo L; throws std::logic_error
/// otherwise.
QuotientRatio quotient_order_ratio(const IntMatrix& lattice, const IntMatrix& extra);

/// Plain-text dump: "rows cols" then the entries row by row.
void write_matrix(std::ostream& os, const IntMatrix& m);
IntMatrix read_matrix(std::istream& is);

}  // namespace linalg
}  // namespace b0kit
