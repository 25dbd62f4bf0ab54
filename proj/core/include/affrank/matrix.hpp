#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "affrank/field.hpp"

namespace affrank {

/// Dense exact matrix over GF(p), row-major residues. Value semantics; all
/// operations are pure.
class Matrix {
 public:
  Matrix(Field f, int rows, int cols);  // zero matrix

  static Matrix identity(Field f, int n);
  /// Entries reduced mod p; throws DimensionError on empty or ragged input.
  static Matrix from_rows(Field f, const std::vector<std::vector<long long>>& rows);
  /// Single nonzero entry v at (i, j).
  static Matrix elementary(Field f, int rows, int cols, int i, int j, long long v = 1);
  static Matrix from_raw(Field f, int rows, int cols, std::span<const std::uint8_t> data);

  Field field() const noexcept { return field_; }
  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  std::uint8_t value_at(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }
  FieldElem at(int i, int j) const { return FieldElem{value_at(i, j), std::uint8_t(field_.modulus())}; }
  void set(int i, int j, FieldElem v);
  void set(int i, int j, long long v);

  /// Row-major residue buffer (the vectorization used everywhere).
  std::span<const std::uint8_t> raw() const { return data_; }

  Matrix transpose() const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;
  Matrix scaled(FieldElem c) const;
  Matrix operator-() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

  int rank() const;
  bool is_invertible() const;
  /// Throws SingularMatrixError unless square and invertible.
  Matrix inverse() const;

  struct Echelon {
    Matrix reduced;               // reduced row-echelon form
    std::vector<int> pivot_cols;  // ascending
    Matrix left;                  // invertible; left * M == reduced
  };
  Echelon rref() const;

  /// RREF basis of the right kernel {x : M x = 0}, one vector per row
  /// (nullity x cols; zero rows never appear).
  Matrix right_kernel() const;

  std::string to_string() const;

 private:
  Field field_;
  int rows_, cols_;
  std::vector<std::uint8_t> data_;
};

/// In-place Gaussian elimination on a raw row-major buffer; destroys the
/// buffer and returns the rank. This is the kernel behind every bulk rank
/// scan, so it takes no Matrix object and performs no allocation.
int rank_inplace(std::uint8_t* data, int rows, int cols, int p);

/// RREF on a raw row-major buffer of `nrows` rows of length m. Rows are
/// permuted/reduced in place; the first `rank` rows end up in RREF, the rest
/// are zero. Pivot columns are appended to `pivots`.
int rref_inplace(std::uint8_t* rows, int nrows, int m, int p, std::vector<int>& pivots);

/// Number of invertible n x n matrices over GF(q).
std::uint64_t gl_order(Field f, int n);

/// Stream every invertible n x n matrix exactly once, in lexicographic order
/// of the row-major entry vector; return false from fn to stop early. Throws
/// BudgetError when the p^(n^2) candidate space exceeds `budget`.
void enumerate_gl(Field f, int n, std::uint64_t budget,
                  const std::function<bool(const Matrix&)>& fn);

inline constexpr std::uint64_t kDefaultGlBudget = 100'000'000;

/// Cached GL list in enumeration order for repeated searches. Throws
/// BudgetError when the group is too large to cache (> 50000 elements).
const std::vector<Matrix>& gl_cache(Field f, int n);

/// q^e, saturating at UINT64_MAX.
std::uint64_t pow_saturating(std::uint64_t q, int e);

}  // namespace affrank
