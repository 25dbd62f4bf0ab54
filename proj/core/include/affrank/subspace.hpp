#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "affrank/matrix.hpp"

namespace affrank {

inline constexpr std::uint64_t kDefaultLrkBudget = 10'000'000;

/// Affine subspace of M_{n,p}(GF(q)) in canonical encoding: matrices are
/// vectorized row-major; the basis of the translation vector space is stored
/// as the RREF of the coordinate array; the offset is reduced so that its
/// coordinate at every pivot position is zero. Two subspaces are equal as
/// point sets iff their encodings are identical, so encodings are hashable
/// identities for orbit computations.
class AffineSubspace {
 public:
  /// Canonicalize offset + generators. Dependent or duplicate generators
  /// collapse. Throws DimensionError / FieldMismatchError on inconsistent
  /// shapes.
  static AffineSubspace from_generators(const Matrix& offset,
                                        const std::vector<Matrix>& generators);

  /// Trusted constructor for data already in canonical form (basis rows in
  /// RREF with the given pivots, offset zero at pivots). Used by bulk
  /// enumerators that produce canonical encodings directly.
  static AffineSubspace from_canonical(Field f, int rows, int cols,
                                       std::vector<std::uint8_t> offset,
                                       std::vector<std::uint8_t> basis,
                                       std::vector<int> pivots);

  Field field() const noexcept { return field_; }
  int ambient_rows() const noexcept { return rows_; }
  int ambient_cols() const noexcept { return cols_; }
  int ambient_dim() const noexcept { return rows_ * cols_; }
  int dim() const noexcept { return int(pivots_.size()); }
  int codim() const noexcept { return ambient_dim() - dim(); }
  const std::vector<int>& pivots() const noexcept { return pivots_; }

  Matrix offset_matrix() const;
  std::vector<Matrix> basis_matrices() const;
  std::span<const std::uint8_t> offset_raw() const { return offset_; }
  std::span<const std::uint8_t> basis_row(int i) const;

  bool contains(const Matrix& m) const;

  /// q^dim, saturating.
  std::uint64_t point_count() const;
  /// Points in lexicographic order of the basis-coefficient tuple.
  Matrix point_at(std::uint64_t index) const;
  /// Visit every point (vectorized, reused buffer) in enumeration order;
  /// return false from fn to stop early.
  void for_each_point(const std::function<bool(std::span<const std::uint8_t>)>& fn) const;

  /// Exact minimum rank over all members. Throws LrkBudgetError carrying the
  /// best upper bound seen when q^dim exceeds the budget of rank evaluations.
  int lrk(std::uint64_t budget = kDefaultLrkBudget) const;

  /// Canonical bytes (field, shape, dim, offset, basis) — the hashable
  /// identity of the point set.
  std::string encoding_key() const;

  friend bool operator==(const AffineSubspace&, const AffineSubspace&) = default;

 private:
  AffineSubspace(Field f, int rows, int cols) : field_(f), rows_(rows), cols_(cols) {}

  Field field_;
  int rows_, cols_;
  std::vector<std::uint8_t> offset_;  // length rows*cols
  std::vector<std::uint8_t> basis_;   // dim rows of length rows*cols, contiguous
  std::vector<int> pivots_;
};

/// The translation vector space of s as a subspace (zero offset, same basis).
AffineSubspace translation(const AffineSubspace& s);

/// {E_ij - E_ji : i < j}, a basis of the alternate matrices of M_n.
std::vector<Matrix> alternate_basis(Field f, int n);

/// Block upper-triangular combination: diagonal blocks range over a and b,
/// upper-right block free, lower-left zero. dim = dim a + dim b + a_n * b_n.
AffineSubspace vee(const AffineSubspace& a, const AffineSubspace& b);

/// Subspace of M_{n,p} whose top-left r x r block ranges over w and whose
/// remaining entries are free. dim = dim w + n*p - r^2. Requires n, p >= r.
AffineSubspace embed_inp(const AffineSubspace& w, int n, int p);

/// Canonical encoding of P * s * Q. Throws SingularMatrixError unless P and Q
/// are invertible.
AffineSubspace transform(const AffineSubspace& s, const Matrix& p_left,
                         const Matrix& q_right);

AffineSubspace transpose(const AffineSubspace& s);

/// Blocks of a canonical family: square grams P_k, each required to be
/// invertible and non-isotropic.
struct CanonicalFamilySpec {
  std::vector<Matrix> blocks;
  int total() const;
};

/// The affine space I_r + (P_1 Alt_{n_1} v ... v P_q Alt_{n_q}) where Alt_n is
/// the space of alternate matrices: a maximal affine subspace of invertible
/// matrices, of dimension binom(r, 2). Throws InvalidSpecError when a block is
/// singular or isotropic.
AffineSubspace construct_canonical(const CanonicalFamilySpec& spec);

/// The tightness family: top-left r x r block ranging over the unipotent
/// upper-triangular matrices, all other entries free. codim = binom(r+1, 2),
/// lower rank exactly r.
AffineSubspace construct_intro_example(int n, int p, int r, Field f);

}  // namespace affrank
