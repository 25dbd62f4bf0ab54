#include "affrank/subspace.hpp"

#include <algorithm>

#include "affrank/quadform.hpp"

namespace affrank {

using detail::mod_add;
using detail::mod_mul;
using detail::mod_neg;
using detail::mod_sub;

namespace {

// offset -= offset[pivot_k] * row_k for each basis row; afterwards the offset
// is zero at every pivot coordinate.
void reduce_offset(std::uint8_t* offset, const std::uint8_t* basis, int d, int m,
                   const std::vector<int>& pivots, int p) {
  const std::uint8_t pp = std::uint8_t(p);
  for (int k = 0; k < d; ++k) {
    const std::uint8_t c = offset[pivots[std::size_t(k)]];
    if (c == 0) continue;
    const std::uint8_t* row = basis + std::size_t(k) * m;
    for (int j = 0; j < m; ++j) offset[j] = mod_sub(offset[j], mod_mul(c, row[j], pp), pp);
  }
}

}  // namespace

AffineSubspace AffineSubspace::from_generators(const Matrix& offset,
                                               const std::vector<Matrix>& generators) {
  const Field f = offset.field();
  const int n = offset.rows();
  const int p_cols = offset.cols();
  const int m = n * p_cols;

  std::vector<std::uint8_t> rows(generators.size() * std::size_t(m));
  for (std::size_t g = 0; g < generators.size(); ++g) {
    const Matrix& gen = generators[g];
    if (gen.field() != f) throw FieldMismatchError("generator over a different field");
    if (gen.rows() != n || gen.cols() != p_cols) {
      throw DimensionError("generator shape does not match offset");
    }
    std::copy(gen.raw().begin(), gen.raw().end(), rows.begin() + std::ptrdiff_t(g) * m);
  }

  std::vector<int> pivots;
  const int d = rref_inplace(rows.data(), int(generators.size()), m, f.modulus(), pivots);
  rows.resize(std::size_t(d) * m);

  std::vector<std::uint8_t> off(offset.raw().begin(), offset.raw().end());
  reduce_offset(off.data(), rows.data(), d, m, pivots, f.modulus());

  AffineSubspace s(f, n, p_cols);
  s.offset_ = std::move(off);
  s.basis_ = std::move(rows);
  s.pivots_ = std::move(pivots);
  return s;
}

AffineSubspace AffineSubspace::from_canonical(Field f, int rows, int cols,
                                              std::vector<std::uint8_t> offset,
                                              std::vector<std::uint8_t> basis,
                                              std::vector<int> pivots) {
  AffineSubspace s(f, rows, cols);
  s.offset_ = std::move(offset);
  s.basis_ = std::move(basis);
  s.pivots_ = std::move(pivots);
  return s;
}

Matrix AffineSubspace::offset_matrix() const {
  return Matrix::from_raw(field_, rows_, cols_, offset_);
}

std::vector<Matrix> AffineSubspace::basis_matrices() const {
  std::vector<Matrix> out;
  out.reserve(pivots_.size());
  for (int i = 0; i < dim(); ++i) out.push_back(Matrix::from_raw(field_, rows_, cols_, basis_row(i)));
  return out;
}

std::span<const std::uint8_t> AffineSubspace::basis_row(int i) const {
  const int m = ambient_dim();
  return std::span<const std::uint8_t>(basis_.data() + std::size_t(i) * m, std::size_t(m));
}

bool AffineSubspace::contains(const Matrix& m) const {
  if (m.field() != field_) throw FieldMismatchError("membership test across fields");
  if (m.rows() != rows_ || m.cols() != cols_) {
    throw DimensionError("membership test across ambient shapes");
  }
  const int md = ambient_dim();
  const std::uint8_t p = std::uint8_t(field_.modulus());
  std::vector<std::uint8_t> v(m.raw().begin(), m.raw().end());
  for (int j = 0; j < md; ++j) v[std::size_t(j)] = mod_sub(v[std::size_t(j)], offset_[std::size_t(j)], p);
  for (int k = 0; k < dim(); ++k) {
    const std::uint8_t c = v[std::size_t(pivots_[std::size_t(k)])];
    if (c == 0) continue;
    const std::uint8_t* row = basis_.data() + std::size_t(k) * md;
    for (int j = 0; j < md; ++j) v[std::size_t(j)] = mod_sub(v[std::size_t(j)], mod_mul(c, row[j], p), p);
  }
  return std::all_of(v.begin(), v.end(), [](std::uint8_t x) { return x == 0; });
}

std::uint64_t AffineSubspace::point_count() const {
  return pow_saturating(std::uint64_t(field_.modulus()), dim());
}

Matrix AffineSubspace::point_at(std::uint64_t index) const {
  const int q = field_.modulus();
  const int d = dim();
  const int m = ambient_dim();
  const std::uint8_t pp = std::uint8_t(q);
  std::vector<std::uint8_t> v(offset_);
  // Big-endian digits: the first basis coefficient is the most significant.
  for (int k = d - 1; k >= 0; --k) {
    const std::uint8_t c = std::uint8_t(index % std::uint64_t(q));
    index /= std::uint64_t(q);
    if (c != 0) {
      const std::uint8_t* row = basis_.data() + std::size_t(k) * m;
      for (int j = 0; j < m; ++j) v[std::size_t(j)] = mod_add(v[std::size_t(j)], mod_mul(c, row[j], pp), pp);
    }
  }
  return Matrix::from_raw(field_, rows_, cols_, v);
}

void AffineSubspace::for_each_point(
    const std::function<bool(std::span<const std::uint8_t>)>& fn) const {
  const int q = field_.modulus();
  const int d = dim();
  const int m = ambient_dim();
  const std::uint8_t pp = std::uint8_t(q);
  std::vector<std::uint8_t> cur(offset_);
  std::vector<std::uint8_t> coeff(std::size_t(d), 0);
  while (true) {
    if (!fn(cur)) return;
    // Increment the coefficient tuple lexicographically (last digit fastest);
    // each unit step on digit k adds basis row k, and the wrap from q-1 to 0
    // is one more addition since q * row == 0.
    int k = d - 1;
    bool done = true;
    while (k >= 0) {
      const std::uint8_t* row = basis_.data() + std::size_t(k) * m;
      for (int j = 0; j < m; ++j) cur[std::size_t(j)] = mod_add(cur[std::size_t(j)], row[j], pp);
      if (++coeff[std::size_t(k)] < q) {
        done = false;
        break;
      }
      coeff[std::size_t(k)] = 0;
      --k;
    }
    if (done) return;
  }
}

int AffineSubspace::lrk(std::uint64_t budget) const {
  const std::uint64_t points = point_count();
  const int n = rows_, p_cols = cols_;
  const int pmod = field_.modulus();
  int best = std::min(n, p_cols) + 1;
  std::uint64_t spent = 0;
  std::vector<std::uint8_t> scratch(std::size_t(n) * p_cols);
  for_each_point([&](std::span<const std::uint8_t> pt) {
    std::copy(pt.begin(), pt.end(), scratch.begin());
    const int r = rank_inplace(scratch.data(), n, p_cols, pmod);
    if (r < best) best = r;
    ++spent;
    return best > 0 && spent < budget;
  });
  if (best == 0) return 0;
  if (points > budget) {
    throw LrkBudgetError("lower-rank scan over " + std::to_string(points) +
                             " members exceeds the budget of rank evaluations; best upper bound " +
                             std::to_string(best),
                         budget, best);
  }
  return best;
}

std::string AffineSubspace::encoding_key() const {
  std::string key;
  key.reserve(8 + offset_.size() + basis_.size());
  key.push_back(char(field_.modulus()));
  key.push_back(char(rows_));
  key.push_back(char(cols_));
  key.push_back(char(dim()));
  key.append(reinterpret_cast<const char*>(offset_.data()), offset_.size());
  key.append(reinterpret_cast<const char*>(basis_.data()), basis_.size());
  return key;
}

AffineSubspace translation(const AffineSubspace& s) {
  std::vector<std::uint8_t> zero(std::size_t(s.ambient_dim()), 0);
  std::vector<std::uint8_t> basis;
  if (s.dim() > 0) {
    basis.assign(s.basis_row(0).data(),
                 s.basis_row(0).data() + std::size_t(s.dim()) * s.ambient_dim());
  }
  return AffineSubspace::from_canonical(s.field(), s.ambient_rows(), s.ambient_cols(),
                                        std::move(zero), std::move(basis), s.pivots());
}

std::vector<Matrix> alternate_basis(Field f, int n) {
  if (n < 1) throw DimensionError("alternate basis needs n >= 1");
  std::vector<Matrix> out;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Matrix m(f, n, n);
      m.set(i, j, 1);
      m.set(j, i, -1);
      out.push_back(std::move(m));
    }
  }
  return out;
}

AffineSubspace vee(const AffineSubspace& a, const AffineSubspace& b) {
  if (a.field() != b.field()) throw FieldMismatchError("vee across fields");
  if (a.ambient_rows() != a.ambient_cols() || b.ambient_rows() != b.ambient_cols()) {
    throw DimensionError("vee needs square ambients");
  }
  const Field f = a.field();
  const int an = a.ambient_rows();
  const int bn = b.ambient_rows();
  const int n = an + bn;

  auto embed_a = [&](const Matrix& m) {
    Matrix r(f, n, n);
    for (int i = 0; i < an; ++i)
      for (int j = 0; j < an; ++j) r.set(i, j, m.at(i, j));
    return r;
  };
  auto embed_b = [&](const Matrix& m) {
    Matrix r(f, n, n);
    for (int i = 0; i < bn; ++i)
      for (int j = 0; j < bn; ++j) r.set(an + i, an + j, m.at(i, j));
    return r;
  };

  Matrix offset = embed_a(a.offset_matrix()) + embed_b(b.offset_matrix());
  std::vector<Matrix> gens;
  for (const Matrix& g : a.basis_matrices()) gens.push_back(embed_a(g));
  for (const Matrix& g : b.basis_matrices()) gens.push_back(embed_b(g));
  for (int i = 0; i < an; ++i)
    for (int j = 0; j < bn; ++j) gens.push_back(Matrix::elementary(f, n, n, i, an + j));
  return AffineSubspace::from_generators(offset, gens);
}

AffineSubspace embed_inp(const AffineSubspace& w, int n, int p) {
  const int r = w.ambient_rows();
  if (w.ambient_cols() != r) throw DimensionError("embedding needs a square core ambient");
  if (n < r || p < r) throw DimensionError("embedding needs n >= r and p >= r");
  const Field f = w.field();

  auto embed = [&](const Matrix& m) {
    Matrix out(f, n, p);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) out.set(i, j, m.at(i, j));
    return out;
  };

  Matrix offset = embed(w.offset_matrix());
  std::vector<Matrix> gens;
  for (const Matrix& g : w.basis_matrices()) gens.push_back(embed(g));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) {
      if (i < r && j < r) continue;
      gens.push_back(Matrix::elementary(f, n, p, i, j));
    }
  }
  return AffineSubspace::from_generators(offset, gens);
}

AffineSubspace transform(const AffineSubspace& s, const Matrix& p_left,
                         const Matrix& q_right) {
  if (p_left.field() != s.field() || q_right.field() != s.field()) {
    throw FieldMismatchError("transform across fields");
  }
  if (p_left.rows() != s.ambient_rows() || p_left.cols() != s.ambient_rows() ||
      q_right.rows() != s.ambient_cols() || q_right.cols() != s.ambient_cols()) {
    throw DimensionError("transform factors do not match the ambient shape");
  }
  if (!p_left.is_invertible()) throw SingularMatrixError("left factor is singular");
  if (!q_right.is_invertible()) throw SingularMatrixError("right factor is singular");

  Matrix offset = p_left * s.offset_matrix() * q_right;
  std::vector<Matrix> gens;
  gens.reserve(std::size_t(s.dim()));
  for (const Matrix& g : s.basis_matrices()) gens.push_back(p_left * g * q_right);
  return AffineSubspace::from_generators(offset, gens);
}

AffineSubspace transpose(const AffineSubspace& s) {
  Matrix offset = s.offset_matrix().transpose();
  std::vector<Matrix> gens;
  for (const Matrix& g : s.basis_matrices()) gens.push_back(g.transpose());
  return AffineSubspace::from_generators(offset, gens);
}

int CanonicalFamilySpec::total() const {
  int t = 0;
  for (const Matrix& b : blocks) t += b.rows();
  return t;
}

AffineSubspace construct_canonical(const CanonicalFamilySpec& spec) {
  if (spec.blocks.empty()) throw InvalidSpecError("canonical family needs at least one block");
  const Field f = spec.blocks.front().field();

  std::vector<AffineSubspace> pieces;
  for (const Matrix& gram : spec.blocks) {
    if (gram.field() != f) throw FieldMismatchError("canonical blocks over different fields");
    if (gram.rows() != gram.cols()) throw InvalidSpecError("canonical block must be square");
    if (!is_nonisotropic(gram)) {
      throw InvalidSpecError("canonical block of size " + std::to_string(gram.rows()) +
                             " is singular or isotropic");
    }
    const int nk = gram.rows();
    std::vector<Matrix> gens;
    for (const Matrix& alt : alternate_basis(f, nk)) gens.push_back(gram * alt);
    pieces.push_back(AffineSubspace::from_generators(Matrix(f, nk, nk), gens));
  }

  AffineSubspace lin = pieces.front();
  for (std::size_t k = 1; k < pieces.size(); ++k) lin = vee(lin, pieces[k]);

  const int r = spec.total();
  return AffineSubspace::from_generators(Matrix::identity(f, r), lin.basis_matrices());
}

AffineSubspace construct_intro_example(int n, int p, int r, Field f) {
  if (r < 1 || r > std::min(n, p)) {
    throw DimensionError("need 1 <= r <= min(n, p)");
  }
  std::vector<Matrix> gens;
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) gens.push_back(Matrix::elementary(f, r, r, i, j));
  AffineSubspace core = AffineSubspace::from_generators(Matrix::identity(f, r), gens);
  return embed_inp(core, n, p);
}

}  // namespace affrank
