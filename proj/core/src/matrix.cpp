#include "affrank/matrix.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace affrank {

using detail::mod_add;
using detail::mod_inv;
using detail::mod_mul;
using detail::mod_neg;
using detail::mod_sub;

Matrix::Matrix(Field f, int rows, int cols) : field_(f), rows_(rows), cols_(cols) {
  if (rows <= 0 || cols <= 0) {
    throw DimensionError("matrix dimensions must be positive");
  }
  data_.assign(std::size_t(rows) * std::size_t(cols), 0);
}

Matrix Matrix::identity(Field f, int n) {
  Matrix m(f, n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

Matrix Matrix::from_rows(Field f, const std::vector<std::vector<long long>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    throw DimensionError("matrix needs at least one row and one column");
  }
  const int n = int(rows.size());
  const int p = int(rows.front().size());
  Matrix m(f, n, p);
  for (int i = 0; i < n; ++i) {
    if (int(rows[std::size_t(i)].size()) != p) {
      throw DimensionError("ragged rows in matrix literal");
    }
    for (int j = 0; j < p; ++j) m.set(i, j, rows[std::size_t(i)][std::size_t(j)]);
  }
  return m;
}

Matrix Matrix::elementary(Field f, int rows, int cols, int i, int j, long long v) {
  Matrix m(f, rows, cols);
  if (i < 0 || i >= rows || j < 0 || j >= cols) {
    throw DimensionError("elementary position out of range");
  }
  m.set(i, j, v);
  return m;
}

Matrix Matrix::from_raw(Field f, int rows, int cols, std::span<const std::uint8_t> data) {
  Matrix m(f, rows, cols);
  if (data.size() != m.data_.size()) {
    throw DimensionError("raw buffer size does not match shape");
  }
  for (std::size_t k = 0; k < data.size(); ++k) {
    if (data[k] >= f.modulus()) throw DimensionError("raw entry out of range");
    m.data_[k] = data[k];
  }
  return m;
}

void Matrix::set(int i, int j, FieldElem v) {
  if (int(v.modulus) != field_.modulus()) {
    throw FieldMismatchError("entry from a different field");
  }
  data_[std::size_t(i) * cols_ + j] = v.value;
}

void Matrix::set(int i, int j, long long v) { set(i, j, field_.elem(v)); }

Matrix Matrix::transpose() const {
  Matrix t(field_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.data_[std::size_t(j) * rows_ + i] = value_at(i, j);
  return t;
}

namespace {

void require_compatible(const Matrix& a, const Matrix& b, bool same_shape) {
  if (a.field() != b.field()) throw FieldMismatchError("matrices over different fields");
  if (same_shape && (a.rows() != b.rows() || a.cols() != b.cols())) {
    throw DimensionError("matrix shapes differ");
  }
}

}  // namespace

Matrix Matrix::operator+(const Matrix& o) const {
  require_compatible(*this, o, true);
  Matrix r = *this;
  const std::uint8_t p = std::uint8_t(field_.modulus());
  for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = mod_add(r.data_[k], o.data_[k], p);
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  require_compatible(*this, o, true);
  Matrix r = *this;
  const std::uint8_t p = std::uint8_t(field_.modulus());
  for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = mod_sub(r.data_[k], o.data_[k], p);
  return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
  require_compatible(*this, o, false);
  if (cols_ != o.rows_) throw DimensionError("inner dimensions differ in product");
  Matrix r(field_, rows_, o.cols_);
  const int p = field_.modulus();
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < o.cols_; ++j) {
      int acc = 0;
      for (int k = 0; k < cols_; ++k) {
        acc += int(value_at(i, k)) * int(o.value_at(k, j));
      }
      r.data_[std::size_t(i) * o.cols_ + j] = std::uint8_t(acc % p);
    }
  }
  return r;
}

Matrix Matrix::scaled(FieldElem c) const {
  if (int(c.modulus) != field_.modulus()) throw FieldMismatchError("scalar from a different field");
  Matrix r = *this;
  const std::uint8_t p = std::uint8_t(field_.modulus());
  for (auto& v : r.data_) v = mod_mul(v, c.value, p);
  return r;
}

Matrix Matrix::operator-() const {
  Matrix r = *this;
  const std::uint8_t p = std::uint8_t(field_.modulus());
  for (auto& v : r.data_) v = mod_neg(v, p);
  return r;
}

int rank_inplace(std::uint8_t* data, int rows, int cols, int p) {
  const std::uint8_t pp = std::uint8_t(p);
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int i = rank; i < rows; ++i) {
      if (data[std::size_t(i) * cols + col] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != rank) {
      for (int j = col; j < cols; ++j) {
        std::swap(data[std::size_t(pivot) * cols + j], data[std::size_t(rank) * cols + j]);
      }
    }
    const std::uint8_t inv_piv = mod_inv(data[std::size_t(rank) * cols + col], pp);
    for (int i = rank + 1; i < rows; ++i) {
      const std::uint8_t f = data[std::size_t(i) * cols + col];
      if (f == 0) continue;
      const std::uint8_t fac = mod_mul(f, inv_piv, pp);
      for (int j = col; j < cols; ++j) {
        data[std::size_t(i) * cols + j] =
            mod_sub(data[std::size_t(i) * cols + j],
                    mod_mul(fac, data[std::size_t(rank) * cols + j], pp), pp);
      }
    }
    ++rank;
  }
  return rank;
}

int rref_inplace(std::uint8_t* rows, int nrows, int m, int p, std::vector<int>& pivots) {
  const std::uint8_t pp = std::uint8_t(p);
  int rank = 0;
  for (int col = 0; col < m && rank < nrows; ++col) {
    int pivot = -1;
    for (int i = rank; i < nrows; ++i) {
      if (rows[std::size_t(i) * m + col] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != rank) {
      for (int j = 0; j < m; ++j) {
        std::swap(rows[std::size_t(pivot) * m + j], rows[std::size_t(rank) * m + j]);
      }
    }
    std::uint8_t* prow = rows + std::size_t(rank) * m;
    const std::uint8_t inv_piv = mod_inv(prow[col], pp);
    if (inv_piv != 1) {
      for (int j = col; j < m; ++j) prow[j] = mod_mul(prow[j], inv_piv, pp);
    }
    for (int i = 0; i < nrows; ++i) {
      if (i == rank) continue;
      const std::uint8_t f = rows[std::size_t(i) * m + col];
      if (f == 0) continue;
      std::uint8_t* row = rows + std::size_t(i) * m;
      for (int j = col; j < m; ++j) row[j] = mod_sub(row[j], mod_mul(f, prow[j], pp), pp);
    }
    pivots.push_back(col);
    ++rank;
  }
  return rank;
}

int Matrix::rank() const {
  std::vector<std::uint8_t> scratch(data_);
  return rank_inplace(scratch.data(), rows_, cols_, field_.modulus());
}

bool Matrix::is_invertible() const { return rows_ == cols_ && rank() == rows_; }

Matrix::Echelon Matrix::rref() const {
  const int p = field_.modulus();
  const std::uint8_t pp = std::uint8_t(p);
  // Work on [M | I] so the accumulated row operations form the left factor.
  const int width = cols_ + rows_;
  std::vector<std::uint8_t> aug(std::size_t(rows_) * width, 0);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) aug[std::size_t(i) * width + j] = value_at(i, j);
    aug[std::size_t(i) * width + cols_ + i] = 1;
  }

  std::vector<int> pivots;
  int rank = 0;
  for (int col = 0; col < cols_ && rank < rows_; ++col) {
    int pivot = -1;
    for (int i = rank; i < rows_; ++i) {
      if (aug[std::size_t(i) * width + col] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != rank) {
      for (int j = 0; j < width; ++j) {
        std::swap(aug[std::size_t(pivot) * width + j], aug[std::size_t(rank) * width + j]);
      }
    }
    std::uint8_t* prow = aug.data() + std::size_t(rank) * width;
    const std::uint8_t inv_piv = mod_inv(prow[col], pp);
    if (inv_piv != 1) {
      for (int j = 0; j < width; ++j) prow[j] = mod_mul(prow[j], inv_piv, pp);
    }
    for (int i = 0; i < rows_; ++i) {
      if (i == rank) continue;
      const std::uint8_t f = aug[std::size_t(i) * width + col];
      if (f == 0) continue;
      std::uint8_t* row = aug.data() + std::size_t(i) * width;
      for (int j = 0; j < width; ++j) row[j] = mod_sub(row[j], mod_mul(f, prow[j], pp), pp);
    }
    pivots.push_back(col);
    ++rank;
  }

  Matrix reduced(field_, rows_, cols_);
  Matrix left(field_, rows_, rows_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      reduced.data_[std::size_t(i) * cols_ + j] = aug[std::size_t(i) * width + j];
    }
    for (int j = 0; j < rows_; ++j) {
      left.data_[std::size_t(i) * rows_ + j] = aug[std::size_t(i) * width + cols_ + j];
    }
  }
  return Echelon{std::move(reduced), std::move(pivots), std::move(left)};
}

Matrix Matrix::inverse() const {
  if (rows_ != cols_) throw SingularMatrixError("inverse of a non-square matrix");
  Echelon e = rref();
  if (int(e.pivot_cols.size()) != rows_) {
    throw SingularMatrixError("matrix is singular (rank " +
                              std::to_string(e.pivot_cols.size()) + " of " +
                              std::to_string(rows_) + ")");
  }
  return e.left;
}

Matrix Matrix::right_kernel() const {
  Echelon e = rref();
  const int rank = int(e.pivot_cols.size());
  const int nullity = cols_ - rank;
  if (nullity == 0) {
    // Convention: a trivial kernel is reported as a single zero row so the
    // result is still a matrix; callers check rank vs cols when they care.
    Matrix z(field_, 1, cols_);
    return z;
  }
  std::vector<bool> is_pivot(std::size_t(cols_), false);
  for (int c : e.pivot_cols) is_pivot[std::size_t(c)] = true;

  std::vector<std::uint8_t> rows(std::size_t(nullity) * cols_, 0);
  int k = 0;
  for (int freecol = 0; freecol < cols_; ++freecol) {
    if (is_pivot[std::size_t(freecol)]) continue;
    std::uint8_t* row = rows.data() + std::size_t(k) * cols_;
    row[freecol] = 1;
    for (int i = 0; i < rank; ++i) {
      const std::uint8_t v = e.reduced.value_at(i, freecol);
      row[e.pivot_cols[std::size_t(i)]] = mod_neg(v, std::uint8_t(field_.modulus()));
    }
    ++k;
  }
  std::vector<int> pivots;
  const int r2 = rref_inplace(rows.data(), nullity, cols_, field_.modulus(), pivots);
  Matrix out(field_, r2, cols_);
  for (int i = 0; i < r2; ++i)
    for (int j = 0; j < cols_; ++j) out.data_[std::size_t(i) * cols_ + j] = rows[std::size_t(i) * cols_ + j];
  return out;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows_; ++i) {
    os << (i ? " [" : "[");
    for (int j = 0; j < cols_; ++j) os << (j ? "," : "") << int(value_at(i, j));
    os << "]";
  }
  os << "] over GF(" << field_.modulus() << ")";
  return os.str();
}

std::uint64_t pow_saturating(std::uint64_t q, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > UINT64_MAX / q) return UINT64_MAX;
    r *= q;
  }
  return r;
}

std::uint64_t gl_order(Field f, int n) {
  const std::uint64_t q = std::uint64_t(f.modulus());
  const std::uint64_t qn = pow_saturating(q, n);
  if (qn == UINT64_MAX) return UINT64_MAX;
  std::uint64_t order = 1;
  std::uint64_t qi = 1;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t factor = qn - qi;
    if (order > UINT64_MAX / factor) return UINT64_MAX;
    order *= factor;
    qi *= q;
  }
  return order;
}

void enumerate_gl(Field f, int n, std::uint64_t budget,
                  const std::function<bool(const Matrix&)>& fn) {
  if (n < 1) throw DimensionError("enumerate_gl needs n >= 1");
  const int p = f.modulus();
  const int cells = n * n;
  const std::uint64_t candidates = pow_saturating(std::uint64_t(p), cells);
  if (candidates > budget) {
    throw BudgetError("GL enumeration over " + std::to_string(candidates) +
                          " candidates exceeds budget",
                      budget);
  }
  std::vector<std::uint8_t> entries(std::size_t(cells), 0);
  std::vector<std::uint8_t> scratch(std::size_t(cells), 0);
  while (true) {
    std::copy(entries.begin(), entries.end(), scratch.begin());
    if (rank_inplace(scratch.data(), n, n, p) == n) {
      if (!fn(Matrix::from_raw(f, n, n, entries))) return;
    }
    // Odometer on the row-major entry vector, last cell fastest.
    int k = cells - 1;
    while (k >= 0) {
      if (++entries[std::size_t(k)] < p) break;
      entries[std::size_t(k)] = 0;
      --k;
    }
    if (k < 0) break;
  }
}

const std::vector<Matrix>& gl_cache(Field f, int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<Matrix>> cache;

  const std::uint64_t order = gl_order(f, n);
  if (order > 50'000) {
    throw BudgetError("GL(" + std::to_string(n) + ", GF(" + std::to_string(f.modulus()) +
                          ")) has " + std::to_string(order) + " elements, too large to cache",
                      50'000);
  }
  std::scoped_lock lock(mu);
  auto key = std::make_pair(f.modulus(), n);
  auto it = cache.find(key);
  if (it == cache.end()) {
    std::vector<Matrix> mats;
    mats.reserve(std::size_t(order));
    enumerate_gl(f, n, kDefaultGlBudget, [&](const Matrix& m) {
      mats.push_back(m);
      return true;
    });
    it = cache.emplace(key, std::move(mats)).first;
  }
  return it->second;
}

}  // namespace affrank
