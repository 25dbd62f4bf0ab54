#include "affrank/quadform.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace affrank {

using detail::mod_add;
using detail::mod_inv;
using detail::mod_mul;

QuadForm::QuadForm(Matrix gram) : gram_(std::move(gram)) {
  if (gram_.rows() != gram_.cols()) throw DimensionError("gram matrix must be square");
}

FieldElem QuadForm::evaluate(std::span<const std::uint8_t> x) const {
  const int n = dim();
  if (int(x.size()) != n) throw DimensionError("vector length does not match form dimension");
  const int p = field().modulus();
  int acc = 0;
  for (int i = 0; i < n; ++i) {
    if (x[std::size_t(i)] == 0) continue;
    for (int j = 0; j < n; ++j) {
      acc += int(x[std::size_t(i)]) * int(gram_.value_at(i, j)) % p * int(x[std::size_t(j)]);
    }
  }
  return field().elem(acc);
}

Matrix QuadForm::symmetrized() const {
  const Field f = field();
  const FieldElem half = inv(f.elem(2));
  return (gram_ + gram_.transpose()).scaled(half);
}

namespace {

// Shared nonzero-vector sweep: calls fn for every nonzero x in K^n, stops
// when fn returns false. Returns false iff stopped early.
bool for_each_nonzero_vector(Field f, int n,
                             const std::function<bool(std::span<const std::uint8_t>)>& fn) {
  const int p = f.modulus();
  std::vector<std::uint8_t> x(std::size_t(n), 0);
  while (true) {
    int k = n - 1;
    while (k >= 0) {
      if (++x[std::size_t(k)] < p) break;
      x[std::size_t(k)] = 0;
      --k;
    }
    if (k < 0) return true;  // wrapped back to zero: done
    if (!fn(x)) return false;
  }
}

}  // namespace

bool is_nonisotropic(const Matrix& p, std::uint64_t budget) {
  if (p.rows() != p.cols()) throw DimensionError("gram matrix must be square");
  const int n = p.rows();
  const Field f = p.field();
  const std::uint64_t vectors = pow_saturating(std::uint64_t(f.modulus()), n) - 1;
  if (vectors > budget) {
    throw BudgetError("isotropy scan over " + std::to_string(vectors) + " vectors", budget);
  }
  if (p.rank() < n) return false;  // kernel vectors are isotropic
  QuadForm q(p);
  bool clean = for_each_nonzero_vector(f, n, [&](std::span<const std::uint8_t> x) {
    return q.evaluate(x).value != 0;
  });
  return clean;
}

namespace {

// Witness check helpers on symmetrized grams.
bool congruence_holds(const Matrix& sa, const Matrix& sb, const Matrix& r) {
  return sa == r * sb * r.transpose();
}

}  // namespace

std::optional<Matrix> congruent(const Matrix& a, const Matrix& b, std::uint64_t budget) {
  if (a.rows() != a.cols() || b.rows() != b.cols()) {
    throw DimensionError("congruence needs square matrices");
  }
  if (a.field() != b.field()) throw FieldMismatchError("grams over different fields");
  if (a.rows() != b.rows()) throw DimensionError("congruence needs equal sizes");

  const Matrix sa = QuadForm(a).symmetrized();
  const Matrix sb = QuadForm(b).symmetrized();
  const int n = a.rows();
  const Matrix id = Matrix::identity(a.field(), n);
  if (congruence_holds(sa, sb, id)) return id;

  // Rank is a congruence invariant; check before the GL sweep.
  if (sa.rank() != sb.rank()) return std::nullopt;

  std::optional<Matrix> witness;
  enumerate_gl(a.field(), n, budget, [&](const Matrix& r) {
    if (congruence_holds(sa, sb, r)) {
      witness = r;
      return false;
    }
    return true;
  });
  return witness;
}

std::optional<SimilarityWitness> similar(const Matrix& a, const Matrix& b,
                                         std::uint64_t budget) {
  if (a.rows() != a.cols() || b.rows() != b.cols()) {
    throw DimensionError("similarity needs square matrices");
  }
  if (a.field() != b.field()) throw FieldMismatchError("grams over different fields");
  if (a.rows() != b.rows()) throw DimensionError("similarity needs equal sizes");

  const Field f = a.field();
  for (int lam = 1; lam < f.modulus(); ++lam) {
    const FieldElem lambda = f.elem(lam);
    auto r = congruent(a, b.scaled(lambda), budget);
    if (r) return SimilarityWitness{lambda, *r};
  }
  return std::nullopt;
}

namespace {

std::vector<Matrix> nonisotropic_classes_uncached(int dim, Field f, std::uint64_t budget) {
  const int p = f.modulus();
  const int cells = dim * dim;
  const std::uint64_t grams = pow_saturating(std::uint64_t(p), cells);
  if (grams > budget) {
    throw BudgetError("gram enumeration over " + std::to_string(grams) + " matrices", budget);
  }

  std::vector<Matrix> reps;
  std::vector<std::uint8_t> entries(std::size_t(cells), 0);
  while (true) {
    const Matrix m = Matrix::from_raw(f, dim, dim, entries);
    if (is_nonisotropic(m, budget)) {
      bool known = false;
      for (const Matrix& rep : reps) {
        if (similar(m, rep, budget)) {
          known = true;
          break;
        }
      }
      if (!known) reps.push_back(m);
    }
    int k = cells - 1;
    while (k >= 0) {
      if (++entries[std::size_t(k)] < p) break;
      entries[std::size_t(k)] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return reps;
}

}  // namespace

std::vector<Matrix> nonisotropic_classes(int dim, Field f, std::uint64_t budget) {
  if (dim < 1) throw DimensionError("class enumeration needs dim >= 1");
  // The exhaustive quotient is deterministic, so completed results are cached
  // per (dimension, modulus).
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<Matrix>> cache;
  {
    std::scoped_lock lock(mu);
    auto it = cache.find({dim, f.modulus()});
    if (it != cache.end()) return it->second;
  }
  std::vector<Matrix> reps = nonisotropic_classes_uncached(dim, f, budget);
  std::scoped_lock lock(mu);
  return cache.emplace(std::make_pair(dim, f.modulus()), std::move(reps)).first->second;
}

int QuadSignature::total() const {
  int t = 0;
  for (const Part& part : parts) t += part.size;
  return t;
}

std::string QuadSignature::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) os << ",";
    os << parts[i].size;
  }
  return os.str();
}

}  // namespace affrank
