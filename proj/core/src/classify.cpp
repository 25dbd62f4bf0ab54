#include "affrank/classify.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace affrank {

using detail::mod_add;
using detail::mod_mul;
using detail::mod_neg;
using detail::mod_sub;

namespace {

// v -= v[pivot_k] * row_k against an RREF basis; the residual is zero exactly
// on members of the span.
void reduce_in_place(std::uint8_t* v, const AffineSubspace& space, int p) {
  const int m = space.ambient_dim();
  const std::uint8_t pp = std::uint8_t(p);
  for (int k = 0; k < space.dim(); ++k) {
    const std::uint8_t c = v[space.pivots()[std::size_t(k)]];
    if (c == 0) continue;
    const std::uint8_t* row = space.basis_row(k).data();
    for (int j = 0; j < m; ++j) v[j] = mod_sub(v[j], mod_mul(c, row[j], pp), pp);
  }
}

std::vector<std::uint8_t> residual_of(const Matrix& mat, const AffineSubspace& space) {
  std::vector<std::uint8_t> v(mat.raw().begin(), mat.raw().end());
  reduce_in_place(v.data(), space, space.field().modulus());
  return v;
}

// One rref over the augmented system [A | b]: particular solution with free
// variables pinned to zero, plus a basis of the homogeneous solutions.
struct LinearSolution {
  bool consistent = false;
  std::vector<std::uint8_t> particular;                 // length cols
  std::vector<std::vector<std::uint8_t>> homogeneous;   // each length cols
};

LinearSolution solve_affine(std::vector<std::uint8_t>& aug, int rows, int cols, int p) {
  // aug is rows x (cols + 1), modified in place.
  const int width = cols + 1;
  std::vector<int> pivots;
  const int rank = rref_inplace(aug.data(), rows, width, p, pivots);
  LinearSolution sol;
  if (!pivots.empty() && pivots.back() == cols) return sol;  // row (0 ... 0 | 1)
  sol.consistent = true;
  sol.particular.assign(std::size_t(cols), 0);
  std::vector<bool> is_pivot(std::size_t(cols), false);
  for (int k = 0; k < rank; ++k) {
    sol.particular[std::size_t(pivots[std::size_t(k)])] = aug[std::size_t(k) * width + cols];
    is_pivot[std::size_t(pivots[std::size_t(k)])] = true;
  }
  for (int freecol = 0; freecol < cols; ++freecol) {
    if (is_pivot[std::size_t(freecol)]) continue;
    std::vector<std::uint8_t> v(std::size_t(cols), 0);
    v[std::size_t(freecol)] = 1;
    for (int k = 0; k < rank; ++k) {
      v[std::size_t(pivots[std::size_t(k)])] =
          mod_neg(aug[std::size_t(k) * width + freecol], std::uint8_t(p));
    }
    sol.homogeneous.push_back(std::move(v));
  }
  return sol;
}

std::uint64_t binom2(int r) { return std::uint64_t(r) * (r - 1) / 2; }

std::string dump_subspace(const AffineSubspace& s) {
  std::ostringstream os;
  os << "field=" << s.field().modulus() << " ambient=" << s.ambient_rows() << "x"
     << s.ambient_cols() << " dim=" << s.dim() << " offset=" << s.offset_matrix().to_string()
     << " basis=[";
  for (const Matrix& b : s.basis_matrices()) os << b.to_string() << ";";
  os << "]";
  return os.str();
}

std::map<int, std::uint64_t> rank_multiset(const AffineSubspace& s) {
  std::map<int, std::uint64_t> hist;
  const int n = s.ambient_rows(), p_cols = s.ambient_cols();
  const int pmod = s.field().modulus();
  std::vector<std::uint8_t> scratch(std::size_t(n) * p_cols);
  s.for_each_point([&](std::span<const std::uint8_t> pt) {
    std::copy(pt.begin(), pt.end(), scratch.begin());
    ++hist[rank_inplace(scratch.data(), n, p_cols, pmod)];
    return true;
  });
  return hist;
}

// All compositions of r into parts of size 1 and 2, lexicographic.
std::vector<std::vector<int>> compositions_12(int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int rest) {
    if (rest == 0) {
      out.push_back(cur);
      return;
    }
    for (int part = 1; part <= std::min(2, rest); ++part) {
      cur.push_back(part);
      rec(rest - part);
      cur.pop_back();
    }
  };
  rec(r);
  return out;
}

Matrix block_diag_extend(const Matrix& top, int total) {
  const Field f = top.field();
  Matrix out = Matrix::identity(f, total);
  for (int i = 0; i < top.rows(); ++i)
    for (int j = 0; j < top.cols(); ++j) out.set(i, j, top.at(i, j));
  return out;
}

// Residuals against t, restricted to t's non-pivot coordinates (the pivot
// coordinates of a residual are always zero, so nothing is lost and the
// linear systems shrink accordingly).
struct TargetContext {
  std::vector<int> nonpivot;                          // ambient coords that are not pivots
  std::vector<std::vector<std::uint8_t>> red_elem;    // per ambient coord: restricted residual
  std::vector<std::uint8_t> offset_res;               // restricted residual of t's offset
};

TargetContext make_target_context(const AffineSubspace& t) {
  const int m = t.ambient_dim();
  const int pmod = t.field().modulus();
  TargetContext ctx;
  std::vector<bool> is_pivot(std::size_t(m), false);
  for (int c : t.pivots()) is_pivot[std::size_t(c)] = true;
  for (int pos = 0; pos < m; ++pos) {
    if (!is_pivot[std::size_t(pos)]) ctx.nonpivot.push_back(pos);
  }
  const int w = int(ctx.nonpivot.size());
  ctx.red_elem.assign(std::size_t(m), {});
  std::vector<std::uint8_t> full(std::size_t(m));
  for (int pos = 0; pos < m; ++pos) {
    std::fill(full.begin(), full.end(), 0);
    full[std::size_t(pos)] = 1;
    reduce_in_place(full.data(), t, pmod);
    std::vector<std::uint8_t> restricted(std::size_t(w));
    for (int k = 0; k < w; ++k) restricted[std::size_t(k)] = full[std::size_t(ctx.nonpivot[std::size_t(k)])];
    ctx.red_elem[std::size_t(pos)] = std::move(restricted);
  }
  ctx.offset_res.assign(std::size_t(w), 0);
  for (int k = 0; k < w; ++k) {
    ctx.offset_res[std::size_t(k)] = t.offset_raw()[std::size_t(ctx.nonpivot[std::size_t(k)])];
  }
  return ctx;
}

}  // namespace

RoughReduction rough_reduce(const AffineSubspace& v, int r, std::uint64_t budget) {
  const int n = v.ambient_rows();
  const int p_cols = v.ambient_cols();
  if (r < 0 || r > std::min(n, p_cols)) throw DimensionError("rank target out of range");
  const Field f = v.field();

  Matrix j(f, n, p_cols);
  for (int i = 0; i < r; ++i) j.set(i, i, 1);
  if (v.contains(j)) {
    return RoughReduction{Matrix::identity(f, n), Matrix::identity(f, p_cols), v};
  }

  std::optional<Matrix> member;
  std::uint64_t spent = 0;
  const int pmod = f.modulus();
  std::vector<std::uint8_t> scratch(std::size_t(n) * p_cols);
  v.for_each_point([&](std::span<const std::uint8_t> pt) {
    ++spent;
    std::copy(pt.begin(), pt.end(), scratch.begin());
    if (rank_inplace(scratch.data(), n, p_cols, pmod) == r) {
      member = Matrix::from_raw(f, n, p_cols, pt);
      return false;
    }
    return spent < budget;
  });
  if (!member) {
    if (v.point_count() > budget) {
      throw BudgetError("no rank-" + std::to_string(r) + " member found within budget", budget);
    }
    throw NotExtremalError("subspace contains no matrix of rank " + std::to_string(r));
  }

  // Drive the member to J by full-pivot row/column elimination, accumulating
  // the operations into P and Q.
  Matrix a = *member;
  Matrix p_left = Matrix::identity(f, n);
  Matrix q_right = Matrix::identity(f, p_cols);
  const std::uint8_t pp = std::uint8_t(pmod);

  auto swap_rows = [](Matrix& mm, int r1, int r2) {
    if (r1 == r2) return;
    for (int c = 0; c < mm.cols(); ++c) {
      FieldElem tv = mm.at(r1, c);
      mm.set(r1, c, mm.at(r2, c));
      mm.set(r2, c, tv);
    }
  };
  auto swap_cols = [](Matrix& mm, int c1, int c2) {
    if (c1 == c2) return;
    for (int rr = 0; rr < mm.rows(); ++rr) {
      FieldElem tv = mm.at(rr, c1);
      mm.set(rr, c1, mm.at(rr, c2));
      mm.set(rr, c2, tv);
    }
  };

  int k = 0;
  while (k < std::min(n, p_cols)) {
    int pi = -1, pj = -1;
    for (int i = k; i < n && pi < 0; ++i) {
      for (int jcol = k; jcol < p_cols; ++jcol) {
        if (a.value_at(i, jcol) != 0) {
          pi = i;
          pj = jcol;
          break;
        }
      }
    }
    if (pi < 0) break;
    swap_rows(a, k, pi);
    swap_rows(p_left, k, pi);
    swap_cols(a, k, pj);
    swap_cols(q_right, k, pj);

    const std::uint8_t inv_piv = detail::mod_inv(a.value_at(k, k), pp);
    if (inv_piv != 1) {
      for (int c = 0; c < p_cols; ++c) a.set(k, c, long(mod_mul(a.value_at(k, c), inv_piv, pp)));
      for (int c = 0; c < n; ++c)
        p_left.set(k, c, long(mod_mul(p_left.value_at(k, c), inv_piv, pp)));
    }
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      const std::uint8_t fval = a.value_at(i, k);
      if (fval == 0) continue;
      for (int c = 0; c < p_cols; ++c) {
        a.set(i, c, long(mod_sub(a.value_at(i, c), mod_mul(fval, a.value_at(k, c), pp), pp)));
      }
      for (int c = 0; c < n; ++c) {
        p_left.set(
            i, c, long(mod_sub(p_left.value_at(i, c), mod_mul(fval, p_left.value_at(k, c), pp), pp)));
      }
    }
    for (int jcol = 0; jcol < p_cols; ++jcol) {
      if (jcol == k) continue;
      const std::uint8_t fval = a.value_at(k, jcol);
      if (fval == 0) continue;
      for (int rr = 0; rr < n; ++rr) {
        a.set(rr, jcol,
              long(mod_sub(a.value_at(rr, jcol), mod_mul(fval, a.value_at(rr, k), pp), pp)));
      }
      for (int rr = 0; rr < p_cols; ++rr) {
        q_right.set(rr, jcol,
                    long(mod_sub(q_right.value_at(rr, jcol), mod_mul(fval, q_right.value_at(rr, k), pp),
                                 pp)));
      }
    }
    ++k;
  }
  return RoughReduction{p_left, q_right, transform(v, p_left, q_right)};
}

CoreSpaceReport core_space(const AffineSubspace& reduced, int r) {
  const int n = reduced.ambient_rows();
  const int p_cols = reduced.ambient_cols();
  if (r < 0 || r > std::min(n, p_cols)) throw DimensionError("rank target out of range");
  const Field f = reduced.field();
  const int d = reduced.dim();

  if (r == 0) {
    AffineSubspace core = AffineSubspace::from_generators(Matrix(f, 1, 1), {});
    return CoreSpaceReport{core, 0, d};
  }

  // Coefficient vectors c with c . basis supported inside the top-left r x r
  // block: the kernel of the restriction to the outside coordinates.
  std::vector<int> outside;
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < p_cols; ++jj)
      if (i >= r || jj >= r) outside.push_back(i * p_cols + jj);

  std::vector<Matrix> core_gens;
  if (d > 0) {
    if (outside.empty()) {
      core_gens = reduced.basis_matrices();  // n == p == r: identity embedding
    } else {
      Matrix restr(f, int(outside.size()), d);
      for (int row = 0; row < int(outside.size()); ++row) {
        for (int c = 0; c < d; ++c) {
          restr.set(row, c, long(reduced.basis_row(c)[std::size_t(outside[std::size_t(row)])]));
        }
      }
      Matrix ker = restr.right_kernel();
      const bool trivial = ker.rows() == 1 && ker.rank() == 0;
      if (!trivial) {
        for (int krow = 0; krow < ker.rows(); ++krow) {
          std::vector<int> acc(std::size_t(n) * p_cols, 0);
          for (int c = 0; c < d; ++c) {
            const int coeff = ker.value_at(krow, c);
            if (coeff == 0) continue;
            auto brow = reduced.basis_row(c);
            for (int t = 0; t < n * p_cols; ++t) acc[std::size_t(t)] += coeff * int(brow[std::size_t(t)]);
          }
          Matrix block(f, r, r);
          for (int i = 0; i < r; ++i)
            for (int jj = 0; jj < r; ++jj) block.set(i, jj, acc[std::size_t(i) * p_cols + jj]);
          core_gens.push_back(std::move(block));
        }
      }
    }
  }

  AffineSubspace core = AffineSubspace::from_generators(Matrix::identity(f, r), core_gens);
  const int dim_core = core.dim();
  return CoreSpaceReport{core, dim_core, d - dim_core};
}

Matrix kw_invariant(const AffineSubspace& w_linear) {
  const auto off = w_linear.offset_raw();
  if (!std::all_of(off.begin(), off.end(), [](std::uint8_t v) { return v == 0; })) {
    throw DimensionError("column-space invariant needs a linear subspace (zero offset)");
  }
  const int n = w_linear.ambient_rows();
  const int p_cols = w_linear.ambient_cols();
  const Field f = w_linear.field();
  const int m = n * p_cols;

  // x belongs to the invariant iff x e_j^T reduces to zero for every j; stack
  // the residuals of the rank-one generators e_i e_j^T into one system on x.
  Matrix system(f, p_cols * m, n);
  for (int i = 0; i < n; ++i) {
    for (int jj = 0; jj < p_cols; ++jj) {
      const Matrix gen = Matrix::elementary(f, n, p_cols, i, jj);
      const std::vector<std::uint8_t> res = residual_of(gen, w_linear);
      for (int t = 0; t < m; ++t) system.set(jj * m + t, i, long(res[std::size_t(t)]));
    }
  }
  Matrix ker = system.right_kernel();
  if (ker.rows() == 1 && ker.rank() == 0) return Matrix(f, 1, n);
  return ker;
}

namespace {

struct SignatureMatch {
  QuadSignature sig;
  AffineSubspace canonical;
  Matrix p_core;
  Matrix q_core;
};

SignatureMatch signature_match(const AffineSubspace& w, std::uint64_t budget) {
  const int r = w.ambient_rows();
  if (w.ambient_cols() != r) throw DimensionError("core must live in a square ambient");
  if (r > 3) throw DimensionError("signature search supports r <= 3");
  if (w.dim() != int(binom2(r))) {
    throw NotExtremalError("core dimension " + std::to_string(w.dim()) + " is not binom(r,2)");
  }
  if (w.lrk(budget) != r) throw NotExtremalError("core contains a singular matrix");

  const Field f = w.field();
  const auto w_ranks = rank_multiset(translation(w));

  for (const std::vector<int>& comp : compositions_12(r)) {
    CanonicalFamilySpec spec;
    bool feasible = true;
    std::vector<QuadSignature::Part> parts;
    for (int size : comp) {
      const std::vector<Matrix> reps = nonisotropic_classes(size, f);
      if (reps.empty()) {
        feasible = false;
        break;
      }
      spec.blocks.push_back(reps.front());
      parts.push_back(QuadSignature::Part{size, 0});
    }
    if (!feasible) continue;
    AffineSubspace cand = construct_canonical(spec);
    if (rank_multiset(translation(cand)) != w_ranks) continue;
    EquivOptions opts;
    opts.budget = budget;
    auto witness = equiv_decide(cand, w, opts);
    if (witness) {
      return SignatureMatch{QuadSignature{parts}, std::move(cand), witness->first,
                            witness->second};
    }
  }
  throw TheoremFalsifiedError("no canonical composition matches a maximal all-invertible space",
                              dump_subspace(w));
}

}  // namespace

QuadSignature signature(const AffineSubspace& w, std::uint64_t budget) {
  return signature_match(w, budget).sig;
}

std::optional<std::pair<Matrix, Matrix>> equiv_decide(const AffineSubspace& s,
                                                      const AffineSubspace& t,
                                                      const EquivOptions& opts) {
  if (s.field() != t.field()) throw FieldMismatchError("equivalence across fields");
  if (s.ambient_rows() != t.ambient_rows() || s.ambient_cols() != t.ambient_cols()) {
    throw DimensionError("equivalence across ambient shapes");
  }
  const Field f = s.field();
  const int n = s.ambient_rows();
  const int p_cols = s.ambient_cols();

  if (s == t) {
    return std::make_pair(Matrix::identity(f, n), Matrix::identity(f, p_cols));
  }
  if (s.dim() != t.dim()) return std::nullopt;

  if (opts.use_prefilters) {
    if (s.point_count() <= 50'000) {
      if (rank_multiset(translation(s)) != rank_multiset(translation(t))) return std::nullopt;
    }
    if (kw_invariant(translation(s)).rank() != kw_invariant(translation(t)).rank()) {
      return std::nullopt;
    }
    if (kw_invariant(transpose(translation(s))).rank() !=
        kw_invariant(transpose(translation(t))).rank()) {
      return std::nullopt;
    }
  }

  const int d = s.dim();
  const int pmod = f.modulus();
  const std::uint8_t pp = std::uint8_t(pmod);
  const int unknowns = n * n;
  const int block = d + 1;  // d basis images plus the offset image
  const TargetContext ctx = make_target_context(t);
  const int w = int(ctx.nonpivot.size());
  const int sysrows = block * w;
  const int width = unknowns + 1;

  const std::vector<Matrix> s_basis = s.basis_matrices();
  const Matrix s_offset = s.offset_matrix();

  std::uint64_t spent = 0;
  std::optional<std::pair<Matrix, Matrix>> found;
  bool out_of_budget = false;

  std::vector<std::uint8_t> aug(std::size_t(sysrows) * width);
  std::vector<std::uint8_t> combo(std::size_t(w));

  enumerate_gl(f, p_cols, kDefaultGlBudget, [&](const Matrix& q) {
    if (++spent > opts.budget) {
      out_of_budget = true;
      return false;
    }
    std::fill(aug.begin(), aug.end(), 0);

    // Equations for one image matrix X: coefficient of unknown P[arow,c] on
    // the restricted residual coordinates is sum_b X[c,b] * red(e_{arow,b}).
    auto fill_block = [&](int block_idx, const Matrix& x) {
      for (int arow = 0; arow < n; ++arow) {
        for (int c = 0; c < n; ++c) {
          std::fill(combo.begin(), combo.end(), 0);
          for (int b = 0; b < p_cols; ++b) {
            const std::uint8_t xv = x.value_at(c, b);
            if (xv == 0) continue;
            const auto& red = ctx.red_elem[std::size_t(arow * p_cols + b)];
            for (int tt = 0; tt < w; ++tt) {
              combo[std::size_t(tt)] = mod_add(combo[std::size_t(tt)],
                                               mod_mul(xv, red[std::size_t(tt)], pp), pp);
            }
          }
          const int col = arow * n + c;
          for (int tt = 0; tt < w; ++tt) {
            aug[(std::size_t(block_idx) * w + tt) * width + col] = combo[std::size_t(tt)];
          }
        }
      }
    };

    for (int i = 0; i < d; ++i) fill_block(i, s_basis[std::size_t(i)] * q);
    fill_block(d, s_offset * q);
    for (int tt = 0; tt < w; ++tt) {
      aug[(std::size_t(d) * w + tt) * width + unknowns] = ctx.offset_res[std::size_t(tt)];
    }

    LinearSolution sol = solve_affine(aug, sysrows, unknowns, pmod);
    if (!sol.consistent) return true;

    const std::uint64_t combos = pow_saturating(std::uint64_t(pmod), int(sol.homogeneous.size()));
    for (std::uint64_t c = 0; c < combos; ++c) {
      if (++spent > opts.budget) {
        out_of_budget = true;
        return false;
      }
      std::vector<std::uint8_t> pvec = sol.particular;
      std::uint64_t idx = c;
      for (std::size_t hk = sol.homogeneous.size(); hk-- > 0;) {
        const std::uint8_t digit = std::uint8_t(idx % std::uint64_t(pmod));
        idx /= std::uint64_t(pmod);
        if (digit == 0) continue;
        for (int tcol = 0; tcol < unknowns; ++tcol) {
          pvec[std::size_t(tcol)] = mod_add(
              pvec[std::size_t(tcol)],
              mod_mul(digit, sol.homogeneous[hk][std::size_t(tcol)], pp), pp);
        }
      }
      Matrix p_left = Matrix::from_raw(f, n, n, pvec);
      if (!p_left.is_invertible()) continue;
      if (transform(s, p_left, q) == t) {
        found = std::make_pair(p_left, q);
        return false;
      }
    }
    return true;
  });

  if (found) return found;
  if (out_of_budget) throw BudgetError("equivalence search inconclusive", opts.budget);
  return std::nullopt;
}

ClassificationWitness reduce_to_canonical(const AffineSubspace& v, int r,
                                          std::uint64_t budget) {
  const int n = v.ambient_rows();
  const int p_cols = v.ambient_cols();
  const Field f = v.field();
  if (r < 2 || r > std::min(n, p_cols)) {
    throw NotExtremalError("classification pipeline needs 2 <= r <= min(n, p)");
  }
  const std::uint64_t expected_codim = std::uint64_t(r + 1) * r / 2;
  if (std::uint64_t(v.codim()) != expected_codim) {
    throw NotExtremalError("codimension " + std::to_string(v.codim()) +
                           " is not binom(r+1,2) = " + std::to_string(expected_codim));
  }
  if (v.lrk(budget) != r) {
    throw NotExtremalError("lower rank is not exactly " + std::to_string(r));
  }

  const RoughReduction rough = rough_reduce(v, r, budget);
  const CoreSpaceReport core_report = core_space(rough.reduced, r);
  if (core_report.dim_core != int(binom2(r))) {
    throw TheoremFalsifiedError("core space of an extremal subspace has dimension " +
                                    std::to_string(core_report.dim_core) +
                                    " instead of binom(r,2)",
                                dump_subspace(v));
  }
  const AffineSubspace& core = core_report.core;
  if (core.lrk(budget) != r) {
    throw TheoremFalsifiedError("core space of an extremal subspace contains a singular matrix",
                                dump_subspace(v));
  }

  const AffineSubspace& v0 = rough.reduced;
  const AffineSubspace v0_lin = translation(v0);
  const int pmod = f.modulus();
  const int m = n * p_cols;
  auto residual_elem = [&](int i, int jj) {
    return residual_of(Matrix::elementary(f, n, p_cols, i, jj), v0_lin);
  };

  // Row corrections: for each source row i > r, coefficients lam_1..lam_r such
  // that E_{i,k} - sum_a lam_a E_{a,k} lies in the translation space for every
  // k <= r. Column corrections are the transposed analogue. Extremality
  // guarantees both systems are solvable; an inconsistency falsifies the
  // classification and aborts.
  Matrix row_correction = Matrix::identity(f, n);
  for (int i = r; i < n; ++i) {
    std::vector<std::uint8_t> aug(std::size_t(r) * m * (r + 1), 0);
    for (int k = 0; k < r; ++k) {
      const auto target = residual_elem(i, k);
      for (int t = 0; t < m; ++t) {
        aug[(std::size_t(k) * m + t) * (r + 1) + r] = target[std::size_t(t)];
      }
      for (int arow = 0; arow < r; ++arow) {
        const auto col = residual_elem(arow, k);
        for (int t = 0; t < m; ++t) {
          aug[(std::size_t(k) * m + t) * (r + 1) + arow] = col[std::size_t(t)];
        }
      }
    }
    LinearSolution sol = solve_affine(aug, r * m, r, pmod);
    if (!sol.consistent) {
      throw TheoremFalsifiedError(
          "row-correction system for source row " + std::to_string(i) + " is inconsistent",
          dump_subspace(v0));
    }
    for (int arow = 0; arow < r; ++arow) {
      row_correction.set(arow, i, long(sol.particular[std::size_t(arow)]));
    }
  }

  Matrix col_correction = Matrix::identity(f, p_cols);
  for (int jj = r; jj < p_cols; ++jj) {
    std::vector<std::uint8_t> aug(std::size_t(r) * m * (r + 1), 0);
    for (int k = 0; k < r; ++k) {
      const auto target = residual_elem(k, jj);
      for (int t = 0; t < m; ++t) {
        aug[(std::size_t(k) * m + t) * (r + 1) + r] = target[std::size_t(t)];
      }
      for (int bcol = 0; bcol < r; ++bcol) {
        const auto col = residual_elem(k, bcol);
        for (int t = 0; t < m; ++t) {
          aug[(std::size_t(k) * m + t) * (r + 1) + bcol] = col[std::size_t(t)];
        }
      }
    }
    LinearSolution sol = solve_affine(aug, r * m, r, pmod);
    if (!sol.consistent) {
      throw TheoremFalsifiedError(
          "column-correction system for source column " + std::to_string(jj) + " is inconsistent",
          dump_subspace(v0));
    }
    for (int bcol = 0; bcol < r; ++bcol) {
      col_correction.set(jj, bcol, long(sol.particular[std::size_t(bcol)]));
    }
  }

  const AffineSubspace corrected = transform(v0, row_correction, col_correction);
  const AffineSubspace embedded_core = embed_inp(core, n, p_cols);
  if (!(corrected == embedded_core)) {
    throw TheoremFalsifiedError("corrected space does not equal the embedding of its core space",
                                dump_subspace(v) + " | corrected: " + dump_subspace(corrected) +
                                    " | expected: " + dump_subspace(embedded_core));
  }

  // Fold the core-level witness into the ambient one so the reported core is
  // the canonical family space itself.
  SignatureMatch match = signature_match(core, budget);
  const Matrix p1 = block_diag_extend(match.p_core, n);
  const Matrix q1 = block_diag_extend(match.q_core, p_cols);
  const Matrix p_total = p1.inverse() * row_correction * rough.p_left;
  const Matrix q_total = rough.q_right * col_correction * q1.inverse();

  // Mandatory final verification, as sets.
  if (!(transform(v, p_total, q_total) == embed_inp(match.canonical, n, p_cols))) {
    throw TheoremFalsifiedError("final set-equality verification failed", dump_subspace(v));
  }
  return ClassificationWitness{p_total, q_total, match.canonical, match.sig};
}

TraceHyperplane classify_r1(const AffineSubspace& v) {
  if (v.codim() != 1) throw NotExtremalError("trace-form classification needs codimension 1");
  const Field f = v.field();
  const int n = v.ambient_rows();
  const int p_cols = v.ambient_cols();
  const int m = n * p_cols;

  // The orthogonal complement of the translation space under <X, Y> =
  // tr(X^T Y) is spanned by one matrix; scale it so the offset pairs to 1.
  Matrix ker(f, 1, m);
  if (v.dim() > 0) {
    Matrix basis_rows(f, v.dim(), m);
    for (int i = 0; i < v.dim(); ++i) {
      auto row = v.basis_row(i);
      for (int t = 0; t < m; ++t) basis_rows.set(i, t, long(row[std::size_t(t)]));
    }
    ker = basis_rows.right_kernel();
  } else {
    ker = Matrix::identity(f, 1);  // m == 1, dim 0
  }
  if (ker.rows() != 1 || ker.rank() != 1) {
    throw NotExtremalError("translation space is not a hyperplane");
  }

  int pairing = 0;
  for (int t = 0; t < m; ++t) {
    pairing += int(ker.value_at(0, t)) * int(v.offset_raw()[std::size_t(t)]);
  }
  const FieldElem c = f.elem(pairing);
  if (c.value == 0) {
    throw NotExtremalError("hyperplane is linear; no defining trace functional equals 1");
  }
  const FieldElem scale = inv(c);
  Matrix a(f, n, p_cols);
  for (int i = 0; i < n; ++i) {
    for (int jj = 0; jj < p_cols; ++jj) {
      a.set(i, jj, long(mod_mul(ker.value_at(0, i * p_cols + jj), scale.value,
                                std::uint8_t(f.modulus()))));
    }
  }
  return TraceHyperplane{a, a.rank()};
}

}  // namespace affrank
