#include "affrank/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <thread>
#include <unordered_set>

#include "affrank/classify.hpp"
#include "affrank/random.hpp"

namespace affrank {

using detail::mod_add;
using detail::mod_mul;

namespace {

std::uint64_t binom2(int r) { return std::uint64_t(r) * (r - 1) / 2; }

// Compositions of r into parts of size 1 and 2, lexicographic; the index set
// of the canonical orbits at rank r.
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

// Enumeration of canonical linear subspaces by RREF pivot pattern: for a
// pivot set j_1 < ... < j_d the free entries are the positions (row i, col c)
// with c > j_i and c not a pivot. Every assignment of the free entries gives
// exactly one subspace, already in canonical form.
struct PivotPattern {
  std::vector<int> pivots;
  std::vector<std::pair<int, int>> free_cells;  // (basis row, ambient coord)
  std::uint64_t count = 1;                      // q^{#free_cells}
};

std::vector<PivotPattern> all_patterns(int m, int d, int q) {
  std::vector<PivotPattern> out;
  if (d == 0) {
    out.push_back(PivotPattern{});
    return out;
  }
  std::vector<int> idx(std::size_t(d));
  for (int i = 0; i < d; ++i) idx[std::size_t(i)] = i;
  while (true) {
    PivotPattern pat;
    pat.pivots = idx;
    std::vector<bool> is_pivot(std::size_t(m), false);
    for (int c : idx) is_pivot[std::size_t(c)] = true;
    for (int i = 0; i < d; ++i) {
      for (int c = idx[std::size_t(i)] + 1; c < m; ++c) {
        if (!is_pivot[std::size_t(c)]) pat.free_cells.emplace_back(i, c);
      }
    }
    pat.count = pow_saturating(std::uint64_t(q), int(pat.free_cells.size()));
    out.push_back(std::move(pat));

    int k = d - 1;
    while (k >= 0 && idx[std::size_t(k)] == m - d + k) --k;
    if (k < 0) break;
    ++idx[std::size_t(k)];
    for (int i = k + 1; i < d; ++i) idx[std::size_t(i)] = idx[std::size_t(i - 1)] + 1;
  }
  return out;
}

// Write the basis for (pattern, index) into a d x m buffer.
void fill_basis(const PivotPattern& pat, std::uint64_t index, int d, int m, int q,
                std::uint8_t* basis) {
  std::memset(basis, 0, std::size_t(d) * m);
  for (int i = 0; i < d; ++i) basis[std::size_t(i) * m + pat.pivots[std::size_t(i)]] = 1;
  for (std::size_t cell = pat.free_cells.size(); cell-- > 0;) {
    const auto [row, coord] = pat.free_cells[cell];
    basis[std::size_t(row) * m + coord] = std::uint8_t(index % std::uint64_t(q));
    index /= std::uint64_t(q);
  }
}

// Write the offset for (pattern, index): free coordinates are the non-pivot
// positions, pivot positions stay zero (canonical reduced offset).
void fill_offset(const std::vector<int>& nonpivot, std::uint64_t index, int q,
                 std::uint8_t* offset, int m) {
  std::memset(offset, 0, std::size_t(m));
  for (std::size_t k = nonpivot.size(); k-- > 0;) {
    offset[nonpivot[k]] = std::uint8_t(index % std::uint64_t(q));
    index /= std::uint64_t(q);
  }
}

std::vector<int> nonpivot_coords(const std::vector<int>& pivots, int m) {
  std::vector<bool> is_pivot(std::size_t(m), false);
  for (int c : pivots) is_pivot[std::size_t(c)] = true;
  std::vector<int> out;
  for (int c = 0; c < m; ++c) {
    if (!is_pivot[std::size_t(c)]) out.push_back(c);
  }
  return out;
}

// Exact lower rank of the raw subspace (offset + d basis rows) by scanning
// all q^d members with an incremental odometer; early exit at zero.
int lrk_raw(const std::uint8_t* offset, const std::uint8_t* basis, int d, int rows, int cols,
            int q) {
  const int m = rows * cols;
  const std::uint8_t pp = std::uint8_t(q);
  std::uint8_t cur[64];
  std::uint8_t scratch[64];
  std::uint8_t coeff[16];
  std::memcpy(cur, offset, std::size_t(m));
  std::memset(coeff, 0, std::size_t(d));
  int best = std::min(rows, cols) + 1;
  while (true) {
    std::memcpy(scratch, cur, std::size_t(m));
    const int r = rank_inplace(scratch, rows, cols, q);
    if (r < best) {
      best = r;
      if (best == 0) return 0;
    }
    int k = d - 1;
    bool done = true;
    while (k >= 0) {
      const std::uint8_t* row = basis + std::size_t(k) * m;
      for (int j = 0; j < m; ++j) cur[j] = mod_add(cur[j], row[j], pp);
      if (++coeff[k] < q) {
        done = false;
        break;
      }
      coeff[k] = 0;
      --k;
    }
    if (done) return best;
  }
}

// Chunked deterministic parallelism: workers pull chunk indices from an
// atomic counter; per-chunk results merge commutatively so the outcome is
// independent of the worker count.
void run_chunks(std::size_t nchunks, int jobs, const std::function<void(std::size_t)>& body) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || nchunks <= 1) {
    for (std::size_t c = 0; c < nchunks; ++c) body(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  std::exception_ptr first_error;
  std::mutex error_mu;
  const int nworkers = int(std::min<std::size_t>(std::size_t(jobs), nchunks));
  for (int t = 0; t < nworkers; ++t) {
    workers.emplace_back([&] {
      while (true) {
        const std::size_t c = next.fetch_add(1);
        if (c >= nchunks) return;
        try {
          body(c);
        } catch (...) {
          std::scoped_lock lock(error_mu);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct Chunk {
  std::size_t pattern;
  std::uint64_t begin;  // basis-assignment index range within the pattern
  std::uint64_t end;
};

std::vector<Chunk> make_chunks(const std::vector<PivotPattern>& patterns,
                               std::uint64_t target_per_chunk) {
  std::vector<Chunk> chunks;
  for (std::size_t pi = 0; pi < patterns.size(); ++pi) {
    const std::uint64_t total = patterns[pi].count;
    for (std::uint64_t b = 0; b < total; b += target_per_chunk) {
      chunks.push_back(Chunk{pi, b, std::min(total, b + target_per_chunk)});
    }
  }
  return chunks;
}

// Orbit of a subspace under GL_n x GL_p, as the set of canonical encodings.
std::unordered_set<std::string> orbit_encodings(const AffineSubspace& rep, int jobs) {
  const Field f = rep.field();
  const auto& gl_left = gl_cache(f, rep.ambient_rows());
  const auto& gl_right = gl_cache(f, rep.ambient_cols());

  std::vector<std::vector<std::string>> partial(gl_left.size());
  run_chunks(gl_left.size(), jobs, [&](std::size_t li) {
    std::vector<std::string>& local = partial[li];
    local.reserve(gl_right.size());
    for (const Matrix& q : gl_right) {
      local.push_back(transform(rep, gl_left[li], q).encoding_key());
    }
  });
  std::unordered_set<std::string> orbit;
  for (auto& block : partial) {
    for (auto& key : block) orbit.insert(std::move(key));
  }
  return orbit;
}

void check_budget(int rows, int cols, int dim, Field f, const OracleBudget& budget) {
  const int m = rows * cols;
  if (dim < 0 || dim > m) throw DimensionError("subspace dimension out of range");
  if (m > 64 || dim > 16) {
    throw DimensionError("verification scans support ambients up to 64 coordinates");
  }
  const std::uint64_t total = affine_subspace_count(m, dim, f.modulus());
  if (total > budget.max_subspaces) {
    throw BudgetError("enumeration of " + std::to_string(total) +
                          " affine subspaces exceeds the cap",
                      budget.max_subspaces);
  }
  const std::uint64_t points = pow_saturating(std::uint64_t(f.modulus()), dim);
  if (points > budget.max_points_per_subspace) {
    throw BudgetError("per-subspace scan of " + std::to_string(points) +
                          " members exceeds the cap",
                      budget.max_points_per_subspace);
  }
}

}  // namespace

std::uint64_t gaussian_binomial(int m, int d, int q) {
  if (d < 0 || d > m) return 0;
  // Product formula evaluated exactly in 128-bit steps.
  unsigned __int128 num = 1, den = 1;
  for (int i = 0; i < d; ++i) {
    num *= (unsigned __int128)(pow_saturating(std::uint64_t(q), m - i) - 1);
    den *= (unsigned __int128)(pow_saturating(std::uint64_t(q), i + 1) - 1);
    // Keep the fraction reduced enough to avoid overflow at desk scales.
    if ((num / den) > (unsigned __int128)UINT64_MAX) return UINT64_MAX;
  }
  return std::uint64_t(num / den);
}

std::uint64_t affine_subspace_count(int m, int d, int q) {
  const std::uint64_t cosets = pow_saturating(std::uint64_t(q), m - d);
  const std::uint64_t linear = gaussian_binomial(m, d, q);
  if (linear != 0 && cosets > UINT64_MAX / linear) return UINT64_MAX;
  return cosets * linear;
}

void enumerate_affine(int rows, int cols, int dim, Field f,
                      const std::function<void(const AffineSubspace&)>& fn,
                      const OracleBudget& budget) {
  const int m = rows * cols;
  if (dim < 0 || dim > m) throw DimensionError("subspace dimension out of range");
  const std::uint64_t total = affine_subspace_count(m, dim, f.modulus());
  if (total > budget.max_subspaces) {
    throw BudgetError("enumeration of " + std::to_string(total) +
                          " affine subspaces exceeds the cap",
                      budget.max_subspaces);
  }
  const int q = f.modulus();
  const auto patterns = all_patterns(m, dim, q);

  std::vector<std::uint8_t> basis(std::size_t(std::max(dim, 1)) * m);
  std::vector<std::uint8_t> offset(std::size_t(m));
  for (const PivotPattern& pat : patterns) {
    const auto nonpivot = nonpivot_coords(pat.pivots, m);
    const std::uint64_t offsets = pow_saturating(std::uint64_t(q), int(nonpivot.size()));
    for (std::uint64_t b = 0; b < pat.count; ++b) {
      fill_basis(pat, b, dim, m, q, basis.data());
      for (std::uint64_t o = 0; o < offsets; ++o) {
        fill_offset(nonpivot, o, q, offset.data(), m);
        fn(AffineSubspace::from_canonical(
            f, rows, cols, offset,
            std::vector<std::uint8_t>(basis.begin(), basis.begin() + std::ptrdiff_t(dim) * m),
            pat.pivots));
      }
    }
  }
}

CensusReport verify_bound(int rows, int cols, int r, Field f, const OracleBudget& budget,
                          int jobs) {
  const int m = rows * cols;
  const int codim = int(binom2(r + 1)) - 1;
  const int dim = m - codim;
  if (dim < 0) throw DimensionError("ambient too small for the requested rank");
  check_budget(rows, cols, dim, f, budget);

  const int q = f.modulus();
  const auto patterns = all_patterns(m, dim, q);
  const auto chunks = make_chunks(patterns, 4096);

  struct Local {
    std::map<int, std::uint64_t> hist;
    std::uint64_t total = 0;
    std::uint64_t violations = 0;
    std::string first_violation;  // encoding of the offending subspace
  };
  std::vector<Local> locals(chunks.size());

  run_chunks(chunks.size(), jobs, [&](std::size_t ci) {
    const Chunk& ch = chunks[ci];
    const PivotPattern& pat = patterns[ch.pattern];
    Local& loc = locals[ci];
    const auto nonpivot = nonpivot_coords(pat.pivots, m);
    const std::uint64_t offsets = pow_saturating(std::uint64_t(q), int(nonpivot.size()));
    std::vector<std::uint8_t> basis(std::size_t(std::max(dim, 1)) * m);
    std::vector<std::uint8_t> offset(std::size_t(m));
    for (std::uint64_t b = ch.begin; b < ch.end; ++b) {
      fill_basis(pat, b, dim, m, q, basis.data());
      for (std::uint64_t o = 0; o < offsets; ++o) {
        fill_offset(nonpivot, o, q, offset.data(), m);
        const int lrk = lrk_raw(offset.data(), basis.data(), dim, rows, cols, q);
        ++loc.hist[lrk];
        ++loc.total;
        if (lrk >= r) {
          ++loc.violations;
          if (loc.first_violation.empty()) {
            loc.first_violation =
                AffineSubspace::from_canonical(
                    f, rows, cols, offset,
                    std::vector<std::uint8_t>(basis.begin(),
                                              basis.begin() + std::ptrdiff_t(dim) * m),
                    pat.pivots)
                    .offset_matrix()
                    .to_string();
          }
        }
      }
    }
  });

  CensusReport rep;
  rep.field_p = q;
  rep.rows = rows;
  rep.cols = cols;
  rep.subspace_dim = dim;
  rep.codim = codim;
  rep.r = r;
  std::uint64_t violations = 0;
  std::string first;
  for (const Local& loc : locals) {
    rep.total += loc.total;
    for (const auto& [k, v] : loc.hist) rep.lrk_histogram[k] += v;
    violations += loc.violations;
    if (first.empty()) first = loc.first_violation;
  }
  rep.extremal = rep.lrk_histogram.count(r) ? rep.lrk_histogram.at(r) : 0;
  if (violations > 0) {
    throw TheoremFalsifiedError(
        "found " + std::to_string(violations) + " subspaces of codimension " +
            std::to_string(codim) + " with lower rank >= " + std::to_string(r),
        first);
  }
  return rep;
}

CensusReport verify_classification(int rows, int cols, int r, Field f,
                                   const OracleBudget& budget, int jobs) {
  const int m = rows * cols;
  const int codim = int(binom2(r + 1));
  const int dim = m - codim;
  if (dim < 0) throw DimensionError("ambient too small for the requested rank");
  if (r < 1 || r > std::min(rows, cols)) throw DimensionError("rank out of range");
  check_budget(rows, cols, dim, f, budget);
  const int q = f.modulus();

  // Canonical orbit representatives: embeddings of the canonical family
  // spaces for r >= 2, trace hyperplanes indexed by rank for r = 1.
  std::vector<std::string> labels;
  std::vector<AffineSubspace> reps;
  if (r >= 2) {
    for (const auto& comp : compositions_12(r)) {
      CanonicalFamilySpec spec;
      bool feasible = true;
      std::string label;
      for (int size : comp) {
        const auto classes = nonisotropic_classes(size, f);
        if (classes.empty()) {
          feasible = false;
          break;
        }
        spec.blocks.push_back(classes.front());
        label += (label.empty() ? "" : ",") + std::to_string(size);
      }
      if (!feasible) continue;
      reps.push_back(embed_inp(construct_canonical(spec), rows, cols));
      labels.push_back(label);
    }
  } else {
    // {M : tr(A^T M) = 1} with A the canonical matrix of each rank. The
    // translation space is the kernel of the trace functional.
    for (int rank_a = 1; rank_a <= std::min(rows, cols); ++rank_a) {
      std::vector<Matrix> gens;
      for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
          if (i == j && i < rank_a) continue;
          gens.push_back(Matrix::elementary(f, rows, cols, i, j));
        }
      }
      for (int i = 1; i < rank_a; ++i) {
        gens.push_back(Matrix::elementary(f, rows, cols, 0, 0) -
                       Matrix::elementary(f, rows, cols, i, i));
      }
      Matrix offset(f, rows, cols);
      offset.set(0, 0, 1);
      reps.push_back(AffineSubspace::from_generators(offset, gens));
      labels.push_back("rank=" + std::to_string(rank_a));
    }
  }

  std::vector<std::unordered_set<std::string>> orbits;
  orbits.reserve(reps.size());
  for (const AffineSubspace& rep : reps) orbits.push_back(orbit_encodings(rep, jobs));

  const auto patterns = all_patterns(m, dim, q);
  const auto chunks = make_chunks(patterns, 4096);

  struct Local {
    std::map<int, std::uint64_t> hist;
    std::uint64_t total = 0;
    std::vector<std::uint64_t> per_orbit;
    std::uint64_t bad = 0;
    std::string first_bad;
  };
  std::vector<Local> locals(chunks.size());

  run_chunks(chunks.size(), jobs, [&](std::size_t ci) {
    const Chunk& ch = chunks[ci];
    const PivotPattern& pat = patterns[ch.pattern];
    Local& loc = locals[ci];
    loc.per_orbit.assign(orbits.size(), 0);
    const auto nonpivot = nonpivot_coords(pat.pivots, m);
    const std::uint64_t offsets = pow_saturating(std::uint64_t(q), int(nonpivot.size()));
    std::vector<std::uint8_t> basis(std::size_t(std::max(dim, 1)) * m);
    std::vector<std::uint8_t> offset(std::size_t(m));
    for (std::uint64_t b = ch.begin; b < ch.end; ++b) {
      fill_basis(pat, b, dim, m, q, basis.data());
      for (std::uint64_t o = 0; o < offsets; ++o) {
        fill_offset(nonpivot, o, q, offset.data(), m);
        const int lrk = lrk_raw(offset.data(), basis.data(), dim, rows, cols, q);
        ++loc.hist[lrk];
        ++loc.total;
        if (lrk != r) continue;
        AffineSubspace s = AffineSubspace::from_canonical(
            f, rows, cols, offset,
            std::vector<std::uint8_t>(basis.begin(), basis.begin() + std::ptrdiff_t(dim) * m),
            pat.pivots);
        const std::string key = s.encoding_key();
        int hits = 0;
        for (std::size_t k = 0; k < orbits.size(); ++k) {
          if (orbits[k].count(key)) {
            ++hits;
            ++loc.per_orbit[k];
          }
        }
        if (hits != 1) {
          ++loc.bad;
          if (loc.first_bad.empty()) {
            loc.first_bad = "hits=" + std::to_string(hits) + " " + s.offset_matrix().to_string();
          }
        }
      }
    }
  });

  CensusReport rep;
  rep.field_p = q;
  rep.rows = rows;
  rep.cols = cols;
  rep.subspace_dim = dim;
  rep.codim = codim;
  rep.r = r;
  std::vector<std::uint64_t> per_orbit(orbits.size(), 0);
  std::uint64_t bad = 0;
  std::string first_bad;
  for (const Local& loc : locals) {
    rep.total += loc.total;
    for (const auto& [k, v] : loc.hist) rep.lrk_histogram[k] += v;
    if (!loc.per_orbit.empty()) {
      for (std::size_t k = 0; k < per_orbit.size(); ++k) per_orbit[k] += loc.per_orbit[k];
    }
    bad += loc.bad;
    if (first_bad.empty()) first_bad = loc.first_bad;
  }
  rep.extremal = rep.lrk_histogram.count(r) ? rep.lrk_histogram.at(r) : 0;
  for (std::size_t k = 0; k < orbits.size(); ++k) {
    rep.orbits.push_back(CensusReport::Orbit{labels[k], per_orbit[k]});
    // Scan counts must reproduce the orbit sizes exactly.
    if (per_orbit[k] != orbits[k].size()) {
      throw TheoremFalsifiedError(
          "orbit " + labels[k] + " has " + std::to_string(orbits[k].size()) +
              " encodings but the scan found " + std::to_string(per_orbit[k]),
          labels[k]);
    }
  }
  if (bad > 0) {
    throw TheoremFalsifiedError(
        "found " + std::to_string(bad) +
            " extremal subspaces not covered by exactly one canonical orbit",
        first_bad);
  }
  return rep;
}

MaximalityReport verify_maximality(int r, Field f, const OracleBudget& budget, int jobs) {
  if (r < 1) throw DimensionError("rank must be positive");
  const int m = r * r;
  const int max_dim = int(binom2(r));
  check_budget(r, r, max_dim, f, budget);
  check_budget(r, r, max_dim + 1, f, budget);
  const int q = f.modulus();

  // Canonical orbits at the maximal dimension.
  std::vector<std::string> labels;
  std::vector<std::unordered_set<std::string>> orbits;
  for (const auto& comp : compositions_12(r)) {
    CanonicalFamilySpec spec;
    bool feasible = true;
    std::string label;
    for (int size : comp) {
      const auto classes = nonisotropic_classes(size, f);
      if (classes.empty()) {
        feasible = false;
        break;
      }
      spec.blocks.push_back(classes.front());
      label += (label.empty() ? "" : ",") + std::to_string(size);
    }
    if (!feasible) continue;
    orbits.push_back(orbit_encodings(construct_canonical(spec), jobs));
    labels.push_back(label);
  }

  MaximalityReport rep;
  rep.field_p = q;
  rep.r = r;
  rep.max_dim = max_dim;
  std::vector<std::uint64_t> per_orbit(orbits.size(), 0);

  std::uint64_t uncovered = 0;
  std::string first_uncovered;
  enumerate_affine(r, r, max_dim, f, [&](const AffineSubspace& s) {
    ++rep.scanned_at_max_dim;
    std::vector<std::uint8_t> basis;
    if (s.dim() > 0) {
      basis.assign(s.basis_row(0).data(), s.basis_row(0).data() + std::size_t(s.dim()) * m);
    }
    if (lrk_raw(s.offset_raw().data(), basis.data(), s.dim(), r, r, q) != r) return;
    ++rep.all_invertible;
    const std::string key = s.encoding_key();
    int hits = 0;
    for (std::size_t k = 0; k < orbits.size(); ++k) {
      if (orbits[k].count(key)) {
        ++hits;
        ++per_orbit[k];
      }
    }
    if (hits != 1) {
      ++uncovered;
      if (first_uncovered.empty()) first_uncovered = s.offset_matrix().to_string();
    }
  }, budget);

  enumerate_affine(r, r, max_dim + 1, f, [&](const AffineSubspace& s) {
    ++rep.scanned_above;
    std::vector<std::uint8_t> basis;
    if (s.dim() > 0) {
      basis.assign(s.basis_row(0).data(), s.basis_row(0).data() + std::size_t(s.dim()) * m);
    }
    if (lrk_raw(s.offset_raw().data(), basis.data(), s.dim(), r, r, q) == r) {
      ++rep.all_invertible_above;
    }
  }, budget);

  for (std::size_t k = 0; k < orbits.size(); ++k) {
    rep.orbits.push_back(CensusReport::Orbit{labels[k], per_orbit[k]});
  }
  if (uncovered > 0) {
    throw TheoremFalsifiedError(
        "found " + std::to_string(uncovered) +
            " maximal all-invertible subspaces outside the canonical orbits",
        first_uncovered);
  }
  if (rep.all_invertible_above > 0) {
    throw TheoremFalsifiedError(
        "found an all-invertible subspace above the maximal dimension",
        std::to_string(rep.all_invertible_above));
  }
  return rep;
}

FactsReport verify_facts(Field f, int max_n, int samples, std::uint64_t seed) {
  if (max_n < 1) throw DimensionError("need n >= 1");
  const int q = f.modulus();
  FactsReport rep;
  rep.field_p = q;
  rep.max_n = max_n;
  SeededRng rng(seed);

  bool ok = true;
  for (int n = 1; n <= max_n && ok; ++n) {
    const auto alt = alternate_basis(f, n);
    const AffineSubspace alt_space =
        AffineSubspace::from_generators(Matrix(f, n, n), alt);

    // Even rank of every alternate matrix (exhaustive while feasible).
    const std::uint64_t members = alt_space.point_count();
    if (members <= 200'000) {
      alt_space.for_each_point([&](std::span<const std::uint8_t> pt) {
        std::vector<std::uint8_t> scratch(pt.begin(), pt.end());
        const int rk = rank_inplace(scratch.data(), n, n, q);
        ++rep.even_rank_checked;
        if (rk % 2 != 0) ok = false;
        return ok;
      });
    } else {
      for (int s = 0; s < samples && ok; ++s) {
        const Matrix pt = alt_space.point_at(rng.next_index(members));
        ++rep.even_rank_checked;
        if (pt.rank() % 2 != 0) ok = false;
      }
    }
    if (!ok) break;

    // Conjugation identity: P Alt_n Q^{-1} == (P Q^T) Alt_n as sets.
    for (int s = 0; s < samples && ok; ++s) {
      const Matrix p = random_invertible(f, n, rng);
      const Matrix qm = random_invertible(f, n, rng);
      const Matrix q_inv = qm.inverse();
      std::vector<Matrix> lhs_gens, rhs_gens;
      const Matrix pqt = p * qm.transpose();
      for (const Matrix& a : alt) {
        lhs_gens.push_back(p * a * q_inv);
        rhs_gens.push_back(pqt * a);
      }
      const Matrix zero(f, n, n);
      if (!(AffineSubspace::from_generators(zero, lhs_gens) ==
            AffineSubspace::from_generators(zero, rhs_gens))) {
        ok = false;
      }
      ++rep.conjugation_pairs;
    }

    // Column span: Alt_n X equals the orthogonal complement of X.
    if (ok) {
      std::vector<std::uint8_t> x(std::size_t(n), 0);
      while (ok) {
        int k = n - 1;
        while (k >= 0) {
          if (++x[std::size_t(k)] < q) break;
          x[std::size_t(k)] = 0;
          --k;
        }
        if (k < 0) break;
        Matrix xcol(f, n, 1);
        for (int i = 0; i < n; ++i) xcol.set(i, 0, long(x[std::size_t(i)]));
        std::vector<Matrix> image;
        for (const Matrix& a : alt) image.push_back(a * xcol);
        const AffineSubspace image_space =
            AffineSubspace::from_generators(Matrix(f, n, 1), image);
        // {Y : Y^T X = 0} is the right kernel of the 1 x n row X^T.
        Matrix xrow(f, 1, n);
        for (int i = 0; i < n; ++i) xrow.set(0, i, long(x[std::size_t(i)]));
        Matrix perp = xrow.right_kernel();
        std::vector<Matrix> perp_gens;
        const bool trivial = perp.rows() == 1 && perp.rank() == 0;
        if (!trivial) {
          for (int i = 0; i < perp.rows(); ++i) {
            Matrix g(f, n, 1);
            for (int jcol = 0; jcol < n; ++jcol) g.set(jcol, 0, long(perp.value_at(i, jcol)));
            perp_gens.push_back(std::move(g));
          }
        }
        const AffineSubspace perp_space =
            AffineSubspace::from_generators(Matrix(f, n, 1), perp_gens);
        if (!(image_space == perp_space)) ok = false;
        ++rep.column_span_vectors;
      }
    }
  }

  rep.all_hold = ok;
  if (!ok) {
    throw TheoremFalsifiedError("an alternate-matrix structural fact failed",
                                "field=" + std::to_string(q) + " max_n=" + std::to_string(max_n));
  }
  return rep;
}

}  // namespace affrank
