#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "affrank/subspace.hpp"

namespace affrank {

/// Hard caps for a verification pass. The defaults keep the default test
/// suite in the minutes range; raise them explicitly for bigger sweeps.
struct OracleBudget {
  std::uint64_t max_subspaces = 2'000'000;
  std::uint64_t max_points_per_subspace = 100;
};

/// Number of d-dimensional linear subspaces of GF(q)^m, saturating.
std::uint64_t gaussian_binomial(int m, int d, int q);

/// Number of d-dimensional affine subspaces of GF(q)^m:
/// q^(m-d) * gaussian_binomial(m, d, q).
std::uint64_t affine_subspace_count(int m, int d, int q);

/// Visit every d-dimensional affine subspace of M_{rows,cols}(GF(q)) exactly
/// once, in canonical encoding: linear parts by pivot-pattern traversal,
/// offsets reduced to coset representatives. Deterministic order. Throws
/// BudgetError when the total count exceeds budget.max_subspaces.
void enumerate_affine(int rows, int cols, int dim, Field f,
                      const std::function<void(const AffineSubspace&)>& fn,
                      const OracleBudget& budget = {});

/// Exhaustive census of one (ambient, dimension, rank) slice.
struct CensusReport {
  int field_p = 0;
  int rows = 0;
  int cols = 0;
  int subspace_dim = 0;  // dimension scanned
  int codim = 0;
  int r = 0;  // rank threshold investigated
  std::uint64_t total = 0;
  std::map<int, std::uint64_t> lrk_histogram;
  std::uint64_t extremal = 0;  // subspaces with lrk == r
  struct Orbit {
    std::string label;
    std::uint64_t size = 0;
  };
  std::vector<Orbit> orbits;
};

/// Scan every affine subspace of codimension binom(r+1,2) - 1 and confirm none
/// has lower rank >= r; the report carries the full lrk histogram at that
/// codimension. A counterexample raises TheoremFalsifiedError with the
/// offending subspace (must never occur).
CensusReport verify_bound(int rows, int cols, int r, Field f,
                          const OracleBudget& budget = {}, int jobs = 1);

/// Scan every affine subspace of codimension binom(r+1,2) and confirm that
/// each one with lower rank exactly r lies in exactly one canonical orbit
/// (for r >= 2: the embeddings of the canonical family spaces; for r = 1: the
/// trace hyperplanes indexed by rank). Orbit membership is decided against
/// precomputed hash sets of the full canonical orbits. An uncovered or
/// doubly-covered subspace raises TheoremFalsifiedError.
CensusReport verify_classification(int rows, int cols, int r, Field f,
                                   const OracleBudget& budget = {}, int jobs = 1);

/// Census of the maximal all-invertible subspaces of M_r: every affine
/// subspace of dimension binom(r,2) inside GL_r lies in exactly one canonical
/// orbit, and no all-invertible subspace of dimension binom(r,2) + 1 exists.
struct MaximalityReport {
  int field_p = 0;
  int r = 0;
  int max_dim = 0;  // binom(r, 2)
  std::uint64_t scanned_at_max_dim = 0;
  std::uint64_t all_invertible = 0;
  std::vector<CensusReport::Orbit> orbits;
  std::uint64_t scanned_above = 0;
  std::uint64_t all_invertible_above = 0;  // must be zero
};
MaximalityReport verify_maximality(int r, Field f, const OracleBudget& budget = {},
                                   int jobs = 1);

/// Structural facts about alternate matrices, checked at desk scale:
///   even_rank:    every alternate matrix has even rank (exhaustive per n
///                 while q^dim fits the cap, sampled beyond);
///   conjugation:  P Alt_n Q^{-1} == (P Q^T) Alt_n as sets, sampled (P, Q);
///   column_span:  Alt_n X == the orthogonal complement of X, all nonzero X.
struct FactsReport {
  int field_p = 0;
  int max_n = 0;
  std::uint64_t even_rank_checked = 0;
  std::uint64_t conjugation_pairs = 0;
  std::uint64_t column_span_vectors = 0;
  bool all_hold = false;
};
FactsReport verify_facts(Field f, int max_n, int samples, std::uint64_t seed);

}  // namespace affrank
