#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "affrank/quadform.hpp"
#include "affrank/subspace.hpp"

namespace affrank {

inline constexpr std::uint64_t kDefaultSearchBudget = 50'000'000;

/// Result of putting a subspace in roughly-reduced position: the transformed
/// space contains the pivot J = block-diag(I_r, 0), and
/// transform(original, p_left, q_right) == reduced.
struct RoughReduction {
  Matrix p_left;
  Matrix q_right;
  AffineSubspace reduced;
};

/// Find invertible (P, Q) such that P*v*Q contains J, by locating a rank-r
/// member and factoring it. Throws BudgetError if the point scan runs out, or
/// NotExtremalError when v provably contains no rank-r matrix.
RoughReduction rough_reduce(const AffineSubspace& v, int r,
                            std::uint64_t budget = kDefaultLrkBudget);

/// Core space of a roughly-reduced space: I_r + {A : the zero-padded
/// embedding of A lies in the translation space}, plus the dimension split
/// dim v = dim_core + dim_h.
struct CoreSpaceReport {
  AffineSubspace core;  // affine subspace of M_r
  int dim_core;
  int dim_h;
};
CoreSpaceReport core_space(const AffineSubspace& reduced, int r);

/// The column-space invariant of a linear subspace W of M_{n,p}: all x in K^n
/// such that every matrix with column space <x> lies in W. Input must have
/// zero offset. Returns the RREF basis of the invariant, one vector per row.
Matrix kw_invariant(const AffineSubspace& w_linear);

/// Witness that v is equivalent to the i_{n,p}-embedding of a canonical core:
/// transform(v, p_left, q_right) == embed_inp(core, n, p) exactly, where core
/// is the canonical family space named by sig.
struct ClassificationWitness {
  Matrix p_left;
  Matrix q_right;
  AffineSubspace core;
  QuadSignature sig;
};

/// Classification pipeline for codim = binom(r+1,2), lrk = r and r >= 2:
/// rough reduce, extract the core, then solve the linear membership system
/// for the row corrections (rows r+1..n added into rows 1..r) and column
/// corrections (columns r+1..p added into columns 1..r) that make the
/// translation space contain every required rank-one matrix outside the core
/// block. Solvability is guaranteed for extremal input; an inconsistent
/// system or a failed final set-equality check raises TheoremFalsifiedError
/// with a reproducible dump. Preconditions raise NotExtremalError.
ClassificationWitness reduce_to_canonical(const AffineSubspace& v, int r,
                                          std::uint64_t budget = kDefaultSearchBudget);

/// The composition (block sizes + class labels) whose canonical family space
/// is equivalent to w. Precondition: w is a maximal affine subspace of
/// invertible matrices (dim binom(r,2), lrk r), r <= 3. Candidates are tried
/// in lexicographic composition order with a rank-distribution prefilter; an
/// exhaustive search with no match raises TheoremFalsifiedError.
QuadSignature signature(const AffineSubspace& w,
                        std::uint64_t budget = kDefaultSearchBudget);

struct EquivOptions {
  std::uint64_t budget = kDefaultSearchBudget;
  /// Cheap exact invariants (dim, rank multiset of the translation space,
  /// kw dimensions) tried before the witness search. Disable to force the
  /// full search.
  bool use_prefilters = true;
};

/// Decide equivalence: a pair (P, Q) with t == P*s*Q, or nullopt as an
/// exhaustive negative verdict. The search enumerates the right factor Q and
/// solves a linear system for the left factor. Budget exhaustion before the
/// space is covered raises BudgetError.
std::optional<std::pair<Matrix, Matrix>> equiv_decide(const AffineSubspace& s,
                                                      const AffineSubspace& t,
                                                      const EquivOptions& opts = {});

/// r = 1 case: a non-linear hyperplane {M : tr(A^T M) = 1} is determined by
/// the unique matrix A, and its equivalence class by rank(A).
struct TraceHyperplane {
  Matrix defining;  // the matrix A
  int rank;
};

/// Solve for A from a codim-1 affine subspace. Throws NotExtremalError when
/// the input is linear (the functional takes value 0) or not a hyperplane.
TraceHyperplane classify_r1(const AffineSubspace& v);

}  // namespace affrank
