#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "affrank/matrix.hpp"

namespace affrank {

inline constexpr std::uint64_t kDefaultQuadBudget = 10'000'000;

/// Quadratic form X -> X^T P X attached to a square matrix P. Evaluation uses
/// P exactly as given; P need not be symmetric. In odd characteristic the form
/// is determined by the symmetrization (P + P^T) / 2, which is what congruence
/// and similarity decisions act on.
class QuadForm {
 public:
  explicit QuadForm(Matrix gram);

  const Matrix& gram() const noexcept { return gram_; }
  int dim() const noexcept { return gram_.rows(); }
  Field field() const noexcept { return gram_.field(); }

  FieldElem evaluate(std::span<const std::uint8_t> x) const;
  Matrix symmetrized() const;

 private:
  Matrix gram_;
};

/// True iff X^T P X != 0 for every nonzero X. Singular P is never
/// non-isotropic (any kernel vector annihilates the form), so the predicate is
/// total. Throws BudgetError when q^n - 1 exceeds the budget.
bool is_nonisotropic(const Matrix& p, std::uint64_t budget = kDefaultQuadBudget);

/// Decide congruence of the quadratic forms of A and B: a witness R with
/// sym(A) = R sym(B) R^T, which for symmetric inputs is exactly A = R B R^T.
/// nullopt is an exhaustive negative verdict; running out of budget before
/// exhausting GL_n raises BudgetError instead (inconclusive).
std::optional<Matrix> congruent(const Matrix& a, const Matrix& b,
                                std::uint64_t budget = kDefaultQuadBudget);

struct SimilarityWitness {
  FieldElem lambda;
  Matrix transform;
};

/// Decide similarity: lambda and R with sym(A) = lambda * R sym(B) R^T.
/// Same verdict semantics as congruent().
std::optional<SimilarityWitness> similar(const Matrix& a, const Matrix& b,
                                         std::uint64_t budget = kDefaultQuadBudget);

/// One representative per similarity class of non-isotropic forms in the given
/// dimension; empty when none exist. Each representative is the
/// lexicographically smallest non-isotropic gram of its class under the
/// matrix enumeration order.
std::vector<Matrix> nonisotropic_classes(int dim, Field f,
                                         std::uint64_t budget = kDefaultQuadBudget);

/// Ordered composition labelling an extremal space: block sizes (1 or 2 over
/// odd prime fields) with one similarity-class label per block. Over the
/// supported fields the size determines the class, so labels are always 0;
/// they are kept so the type stays faithful to the general classification.
struct QuadSignature {
  struct Part {
    int size = 1;
    int class_label = 0;
    friend bool operator==(const Part&, const Part&) = default;
  };
  std::vector<Part> parts;

  int total() const;
  std::string to_string() const;  // e.g. "1,1" or "2"
  friend bool operator==(const QuadSignature&, const QuadSignature&) = default;
};

}  // namespace affrank
