#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace affrank {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands belong to different prime fields.
class FieldMismatchError : public Error {
 public:
  using Error::Error;
};

/// Inversion of the zero element.
class DivisionByZeroError : public Error {
 public:
  using Error::Error;
};

/// Shape or parameter violation (ragged rows, incompatible ambients, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A square matrix required to be invertible is not.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// A canonical family description was rejected (singular or isotropic block).
class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

/// Input fails an extremality precondition (wrong codimension or lower rank).
class NotExtremalError : public Error {
 public:
  using Error::Error;
};

/// An enumeration or search ran out of budget before exhausting its space.
/// Distinct from a negative verdict: nothing has been decided.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, std::uint64_t budget)
      : Error(what), budget_(budget) {}
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t budget_;
};

/// Lower-rank scan ran out of budget. Carries the smallest rank seen so far,
/// which is an upper bound on the true lower rank; never a silent guess.
class LrkBudgetError : public BudgetError {
 public:
  LrkBudgetError(const std::string& what, std::uint64_t budget, int upper)
      : BudgetError(what, budget), upper_(upper) {}
  int sampled_upper_bound() const noexcept { return upper_; }

 private:
  int upper_;
};

/// A machine-checked statement that must hold failed. Carries a reproducible
/// dump (field, encodings, offending data). Must never occur on valid input;
/// when it does, the run aborts loudly instead of patching around it.
class TheoremFalsifiedError : public Error {
 public:
  TheoremFalsifiedError(const std::string& what, std::string dump)
      : Error(what), dump_(std::move(dump)) {}
  const std::string& dump() const noexcept { return dump_; }

 private:
  std::string dump_;
};

}  // namespace affrank
