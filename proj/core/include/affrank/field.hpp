#pragma once

#include <cstdint>
#include <vector>

#include "affrank/errors.hpp"

namespace affrank {

class Field;

/// Element of GF(p), stored as the canonical residue in [0, p).
struct FieldElem {
  std::uint8_t value = 0;
  std::uint8_t modulus = 3;

  friend bool operator==(FieldElem, FieldElem) = default;
};

namespace detail {

// Raw residue arithmetic; callers guarantee a, b < p.
inline std::uint8_t mod_add(std::uint8_t a, std::uint8_t b, std::uint8_t p) {
  int s = int(a) + int(b);
  return std::uint8_t(s >= p ? s - p : s);
}
inline std::uint8_t mod_sub(std::uint8_t a, std::uint8_t b, std::uint8_t p) {
  int s = int(a) - int(b);
  return std::uint8_t(s < 0 ? s + p : s);
}
inline std::uint8_t mod_neg(std::uint8_t a, std::uint8_t p) {
  return std::uint8_t(a == 0 ? 0 : p - a);
}
inline std::uint8_t mod_mul(std::uint8_t a, std::uint8_t b, std::uint8_t p) {
  return std::uint8_t((int(a) * int(b)) % p);
}
// Table-backed; throws DivisionByZeroError on a == 0.
std::uint8_t mod_inv(std::uint8_t a, std::uint8_t p);
bool mod_is_square(std::uint8_t a, std::uint8_t p);

}  // namespace detail

/// The prime field GF(p) for an odd prime p with 3 <= p <= 31. A Field is a
/// cheap value; inverse and square tables are shared per modulus and are
/// immutable after startup, so concurrent reads are unrestricted.
class Field {
 public:
  /// Throws DimensionError unless p is an odd prime in [3, 31].
  explicit Field(int p);

  int modulus() const noexcept { return p_; }

  /// Canonical element from any integer (negative values allowed).
  FieldElem elem(long long v) const {
    long long r = v % p_;
    if (r < 0) r += p_;
    return FieldElem{std::uint8_t(r), p_};
  }
  FieldElem zero() const { return FieldElem{0, p_}; }
  FieldElem one() const { return FieldElem{1, p_}; }

  friend bool operator==(Field, Field) = default;

 private:
  std::uint8_t p_;
};

/// True iff p is one of the supported odd primes 3..31.
bool is_supported_field(int p);

FieldElem operator+(FieldElem a, FieldElem b);
FieldElem operator-(FieldElem a, FieldElem b);
FieldElem operator*(FieldElem a, FieldElem b);
FieldElem operator-(FieldElem a);

/// Multiplicative inverse; throws DivisionByZeroError on zero.
FieldElem inv(FieldElem a);

/// True iff some x satisfies x^2 = a (zero counts).
bool is_square(FieldElem a);

/// The elements 0, 1, ..., p-1 in that order.
std::vector<FieldElem> enumerate_elems(Field f);

}  // namespace affrank
