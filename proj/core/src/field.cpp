#include "affrank/field.hpp"

#include <array>

namespace affrank {

namespace {

constexpr std::array<int, 10> kSupportedPrimes = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31};

struct FieldTables {
  std::array<std::uint8_t, 32> inv{};
  std::array<bool, 32> square{};
  bool built = false;
};

// One table set per modulus, built once at startup. Immutable afterwards.
const std::array<FieldTables, 32>& all_tables() {
  static const std::array<FieldTables, 32> tables = [] {
    std::array<FieldTables, 32> t{};
    for (int p : kSupportedPrimes) {
      FieldTables& ft = t[std::size_t(p)];
      for (int a = 1; a < p; ++a) {
        for (int b = 1; b < p; ++b) {
          if ((a * b) % p == 1) {
            ft.inv[std::size_t(a)] = std::uint8_t(b);
            break;
          }
        }
      }
      ft.square[0] = true;
      for (int x = 1; x < p; ++x) ft.square[std::size_t((x * x) % p)] = true;
      ft.built = true;
    }
    return t;
  }();
  return tables;
}

void require_same_field(FieldElem a, FieldElem b) {
  if (a.modulus != b.modulus) {
    throw FieldMismatchError("operands live in GF(" + std::to_string(a.modulus) +
                             ") and GF(" + std::to_string(b.modulus) + ")");
  }
}

}  // namespace

namespace detail {

std::uint8_t mod_inv(std::uint8_t a, std::uint8_t p) {
  if (a == 0) {
    throw DivisionByZeroError("inverse of zero in GF(" + std::to_string(p) + ")");
  }
  return all_tables()[p].inv[a];
}

bool mod_is_square(std::uint8_t a, std::uint8_t p) { return all_tables()[p].square[a]; }

}  // namespace detail

bool is_supported_field(int p) {
  for (int q : kSupportedPrimes) {
    if (q == p) return true;
  }
  return false;
}

Field::Field(int p) : p_(std::uint8_t(p)) {
  if (!is_supported_field(p)) {
    throw DimensionError("unsupported field modulus " + std::to_string(p) +
                         " (odd prime in [3, 31] required)");
  }
}

FieldElem operator+(FieldElem a, FieldElem b) {
  require_same_field(a, b);
  return FieldElem{detail::mod_add(a.value, b.value, a.modulus), a.modulus};
}

FieldElem operator-(FieldElem a, FieldElem b) {
  require_same_field(a, b);
  return FieldElem{detail::mod_sub(a.value, b.value, a.modulus), a.modulus};
}

FieldElem operator*(FieldElem a, FieldElem b) {
  require_same_field(a, b);
  return FieldElem{detail::mod_mul(a.value, b.value, a.modulus), a.modulus};
}

FieldElem operator-(FieldElem a) {
  return FieldElem{detail::mod_neg(a.value, a.modulus), a.modulus};
}

FieldElem inv(FieldElem a) {
  return FieldElem{detail::mod_inv(a.value, a.modulus), a.modulus};
}

bool is_square(FieldElem a) { return detail::mod_is_square(a.value, a.modulus); }

std::vector<FieldElem> enumerate_elems(Field f) {
  std::vector<FieldElem> out;
  out.reserve(std::size_t(f.modulus()));
  for (int v = 0; v < f.modulus(); ++v) out.push_back(f.elem(v));
  return out;
}

}  // namespace affrank
