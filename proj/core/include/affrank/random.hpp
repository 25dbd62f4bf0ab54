#pragma once

#include <cstdint>
#include <random>

#include "affrank/matrix.hpp"

namespace affrank {

/// The one source of randomness in the library: an mt19937_64 stream with
/// modulo reduction. Every sampled choice is fully determined by the seed, so
/// fixed-seed runs are reproducible bit for bit across platforms.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }
  /// Uniform-ish index in [0, bound); bound must be positive.
  std::uint64_t next_index(std::uint64_t bound) { return gen_() % bound; }
  std::uint8_t next_residue(Field f) {
    return std::uint8_t(gen_() % std::uint64_t(f.modulus()));
  }

 private:
  std::mt19937_64 gen_;
};

Matrix random_matrix(Field f, int rows, int cols, SeededRng& rng);

/// Rejection-sampled invertible matrix.
Matrix random_invertible(Field f, int n, SeededRng& rng);

}  // namespace affrank
