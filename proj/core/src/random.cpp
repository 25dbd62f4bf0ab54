#include "affrank/random.hpp"

namespace affrank {

Matrix random_matrix(Field f, int rows, int cols, SeededRng& rng) {
  Matrix m(f, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.set(i, j, static_cast<long long>(rng.next_residue(f)));
  return m;
}

Matrix random_invertible(Field f, int n, SeededRng& rng) {
  while (true) {
    Matrix m = random_matrix(f, n, n, rng);
    if (m.is_invertible()) return m;
  }
}

}  // namespace affrank
