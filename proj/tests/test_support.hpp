#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "chernreg/complex_linalg.hpp"

namespace chernreg::testing {

inline cplx random_complex(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  return {n(rng), n(rng)};
}

inline CMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double scale = 1.0) {
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_complex(rng, scale);
  return m;
}

/// Identity plus a random perturbation; comfortably invertible.
inline CMatrix random_gl(std::mt19937_64& rng, std::size_t n, double spread = 0.5) {
  return CMatrix::identity(n) + random_matrix(rng, n, n, spread);
}

inline CMatrix random_spd(std::mt19937_64& rng, std::size_t n) {
  const CMatrix a = random_matrix(rng, n, n);
  return a * a.adjoint() + static_cast<double>(n) * CMatrix::identity(n);
}

inline CVector random_vector(std::mt19937_64& rng, std::size_t n) {
  CVector v(n);
  for (auto& x : v) x = random_complex(rng);
  return v;
}

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace chernreg::testing
