#pragma once

#include <random>
#include <vector>

#include "promips/core.hpp"

namespace promips::testing {

inline Vector random_vector(std::mt19937_64& rng, std::size_t dim, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(dim);
  for (auto& x : v) x = normal(rng);
  return v;
}

inline Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t dim,
                              double scale = 1.0) {
  std::vector<double> coords;
  coords.reserve(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector v = random_vector(rng, dim, scale);
    coords.insert(coords.end(), v.begin(), v.end());
  }
  return Dataset(dim, std::move(coords));
}

// Uniform coordinates in [lo, hi); used where Gaussian data would be too
// well-behaved.
inline Dataset uniform_dataset(std::mt19937_64& rng, std::size_t n, std::size_t dim,
                               double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> uniform(lo, hi);
  std::vector<double> coords(n * dim);
  for (auto& x : coords) x = uniform(rng);
  return Dataset(dim, std::move(coords));
}

}  // namespace promips::testing
