#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "promips/core.hpp"

namespace promips {

struct KMeansOptions {
  int max_iterations = 100;
  double tolerance = 1e-6;  // stop when relative inertia change drops below
};

struct KMeansResult {
  std::size_t dim = 0;
  std::size_t k = 0;
  std::vector<double> centroids;          // k x dim, row-major
  std::vector<std::uint32_t> assignment;  // one cluster per input point
  double inertia = 0.0;
  int iterations = 0;

  VectorView centroid(std::size_t c) const {
    return {centroids.data() + c * dim, dim};
  }
};

// Lloyd's algorithm with k-means++ seeding. `points` is row-major with `dim`
// columns. Deterministic for a given seed. Empty clusters are re-seeded with
// the point farthest from its current centroid.
KMeansResult kmeans(std::span<const double> points, std::size_t dim,
                    std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options = {});

}  // namespace promips
