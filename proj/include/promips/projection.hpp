#pragma once

// 2-stable (Gaussian) random projection from d to m dimensions.

#include <cstdint>
#include <vector>

#include "promips/core.hpp"

namespace promips {

// Standard-normal draw addressed by (seed, row, col). The value does not
// depend on the order in which entries are generated.
double gaussian_entry(std::uint64_t seed, std::uint64_t row, std::uint64_t col);

class ProjectionMatrix {
 public:
  ProjectionMatrix() = default;
  ProjectionMatrix(std::size_t d, std::size_t m, std::uint64_t seed);

  // Rebuild from persisted entries; entries must be m*d long.
  static ProjectionMatrix from_entries(std::size_t d, std::size_t m,
                                       std::uint64_t seed,
                                       std::vector<double> entries);

  std::size_t d() const { return d_; }
  std::size_t m() const { return m_; }
  std::uint64_t seed() const { return seed_; }

  VectorView row(std::size_t i) const { return {entries_.data() + i * d_, d_}; }
  std::span<const double> entries() const { return entries_; }

  Vector project(VectorView point) const;

 private:
  std::size_t d_ = 0;
  std::size_t m_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> entries_;
};

inline ProjectionMatrix make_projection_matrix(std::size_t d, std::size_t m,
                                               std::uint64_t seed) {
  return ProjectionMatrix(d, m, seed);
}

inline Vector project(const ProjectionMatrix& matrix, VectorView point) {
  return matrix.project(point);
}

struct ProjectedDataset {
  Dataset points;  // dimension m
  std::uint64_t matrix_seed = 0;
};

ProjectedDataset project_dataset(const ProjectionMatrix& matrix,
                                 const Dataset& dataset);

// argmin over m in [1, 30] of 2^m (m + 1) + n / 2^m; ties go to the smaller m.
std::size_t optimized_dimension(std::uint64_t n);

}  // namespace promips
