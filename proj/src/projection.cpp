#include "promips/projection.hpp"

#include <cmath>
#include <numbers>

namespace promips {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in (0, 1]: top 53 bits, shifted away from zero.
double to_unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

double gaussian_entry(std::uint64_t seed, std::uint64_t row,
                      std::uint64_t col) {
  const std::uint64_t key =
      splitmix64(splitmix64(seed) ^ splitmix64(row * 0xd1b54a32d192ed03ULL) ^
                 (col * 0x8cb92ba72f3d8dd7ULL));
  const double u1 = to_unit_open(splitmix64(key));
  const double u2 = to_unit_open(splitmix64(key ^ 0xa0761d6478bd642fULL));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

ProjectionMatrix::ProjectionMatrix(std::size_t d, std::size_t m,
                                   std::uint64_t seed)
    : d_(d), m_(m), seed_(seed) {
  if (d == 0 || m == 0) {
    throw InvalidArgument("projection matrix needs d >= 1 and m >= 1");
  }
  entries_.resize(m * d);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      entries_[i * d + j] = gaussian_entry(seed, i, j);
    }
  }
}

ProjectionMatrix ProjectionMatrix::from_entries(std::size_t d, std::size_t m,
                                                std::uint64_t seed,
                                                std::vector<double> entries) {
  if (d == 0 || m == 0 || entries.size() != d * m) {
    throw InvalidArgument("projection matrix entries do not match m x d");
  }
  ProjectionMatrix matrix;
  matrix.d_ = d;
  matrix.m_ = m;
  matrix.seed_ = seed;
  matrix.entries_ = std::move(entries);
  return matrix;
}

Vector ProjectionMatrix::project(VectorView point) const {
  if (point.size() != d_) {
    throw InvalidArgument("project: point has dimension " +
                          std::to_string(point.size()) + ", matrix expects " +
                          std::to_string(d_));
  }
  Vector out(m_);
  for (std::size_t i = 0; i < m_; ++i) out[i] = inner_product(row(i), point);
  return out;
}

ProjectedDataset project_dataset(const ProjectionMatrix& matrix,
                                 const Dataset& dataset) {
  if (dataset.empty()) throw InvalidArgument("project_dataset: empty dataset");
  std::vector<double> coords;
  coords.reserve(dataset.size() * matrix.m());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const Vector p = matrix.project(dataset.point(static_cast<PointId>(i)));
    coords.insert(coords.end(), p.begin(), p.end());
  }
  return {Dataset(matrix.m(), std::move(coords)), matrix.seed()};
}

std::size_t optimized_dimension(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("optimized_dimension: n must be >= 1");
  std::size_t best_m = 1;
  double best = INFINITY;
  for (std::size_t m = 1; m <= 30; ++m) {
    const double groups = std::ldexp(1.0, static_cast<int>(m));
    const double cost =
        groups * static_cast<double>(m + 1) + static_cast<double>(n) / groups;
    if (cost < best) {
      best = cost;
      best_m = m;
    }
  }
  return best_m;
}

}  // namespace promips
