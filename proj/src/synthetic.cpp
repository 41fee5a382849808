#include "promips/synthetic.hpp"

#include "promips/projection.hpp"

namespace promips {

Dataset gaussian_mixture(const MixtureSpec& spec) {
  if (spec.n == 0 || spec.d == 0 || spec.clusters == 0) {
    throw InvalidArgument("gaussian_mixture: n, d and clusters must be positive");
  }
  // Centers and offsets draw from disjoint row ranges of the same stream.
  const std::uint64_t center_rows = spec.clusters;
  std::vector<double> coords(spec.n * spec.d);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const std::size_t cluster = i % spec.clusters;
    for (std::size_t j = 0; j < spec.d; ++j) {
      const double center = spec.center_scale * gaussian_entry(spec.seed, cluster, j);
      coords[i * spec.d + j] =
          center + spec.spread * gaussian_entry(spec.seed, center_rows + i, j);
    }
  }
  return Dataset(spec.d, std::move(coords));
}

}  // namespace promips
