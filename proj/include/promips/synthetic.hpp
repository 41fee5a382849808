#pragma once

#include <cstdint>

#include "promips/core.hpp"

namespace promips {

struct MixtureSpec {
  std::size_t n = 10000;
  std::size_t d = 100;
  std::size_t clusters = 10;
  double center_scale = 1.0;  // cluster centers ~ N(0, center_scale^2 I)
  double spread = 0.3;        // per-coordinate std-dev around a center
  std::uint64_t seed = 7;
};

// Seed-fixed Gaussian mixture; point i belongs to cluster i % clusters.
Dataset gaussian_mixture(const MixtureSpec& spec);

}  // namespace promips
