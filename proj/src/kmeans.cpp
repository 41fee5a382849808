#include "promips/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace promips {

namespace {

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> plus_plus_seeding(std::span<const double> points,
                                      std::size_t dim, std::size_t n,
                                      std::size_t k, std::mt19937_64& rng) {
  auto row = [&](std::size_t i) { return VectorView(points.data() + i * dim, dim); };
  std::vector<double> centroids;
  centroids.reserve(k * dim);
  std::vector<bool> taken(n, false);

  std::size_t first = static_cast<std::size_t>(unit_draw(rng) * static_cast<double>(n));
  if (first >= n) first = n - 1;
  taken[first] = true;
  centroids.insert(centroids.end(), row(first).begin(), row(first).end());

  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = squared_l2_distance(row(i), row(first));

  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += nearest[i];

    std::size_t pick = n;
    if (total > 0.0) {
      const double target = unit_draw(rng) * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += nearest[i];
        if (acc > target && nearest[i] > 0.0) {
          pick = i;
          break;
        }
      }
      if (pick == n) {
        for (std::size_t i = n; i-- > 0;) {
          if (nearest[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    } else {
      // Every remaining point coincides with a centroid.
      for (std::size_t i = 0; i < n; ++i) {
        if (!taken[i]) {
          pick = i;
          break;
        }
      }
    }
    taken[pick] = true;
    const VectorView chosen = row(pick);
    centroids.insert(centroids.end(), chosen.begin(), chosen.end());
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_l2_distance(row(i), chosen));
    }
  }
  return centroids;
}

}  // namespace

KMeansResult kmeans(std::span<const double> points, std::size_t dim,
                    std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options) {
  if (dim == 0 || points.size() % dim != 0) {
    throw InvalidArgument("kmeans: point buffer does not match dimension");
  }
  const std::size_t n = points.size() / dim;
  if (k == 0) throw InvalidArgument("kmeans: k must be >= 1");
  if (k > n) {
    throw InvalidArgument("kmeans: k=" + std::to_string(k) +
                          " exceeds point count " + std::to_string(n));
  }
  auto row = [&](std::size_t i) { return VectorView(points.data() + i * dim, dim); };

  std::mt19937_64 rng(seed);
  KMeansResult result;
  result.dim = dim;
  result.k = k;
  result.centroids = plus_plus_seeding(points, dim, n, k, rng);
  result.assignment.assign(n, 0);

  std::vector<double> point_cost(n);
  auto assign = [&] {
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::uint32_t best_c = 0;
      for (std::size_t c = 0; c < k; ++c) {
        const double dist = squared_l2_distance(row(i), result.centroid(c));
        if (dist < best) {
          best = dist;
          best_c = static_cast<std::uint32_t>(c);
        }
      }
      result.assignment[i] = best_c;
      point_cost[i] = best;
      inertia += best;
    }
    result.inertia = inertia;
    return inertia;
  };

  double previous = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter + 1;
    const double inertia = assign();

    converged =
        inertia == 0.0 ||
        (std::isfinite(previous) && (previous - inertia) <= options.tolerance * previous);
    if (converged) break;
    previous = inertia;

    std::vector<double> sums(k * dim, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = result.assignment[i];
      ++counts[c];
      const VectorView p = row(i);
      for (std::size_t j = 0; j < dim; ++j) sums[c * dim + j] += p[j];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        std::size_t far = 0;
        for (std::size_t i = 1; i < n; ++i) {
          if (point_cost[i] > point_cost[far]) far = i;
        }
        point_cost[far] = 0.0;
        const VectorView p = row(far);
        std::copy(p.begin(), p.end(), result.centroids.begin() + static_cast<std::ptrdiff_t>(c * dim));
        continue;
      }
      for (std::size_t j = 0; j < dim; ++j) {
        result.centroids[c * dim + j] = sums[c * dim + j] / static_cast<double>(counts[c]);
      }
    }
  }
  // Budget exhausted right after a centroid update.
  if (!converged) assign();
  return result;
}

}  // namespace promips
