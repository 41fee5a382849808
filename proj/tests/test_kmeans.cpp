#include <doctest.h>

#include <cmath>

#include "promips/kmeans.hpp"
#include "test_support.hpp"

using namespace promips;

TEST_CASE("k equal to the point count") {
  std::mt19937_64 rng(1);
  const Dataset ds = testing::random_dataset(rng, 12, 3);
  const KMeansResult r = kmeans(ds.coords(), 3, 12, 5);
  CHECK(r.inertia == doctest::Approx(0.0));
  std::vector<int> used(12, 0);
  for (auto a : r.assignment) used[a]++;
  for (int u : used) CHECK(u == 1);
}

TEST_CASE("well separated blobs") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::vector<double> pts;
  std::vector<int> truth;
  for (int i = 0; i < 200; ++i) {
    const int blob = i % 2;
    for (int j = 0; j < 4; ++j) pts.push_back((blob ? 10.0 : -10.0) + noise(rng));
    truth.push_back(blob);
  }
  const KMeansResult r = kmeans(pts, 4, 2, 3);
  for (int i = 0; i < 200; ++i) {
    CHECK((r.assignment[i] == r.assignment[0]) == (truth[i] == truth[0]));
  }
}

TEST_CASE("deterministic and consistent") {
  std::mt19937_64 rng(3);
  const Dataset ds = testing::random_dataset(rng, 500, 5);
  const KMeansResult a = kmeans(ds.coords(), 5, 7, 11);
  const KMeansResult b = kmeans(ds.coords(), 5, 7, 11);
  CHECK(a.centroids == b.centroids);
  CHECK(a.assignment == b.assignment);
  CHECK(a.iterations <= 100);
  // Every point sits with its nearest centroid and inertia matches.
  double inertia = 0.0;
  for (PointId i = 0; i < 500; ++i) {
    const double own = squared_l2_distance(ds.point(i), a.centroid(a.assignment[i]));
    inertia += own;
    for (std::size_t c = 0; c < 7; ++c) {
      CHECK(own <= squared_l2_distance(ds.point(i), a.centroid(c)) + 1e-12);
    }
  }
  CHECK(inertia == doctest::Approx(a.inertia).epsilon(1e-9));
}

TEST_CASE("argument errors") {
  const std::vector<double> pts{1, 2, 3, 4};
  CHECK_THROWS_AS(kmeans(pts, 2, 3, 1), InvalidArgument);
  CHECK_THROWS_AS(kmeans(pts, 2, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(kmeans(pts, 3, 1, 1), InvalidArgument);
}
