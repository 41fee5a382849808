#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "promips/bench.hpp"
#include "promips/search.hpp"
#include "test_support.hpp"

using namespace promips;

namespace {

IDistanceIndex small_index(const Dataset& ds, std::size_t m, std::uint64_t seed) {
  IndexConfig cfg;
  cfg.m = m;
  cfg.seed = seed;
  cfg.k_p = 3;
  cfg.n_key = 10;
  cfg.k_sp = 3;
  return build_index(ds, cfg);
}

}  // namespace

TEST_CASE("brute_force_mip") {
  const Dataset ds = Dataset::from_rows({{1, 0}, {0, 1}});
  const QueryResult r = brute_force_mip(ds, Vector{1, 0}, 1);
  REQUIRE(r.top.size() == 1);
  CHECK(r.top[0].id == 0);
  CHECK(r.top[0].ip == 1.0);
  CHECK(brute_force_mip(ds, Vector{1, 1}, 5).top.size() == 2);
  CHECK(brute_force_mip(ds, Vector{1, 1}, 5).top[0].id == 0);
  CHECK_THROWS_AS(brute_force_mip(Dataset{}, Vector{1}, 1), InvalidArgument);
  CHECK_THROWS_AS(brute_force_mip(ds, Vector{1, 1}, 0), InvalidArgument);

  std::mt19937_64 rng(1);
  const Dataset big = testing::random_dataset(rng, 500, 10);
  const Vector q = testing::random_vector(rng, 10);
  std::vector<std::pair<double, PointId>> all;
  for (PointId i = 0; i < 500; ++i) {
    double ip = 0;
    for (std::size_t j = 0; j < 10; ++j) ip += big.point(i)[j] * q[j];
    all.push_back({-ip, i});
  }
  std::sort(all.begin(), all.end());
  const QueryResult got = brute_force_mip(big, q, 25);
  for (std::size_t i = 0; i < 25; ++i) CHECK(got.top[i].id == all[i].second);
}

TEST_CASE("TopK ordering") {
  TopK top(2);
  CHECK(top.offer(5, 1.0));
  CHECK(top.offer(3, 1.0));
  CHECK(top.items()[0].id == 3);
  CHECK(top.full());
  CHECK_FALSE(top.offer(9, 1.0));
  CHECK(top.offer(1, 1.0));
  CHECK(top.items()[1].id == 3);
  CHECK(top.kth() == 1.0);
}

TEST_CASE("condition A on the first neighbour") {
  // The top point dominates in norm and direction, so Condition A fires
  // as soon as it is seen.
  const Dataset ds = Dataset::from_rows({{10, 0, 0}, {0.1, 0.2, 0}, {-0.1, 0.1, 0.2}, {0, -0.2, 0.1}});
  const IDistanceIndex idx = small_index(ds, 2, 3);
  const Vector q{10, 0, 0};
  const QueryContext ctx = make_query_context(idx, q, 0.9, 0.5, 1);
  const QueryResult r = mip_search_i(idx, ctx);
  CHECK(r.reason == Termination::condition_a);
  CHECK(r.candidates == 1);
  CHECK(r.top[0].id == 0);
}

TEST_CASE("exhaustive search equals brute force") {
  std::mt19937_64 rng(2);
  const Dataset ds = testing::random_dataset(rng, 60, 8);
  const IDistanceIndex idx = small_index(ds, 4, 5);
  for (int qi = 0; qi < 10; ++qi) {
    const Vector q = testing::random_vector(rng, 8);
    const QueryContext ctx = make_query_context(idx, q, 0.99, 0.999999, 5);
    const QueryResult exact = brute_force_mip(ds, q, 5);
    for (auto variant : {SearchVariant::incremental, SearchVariant::quick_probe}) {
      const QueryResult r = search(idx, ctx, variant);
      if (r.reason == Termination::exhausted) {
        REQUIRE(r.top.size() == 5);
        for (std::size_t i = 0; i < 5; ++i) CHECK(r.top[i].id == exact.top[i].id);
      }
      CHECK(r.top.size() == 5);
    }
  }
}

TEST_CASE("single point") {
  const Dataset ds = Dataset::from_rows({{1, 2, 3}});
  const IDistanceIndex idx = small_index(ds, 2, 1);
  const QueryContext ctx = make_query_context(idx, Vector{-1, 0, 0}, 0.9, 0.5, 1);
  const QueryResult r = mip_search_ii(idx, ctx);
  REQUIRE(r.top.size() == 1);
  CHECK(r.top[0].id == 0);
  CHECK(r.reason == Termination::exhausted);
  CHECK(mip_search_i(idx, ctx).top[0].id == 0);
}

TEST_CASE("contract checks") {
  std::mt19937_64 rng(3);
  const Dataset ds = testing::random_dataset(rng, 50, 6);
  const IDistanceIndex idx = small_index(ds, 3, 1);
  const IDistanceIndex other = small_index(ds, 3, 2);
  const QueryContext ctx = make_query_context(other, testing::random_vector(rng, 6), 0.9, 0.5, 1);
  CHECK_THROWS_AS(mip_search_i(idx, ctx), InvalidArgument);
  CHECK_THROWS_AS(mip_search_ii(idx, ctx), InvalidArgument);
  CHECK_THROWS_AS(make_query_context(idx, Vector{1, 2}, 0.9, 0.5, 1), InvalidArgument);
}

TEST_CASE("termination postconditions and soundness") {
  std::mt19937_64 rng(4);
  const Dataset ds = testing::random_dataset(rng, 800, 16);
  const IDistanceIndex idx = small_index(ds, 5, 9);
  for (int qi = 0; qi < 40; ++qi) {
    const Vector q = testing::random_vector(rng, 16);
    const QueryResult exact = brute_force_mip(ds, q, 10);
    for (auto variant : {SearchVariant::incremental, SearchVariant::quick_probe}) {
      const QueryContext ctx = make_query_context(idx, q, 0.9, 0.5, 10);
      const QueryResult r = search(idx, ctx, variant);
      REQUIRE(r.top.size() == 10);
      CHECK(std::is_sorted(r.top.begin(), r.top.end(), [](const Neighbor& a, const Neighbor& b) {
        return a.ip > b.ip;
      }));
      for (const auto& nb : r.top) CHECK(nb.ip == inner_product(ds.point(nb.id), q));
      if (r.reason == Termination::condition_a) CHECK(r.top[0].ip >= 0.9 * exact.top[0].ip);
      if (r.reason == Termination::condition_b || r.reason == Termination::extended_radius) {
        const double kth = r.top.back().ip;
        const bool a = condition_a(ctx, kth);
        const bool b = !a && condition_b(ctx, r.final_radius * r.final_radius, kth);
        CHECK((a || b || r.reason == Termination::extended_radius));
      }
      CHECK(r.pages > 0);
      CHECK(r.candidates >= 10);
      // Repeated runs charge the same pages.
      CHECK(search(idx, ctx, variant).pages == r.pages);
    }
  }
}

TEST_CASE("small p stops soon after k candidates") {
  std::mt19937_64 rng(5);
  const Dataset ds = testing::random_dataset(rng, 2000, 16);
  const IDistanceIndex idx = small_index(ds, 6, 4);
  const Vector q = testing::random_vector(rng, 16);
  const QueryContext ctx = make_query_context(idx, q, 0.9, 1e-6, 3);
  const QueryResult r = mip_search_i(idx, ctx);
  CHECK(r.candidates <= 10);
}

TEST_CASE("quick-probe radius containing the answer returns it") {
  // Find instances where the exact answer's projection lies within the probe
  // radius; then the search must return it.
  std::mt19937_64 rng(6);
  const Dataset ds = testing::random_dataset(rng, 500, 10);
  const IDistanceIndex idx = small_index(ds, 4, 8);
  int checked = 0;
  for (int qi = 0; qi < 50; ++qi) {
    const Vector q = testing::random_vector(rng, 10);
    const QueryContext ctx = make_query_context(idx, q, 0.9, 0.5, 1);
    const QueryResult r = mip_search_ii(idx, ctx);
    const PointId best = brute_force_mip(ds, q, 1).top[0].id;
    if (l2_distance(idx.projected_point(best), ctx.pq) <= r.probe_radius &&
        r.reason != Termination::condition_a) {
      ++checked;
      CHECK(r.top[0].id == best);
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("raising p never shrinks search II candidates") {
  MixtureSpec spec;
  spec.n = 3000;
  spec.d = 40;
  const QuerySplit split = split_queries(gaussian_mixture(spec), 30, 2);
  const IDistanceIndex idx = build_index(split.indexed, IndexConfig{});
  for (PointId qi = 0; qi < 30; ++qi) {
    for (double c : {0.7, 0.9}) {
      std::size_t prev = 0;
      for (double p : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
        const QueryResult r =
            mip_search_ii(idx, make_query_context(idx, split.queries.point(qi), c, p, 10));
        CHECK(r.candidates >= prev);
        prev = r.candidates;
      }
    }
  }
}
