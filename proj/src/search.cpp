#include "promips/search.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>

#include "promips/quick_probe.hpp"

namespace promips {

namespace {

bool ranks_before(const Neighbor& a, const Neighbor& b) {
  return a.ip != b.ip ? a.ip > b.ip : a.id < b.id;
}

double thread_cpu_us() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) * 1e6 + static_cast<double>(ts.tv_nsec) / 1e3;
}

class Stopwatch {
 public:
  Stopwatch() : wall_(std::chrono::steady_clock::now()), cpu_(thread_cpu_us()) {}

  void finish(QueryResult& result) const {
    result.wall_us = std::chrono::duration<double, std::micro>(
                         std::chrono::steady_clock::now() - wall_)
                         .count();
    result.cpu_us = thread_cpu_us() - cpu_;
  }

 private:
  std::chrono::steady_clock::time_point wall_;
  double cpu_;
};

void require_consistent(const IDistanceIndex& index, const QueryContext& ctx) {
  if (ctx.matrix_seed != index.matrix().seed() || ctx.m != index.m() ||
      ctx.pq.size() != index.m() || ctx.q.size() != index.d()) {
    throw InvalidArgument("query context was built for a different projection than the index");
  }
  if (ctx.k == 0) throw InvalidArgument("k must be >= 1");
}

// Verifies candidates against the original vectors, each at most once.
class Verifier {
 public:
  Verifier(const IDistanceIndex& index, const QueryContext& ctx, PageTally& tally)
      : index_(index), ctx_(ctx), tally_(tally), seen_(index.size(), false), top_(ctx.k) {}

  // Returns true when the candidate changed the top-k.
  bool verify(const RangeHit& hit) {
    if (seen_[hit.id]) return false;
    seen_[hit.id] = true;
    ++verified_;
    const Vector original = index_.fetch_original(hit.vector_offset, tally_);
    return top_.offer(hit.id, inner_product(original, ctx_.q));
  }

  bool condition_a_holds() const { return top_.full() && condition_a(ctx_, top_.kth()); }

  const TopK& top() const { return top_; }
  std::size_t verified() const { return verified_; }
  bool all_seen() const { return verified_ == index_.size(); }

 private:
  const IDistanceIndex& index_;
  const QueryContext& ctx_;
  PageTally& tally_;
  std::vector<bool> seen_;
  TopK top_;
  std::size_t verified_ = 0;
};

QueryResult finish(const Verifier& verifier, const PageTally& tally, const Stopwatch& clock,
                   Termination reason, QueryResult result) {
  result.top = verifier.top().items();
  result.pages = tally.count();
  result.candidates = verifier.verified();
  result.reason = reason;
  clock.finish(result);
  return result;
}

}  // namespace

std::string to_string(Termination reason) {
  switch (reason) {
    case Termination::condition_a:
      return "condition_a";
    case Termination::condition_b:
      return "condition_b";
    case Termination::exhausted:
      return "exhausted";
    case Termination::extended_radius:
      return "extended_radius";
  }
  return "unknown";
}

bool TopK::offer(PointId id, double ip) {
  const Neighbor candidate{id, ip};
  if (full() && !ranks_before(candidate, items_.back())) return false;
  auto pos = std::upper_bound(items_.begin(), items_.end(), candidate, ranks_before);
  items_.insert(pos, candidate);
  if (items_.size() > k_) items_.pop_back();
  return true;
}

QueryResult brute_force_mip(const Dataset& dataset, VectorView q, std::size_t k) {
  if (dataset.empty()) throw InvalidArgument("brute_force_mip: empty dataset");
  if (k == 0) throw InvalidArgument("brute_force_mip: k must be >= 1");
  Stopwatch clock;
  std::vector<Neighbor> all(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto id = static_cast<PointId>(i);
    all[i] = {id, inner_product(dataset.point(id), q)};
  }
  const std::size_t keep = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(),
                    ranks_before);
  all.resize(keep);

  QueryResult result;
  result.top = std::move(all);
  result.candidates = dataset.size();
  result.reason = Termination::exhausted;
  clock.finish(result);
  return result;
}

QueryContext make_query_context(const IDistanceIndex& index, VectorView q, double c,
                                double p, std::size_t k) {
  if (q.size() != index.d()) {
    throw InvalidArgument("query has dimension " + std::to_string(q.size()) +
                          ", index expects " + std::to_string(index.d()));
  }
  return make_query_context(index.matrix(), index.norms().max_sq_l2, q, c, p, k);
}

QueryResult mip_search_i(const IDistanceIndex& index, const QueryContext& ctx) {
  require_consistent(index, ctx);
  Stopwatch clock;
  PageTally tally;
  Verifier verifier(index, ctx, tally);
  IncrementalNN nn(index, ctx.pq, tally);

  QueryResult result;
  while (auto hit = nn.next()) {
    verifier.verify(*hit);
    result.final_radius = hit->dist;
    if (!verifier.top().full()) continue;
    const double kth = verifier.top().kth();
    if (condition_a(ctx, kth)) {
      return finish(verifier, tally, clock, Termination::condition_a, result);
    }
    if (condition_b(ctx, hit->dist * hit->dist, kth)) {
      return finish(verifier, tally, clock, Termination::condition_b, result);
    }
  }
  return finish(verifier, tally, clock, Termination::exhausted, result);
}

QueryResult mip_search_ii(const IDistanceIndex& index, const QueryContext& ctx) {
  require_consistent(index, ctx);
  Stopwatch clock;
  PageTally tally;
  Verifier verifier(index, ctx, tally);
  QueryResult result;

  const ProbeResult probe = quick_probe(
      index.code_groups(), ctx, [&](PointId id) { return index.fetch_projected(id, tally); });
  result.probe_radius = probe.radius;

  // Condition A is only re-tested when the top-k changes.
  auto scan = [&](double radius) {
    result.final_radius = radius;
    for (const RangeHit& hit : index.range_search(ctx.pq, radius, tally)) {
      if (verifier.verify(hit) && verifier.condition_a_holds()) return true;
    }
    return false;
  };

  double radius = probe.radius;
  if (scan(radius)) return finish(verifier, tally, clock, Termination::condition_a, result);

  // Fewer than k points inside the probe radius: the k-th best does not
  // exist yet, so keep doubling until it does.
  while (!verifier.top().full() && !verifier.all_seen()) {
    radius = radius > 0.0 ? 2.0 * radius : index.epsilon();
    if (scan(radius)) return finish(verifier, tally, clock, Termination::condition_a, result);
  }
  if (verifier.all_seen()) return finish(verifier, tally, clock, Termination::exhausted, result);

  const double kth = verifier.top().kth();
  if (condition_a(ctx, kth)) return finish(verifier, tally, clock, Termination::condition_a, result);
  if (condition_b(ctx, radius * radius, kth)) {
    return finish(verifier, tally, clock, Termination::condition_b, result);
  }

  const double expanded = extended_radius(ctx, kth);
  if (scan(expanded)) return finish(verifier, tally, clock, Termination::condition_a, result);
  return finish(verifier, tally, clock, Termination::extended_radius, result);
}

QueryResult search(const IDistanceIndex& index, const QueryContext& ctx, SearchVariant variant) {
  return variant == SearchVariant::incremental ? mip_search_i(index, ctx)
                                               : mip_search_ii(index, ctx);
}

}  // namespace promips
