#pragma once

// Query-time orchestration: exact brute force, incremental search with
// Conditions A/B, and the Quick-Probe range search with r' compensation.

#include <cstdint>
#include <string>
#include <vector>

#include "promips/conditions.hpp"
#include "promips/core.hpp"
#include "promips/idistance.hpp"

namespace promips {

enum class Termination {
  condition_a,
  condition_b,
  exhausted,
  extended_radius,
};

std::string to_string(Termination reason);

struct Neighbor {
  PointId id = 0;
  double ip = 0.0;
};

struct QueryResult {
  std::vector<Neighbor> top;  // descending ip, ascending id on ties
  std::size_t pages = 0;
  std::size_t candidates = 0;  // original vectors verified
  double cpu_us = 0.0;
  double wall_us = 0.0;
  Termination reason = Termination::exhausted;
  double probe_radius = 0.0;   // search II only
  double final_radius = 0.0;   // last radius searched
};

// Running top-k by inner product with the same ordering as the exact oracle.
class TopK {
 public:
  explicit TopK(std::size_t k) : k_(k) {}

  // True when the candidate entered the top-k.
  bool offer(PointId id, double ip);
  bool full() const { return items_.size() >= k_; }
  // Current k-th best; only meaningful when full().
  double kth() const { return items_.back().ip; }
  const std::vector<Neighbor>& items() const { return items_; }

 private:
  std::size_t k_;
  std::vector<Neighbor> items_;
};

// Exact top-k by inner product. k larger than n returns all points.
QueryResult brute_force_mip(const Dataset& dataset, VectorView q, std::size_t k);

QueryContext make_query_context(const IDistanceIndex& index, VectorView q, double c,
                                double p, std::size_t k);

// Incremental NN in projected space; after every candidate, Condition A then
// Condition B on the k-th best inner product.
QueryResult mip_search_i(const IDistanceIndex& index, const QueryContext& ctx);

// Quick-Probe radius, range search with Condition A short-circuit, then
// Condition B at the boundary and, if it fails, expansion to r'.
QueryResult mip_search_ii(const IDistanceIndex& index, const QueryContext& ctx);

enum class SearchVariant { incremental, quick_probe };

QueryResult search(const IDistanceIndex& index, const QueryContext& ctx,
                   SearchVariant variant);

}  // namespace promips
