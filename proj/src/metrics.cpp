#include "promips/metrics.hpp"

#include <unordered_set>

namespace promips {

std::optional<double> overall_ratio(const QueryResult& returned, const QueryResult& exact) {
  const std::size_t k = exact.top.size();
  if (k == 0 || returned.top.size() < k) return std::nullopt;
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!(exact.top[i].ip > 0.0)) return std::nullopt;
    sum += returned.top[i].ip / exact.top[i].ip;
  }
  return sum / static_cast<double>(k);
}

double recall(const QueryResult& returned, const QueryResult& exact) {
  const std::size_t k = exact.top.size();
  if (k == 0) return 0.0;
  std::unordered_set<PointId> truth;
  for (const auto& nb : exact.top) truth.insert(nb.id);
  std::size_t hits = 0;
  for (const auto& nb : returned.top) hits += truth.count(nb.id);
  return static_cast<double>(hits) / static_cast<double>(k);
}

}  // namespace promips
