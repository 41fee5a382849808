#pragma once

#include <optional>
#include <vector>

#include "promips/search.hpp"

namespace promips {

// Mean of rank-wise ratios <o_i, q> / <o_i*, q> over the exact result's
// ranks. Undefined (nullopt) when any exact inner product is <= 0 or the
// returned list is shorter than the exact one.
std::optional<double> overall_ratio(const QueryResult& returned, const QueryResult& exact);

// |returned ids intersect exact ids| / k, with k = exact result size.
double recall(const QueryResult& returned, const QueryResult& exact);

}  // namespace promips
