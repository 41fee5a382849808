#pragma once

// Quick-Probe: sign-code groups over the projected points and the probe
// point selection that fixes the initial range-search radius.

#include <cstdint>
#include <functional>
#include <vector>

#include "promips/conditions.hpp"
#include "promips/core.hpp"
#include "promips/projection.hpp"

namespace promips {

// Bit i set iff projected coordinate i is >= 0. Supports m <= 32.
using BinaryCode = std::uint32_t;

constexpr std::size_t kMaxCodeBits = 32;

BinaryCode binary_code(VectorView pp);

// (1 / sqrt(m)) * sum_i (code_i xor code(pq)_i) * |pq_i|. Never exceeds the
// projected distance from pq to any point carrying `code`.
double group_lower_bound(BinaryCode code, VectorView pq);

struct GroupMember {
  PointId id = 0;
  double l1 = 0.0;  // |o|_1 in the original space
};

struct CodeGroup {
  BinaryCode code = 0;
  std::vector<GroupMember> members;  // ascending (l1, id)

  double min_l1() const { return members.front().l1; }
};

// Non-empty groups only, ordered by ascending code value.
struct CodeGroups {
  std::size_t m = 0;
  std::vector<CodeGroup> groups;

  std::size_t point_count() const;
};

CodeGroups build_code_groups(const ProjectedDataset& projected,
                             const NormTable& norms);

struct ProbeResult {
  PointId id = 0;
  double radius = 0.0;      // projected distance from pq to the probe point
  bool passed_test_a = false;
  std::size_t groups_scanned = 0;
};

// Returns the projected coordinates of a point; the search engine routes
// this through the page store so the fetch is counted.
using ProjectedLookup = std::function<Vector(PointId)>;

// Groups are scanned by ascending (lower bound, code). The first group whose
// smallest-1-norm member passes Test A supplies the probe point. If none
// passes, the member with the largest recorded Test A ratio is used (later
// groups win ties).
ProbeResult quick_probe(const CodeGroups& groups, const QueryContext& ctx,
                        const ProjectedLookup& lookup);

}  // namespace promips
