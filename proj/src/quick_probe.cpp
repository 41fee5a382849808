#include "promips/quick_probe.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace promips {

BinaryCode binary_code(VectorView pp) {
  if (pp.size() > kMaxCodeBits) {
    throw InvalidArgument("binary_code: dimension exceeds 32 bits");
  }
  BinaryCode code = 0;
  for (std::size_t i = 0; i < pp.size(); ++i) {
    if (pp[i] >= 0.0) code |= BinaryCode{1} << i;
  }
  return code;
}

double group_lower_bound(BinaryCode code, VectorView pq) {
  const BinaryCode diff = code ^ binary_code(pq);
  double sum = 0.0;
  for (std::size_t i = 0; i < pq.size(); ++i) {
    if ((diff >> i) & 1U) sum += std::abs(pq[i]);
  }
  return sum / std::sqrt(static_cast<double>(pq.size()));
}

std::size_t CodeGroups::point_count() const {
  std::size_t total = 0;
  for (const auto& g : groups) total += g.members.size();
  return total;
}

CodeGroups build_code_groups(const ProjectedDataset& projected,
                             const NormTable& norms) {
  const Dataset& points = projected.points;
  if (points.size() != norms.size()) {
    throw InvalidArgument("build_code_groups: projected points and norms differ in size");
  }
  std::map<BinaryCode, std::vector<GroupMember>> by_code;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto id = static_cast<PointId>(i);
    by_code[binary_code(points.point(id))].push_back({id, norms.l1[i]});
  }

  CodeGroups out;
  out.m = points.dim();
  out.groups.reserve(by_code.size());
  for (auto& [code, members] : by_code) {
    std::sort(members.begin(), members.end(),
              [](const GroupMember& a, const GroupMember& b) {
                return a.l1 != b.l1 ? a.l1 < b.l1 : a.id < b.id;
              });
    out.groups.push_back({code, std::move(members)});
  }
  return out;
}

ProbeResult quick_probe(const CodeGroups& groups, const QueryContext& ctx,
                        const ProjectedLookup& lookup) {
  if (groups.groups.empty()) throw InvalidArgument("quick_probe: no groups");
  if (ctx.pq.size() != groups.m) {
    throw InvalidArgument("quick_probe: projected query dimension differs from code width");
  }

  struct Ranked {
    double lb;
    const CodeGroup* group;
  };
  std::vector<Ranked> order;
  order.reserve(groups.groups.size());
  for (const auto& g : groups.groups) {
    order.push_back({group_lower_bound(g.code, ctx.pq), &g});
  }
  std::sort(order.begin(), order.end(), [](const Ranked& a, const Ranked& b) {
    return a.lb != b.lb ? a.lb < b.lb : a.group->code < b.group->code;
  });

  ProbeResult result;
  const GroupMember* chosen = nullptr;
  double best_value = 0.0;
  for (const auto& [lb, group] : order) {
    ++result.groups_scanned;
    const GroupMember& first = group->members.front();
    if (test_a(ctx, lb, first.l1)) {
      chosen = &first;
      result.passed_test_a = true;
      break;
    }
    const double value = test_a_value(ctx, lb, first.l1);
    if (value >= best_value) {
      best_value = value;
      chosen = &first;
    }
  }

  result.id = chosen->id;
  result.radius = l2_distance(lookup(chosen->id), ctx.pq);
  return result;
}

}  // namespace promips
