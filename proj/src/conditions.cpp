#include "promips/conditions.hpp"

#include <cmath>
#include <string>

#include "promips/chi_square.hpp"
#include "promips/projection.hpp"

namespace promips {

QueryContext make_query_context(const ProjectionMatrix& matrix,
                                double max_sq_norm, VectorView q, double c,
                                double p, std::size_t k) {
  if (!(c > 0.0 && c < 1.0)) {
    throw InvalidArgument("approximation ratio c must lie in (0, 1), got " +
                          std::to_string(c));
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidArgument("probability p must lie in (0, 1), got " +
                          std::to_string(p));
  }
  if (k == 0) throw InvalidArgument("k must be >= 1");
  check_vector(q);

  QueryContext ctx;
  ctx.q.assign(q.begin(), q.end());
  ctx.pq = matrix.project(q);
  ctx.sq_norm_q = squared_l2_norm(q);
  ctx.l1_norm_q = l1_norm(q);
  ctx.c = c;
  ctx.p = p;
  ctx.k = k;
  ctx.max_sq_norm = max_sq_norm;
  ctx.m = matrix.m();
  ctx.matrix_seed = matrix.seed();
  return ctx;
}

double condition_denominator(const QueryContext& ctx, double ip) {
  return ctx.max_sq_norm + ctx.sq_norm_q - 2.0 * ip / ctx.c;
}

bool condition_a(const QueryContext& ctx, double ip) {
  return condition_denominator(ctx, ip) <= 0.0;
}

bool condition_b(const QueryContext& ctx, double proj_dist_sq, double ip_max) {
  const double denom = condition_denominator(ctx, ip_max);
  if (!(denom > 0.0)) {
    throw ContractViolation(
        "condition_b: denominator is not positive; Condition A holds and must "
        "be tested first");
  }
  return chi2_cdf(static_cast<unsigned>(ctx.m), proj_dist_sq / denom) >= ctx.p;
}

double test_a_value(const QueryContext& ctx, double lb, double min_l1) {
  const double upper = min_l1 + ctx.l1_norm_q;
  if (upper == 0.0) return INFINITY;
  return lb * lb / (ctx.c * upper * upper);
}

bool test_a(const QueryContext& ctx, double lb, double min_l1) {
  const double value = test_a_value(ctx, lb, min_l1);
  if (std::isinf(value)) return true;
  return chi2_cdf(static_cast<unsigned>(ctx.m), value) >= ctx.p;
}

double extended_radius(const QueryContext& ctx, double ip_max) {
  const double denom = condition_denominator(ctx, ip_max);
  if (!(denom > 0.0)) {
    throw ContractViolation(
        "extended_radius: denominator is not positive; Condition A already "
        "holds");
  }
  return std::sqrt(chi2_inv_cdf(static_cast<unsigned>(ctx.m), ctx.p) * denom);
}

}  // namespace promips
