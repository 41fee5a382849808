#pragma once

// Termination tests for c-AMIP search.
//
// With o_M the largest-norm point and ip the current (k-th) best inner
// product, let D = |o_M|^2 + |q|^2 - 2 ip / c.
//
//   Condition A:  D <= 0. A c-approximate answer has certainly been seen.
//   Condition B:  Psi_m(dist^2 / D) >= p, dist measured in projected space.
//                 A c-approximate answer has been seen with probability >= p.
//
// Callers evaluate A first; B is only defined when D > 0.

#include <cstddef>
#include <cstdint>

#include "promips/core.hpp"

namespace promips {

class ProjectionMatrix;

struct QueryContext {
  Vector q;                // original query, dimension d
  Vector pq;               // projected query, dimension m
  double sq_norm_q = 0.0;
  double l1_norm_q = 0.0;
  double c = 0.9;          // approximation ratio, (0, 1)
  double p = 0.5;          // guaranteed probability, (0, 1)
  std::size_t k = 1;
  double max_sq_norm = 0.0;  // |o_M|^2
  std::size_t m = 0;
  std::uint64_t matrix_seed = 0;
};

// Validates c, p, k and projects q with the given matrix.
QueryContext make_query_context(const ProjectionMatrix& matrix,
                                double max_sq_norm, VectorView q, double c,
                                double p, std::size_t k);

// |o_M|^2 + |q|^2 - 2 ip / c
double condition_denominator(const QueryContext& ctx, double ip);

bool condition_a(const QueryContext& ctx, double ip);

// Throws ContractViolation when the denominator is not positive.
bool condition_b(const QueryContext& ctx, double proj_dist_sq, double ip_max);

// Quick-Probe's Test A on a group: Psi_m(lb^2 / (c (min_l1 + |q|_1)^2)) >= p.
bool test_a(const QueryContext& ctx, double lb, double min_l1);

// The ratio inside Test A; +inf when min_l1 + |q|_1 == 0.
double test_a_value(const QueryContext& ctx, double lb, double min_l1);

// r' = sqrt(Psi_m^-1(p) * D). Throws ContractViolation when D <= 0.
double extended_radius(const QueryContext& ctx, double ip_max);

}  // namespace promips
