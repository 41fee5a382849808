#include "promips/chi_square.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "promips/errors.hpp"

namespace promips {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 10000;

void require_dof(unsigned dof) {
  if (dof == 0) throw InvalidArgument("chi-square: degrees of freedom must be >= 1");
}

// log(x^a e^-x / Gamma(a))
double log_prefactor(double a, double x) {
  return a * std::log(x) - x - std::lgamma(a);
}

double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(log_prefactor(a, x));
}

// Q(a, x) by modified Lentz evaluation of the continued fraction.
double gamma_q_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(log_prefactor(a, x)) * h;
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw InvalidArgument("regularized_gamma_p: a must be > 0");
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_fraction(a, x);
}

double chi2_cdf(unsigned dof, double x) {
  require_dof(dof);
  if (!(x > 0.0)) return 0.0;
  return regularized_gamma_p(0.5 * dof, 0.5 * x);
}

double chi2_pdf(unsigned dof, double x) {
  require_dof(dof);
  if (x <= 0.0) return dof == 1 ? INFINITY : (dof == 2 ? 0.5 : 0.0);
  const double a = 0.5 * dof;
  return std::exp((a - 1.0) * std::log(x) - 0.5 * x - a * std::log(2.0) -
                  std::lgamma(a));
}

double chi2_inv_cdf(unsigned dof, double p) {
  require_dof(dof);
  if (!(p >= 0.0) || !(p < 1.0)) {
    throw InvalidArgument("chi2_inv_cdf: p must lie in [0, 1), got " +
                          std::to_string(p));
  }
  if (p == 0.0) return 0.0;

  double lo = 0.0;
  double hi = static_cast<double>(dof);
  while (chi2_cdf(dof, hi) < p) {
    lo = hi;
    hi *= 2.0;
  }

  // Newton iterations kept inside [lo, hi]; bisection whenever a step leaves
  // the bracket or the density vanishes.
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 200; ++i) {
    const double f = chi2_cdf(dof, x) - p;
    if (std::abs(f) <= 1e-14) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double slope = chi2_pdf(dof, x);
    double next = x - f / slope;
    if (!(slope > 0.0) || !std::isfinite(next) || next <= lo || next >= hi) {
      next = 0.5 * (lo + hi);
    }
    if (std::abs(next - x) <= std::numeric_limits<double>::epsilon() * x) {
      return next;
    }
    x = next;
  }
  return x;
}

ChiSquare::ChiSquare(unsigned dof) : dof_(dof) { require_dof(dof); }

}  // namespace promips
