#pragma once

// Beta-function numerics: log B(a, b), the regularized incomplete beta
// I_x(a, b) by continued fraction, and its inverse by bisection.

#include <cmath>
#include <math.h>
#include <limits>

#include "bayesfair/errors.hpp"

namespace bayesfair::math {

// std::lgamma stores the sign in the global `signgam` on glibc; the
// reentrant variant keeps these functions free of shared state.
inline double log_gamma(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

inline double log_beta(double a, double b) {
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

namespace detail {

// Continued fraction for I_x(a, b), evaluated with the modified Lentz method.
// Converges fast for x < (a + 1) / (a + b + 2).
inline double ibeta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 500;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace detail

/// Regularized incomplete beta function I_x(a, b), i.e. the CDF of
/// Beta(a, b) at x. Requires a > 0, b > 0; x is clamped to [0, 1].
inline double regularized_ibeta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("regularized_ibeta: shape parameters must be positive");
  }
  if (std::isnan(x)) throw DomainError("regularized_ibeta: x is NaN");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;

  const double log_front =
      a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * detail::ibeta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * detail::ibeta_continued_fraction(b, a, 1.0 - x) / b;
}

struct BisectionOptions {
  double tolerance = 1e-10;
  int max_iterations = 200;
};

/// Inverse of I_x(a, b) in x. Bisection keeps the bracket [lo, hi] with
/// I_lo <= p <= I_hi and stops once hi - lo < tolerance.
inline double beta_quantile(double a, double b, double p,
                            BisectionOptions opts = {}) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("beta_quantile: probability must lie in [0, 1]");
  }
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < opts.max_iterations && hi - lo >= opts.tolerance;
       ++it) {
    const double mid = 0.5 * (lo + hi);
    const double cdf = regularized_ibeta(a, b, mid);
    if (cdf == p) return mid;
    if (cdf < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace bayesfair::math
