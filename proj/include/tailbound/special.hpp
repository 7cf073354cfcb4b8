#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tailbound::special {

namespace detail {

// Lower regularized incomplete gamma by power series, valid for x < a + 1.
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma by continued fraction (modified
// Lentz), valid for x >= a + 1.
inline double gamma_q_cf(double a, double x) {
  constexpr double kFpMin = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kFpMin;
  double d = 1.0 / b;
  double h = d;
  for (int n = 1; n <= 500; ++n) {
    const double an = -n * (n - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = b + an / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

/// Lower regularized incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
inline double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("gamma_p: requires a > 0");
  if (x < 0.0) throw std::domain_error("gamma_p: requires x >= 0");
  if (x == 0.0) return 0.0;
  return x < a + 1.0 ? detail::gamma_p_series(a, x) : 1.0 - detail::gamma_q_cf(a, x);
}

/// Upper regularized incomplete gamma Q(a, x) = 1 - P(a, x), without
/// cancellation in either tail.
inline double gamma_q(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("gamma_q: requires a > 0");
  if (x < 0.0) throw std::domain_error("gamma_q: requires x >= 0");
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? 1.0 - detail::gamma_p_series(a, x) : detail::gamma_q_cf(a, x);
}

}  // namespace tailbound::special
