#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tailbound/convolution.hpp"
#include "tailbound/distribution.hpp"
#include "tailbound/errors.hpp"
#include "tailbound/extended_real.hpp"
#include "tailbound/shift_function.hpp"

namespace tailbound {

/// Truncated coefficient sequence {G_0 ... G_N} of a differential operator.
/// For a distribution-derived series the coefficients are m_n / n!, so that
/// applying the series to f at z realizes E[f(z + Z)]. Sign bookkeeping:
/// the operator of the convolution E[f(z - Z)] carries (-1)^n m_n / n!;
/// flipping the argument flips the odd terms, leaving m_n / n! for the
/// E[f(z + Z)] direction used throughout (mgf(t) = E[exp(t Z)]).
struct OperatorSeries {
  std::vector<double> coefficients;
  int truncation_order = 0;
};

inline OperatorSeries series_coefficients(const Distribution& d, int order,
                                          const Tolerance& tol = {}) {
  if (order < 0) throw std::invalid_argument("series_coefficients: order must be >= 0");
  OperatorSeries s;
  s.truncation_order = order;
  s.coefficients.reserve(order + 1);
  double factorial = 1.0;
  for (int n = 0; n <= order; ++n) {
    if (n > 0) factorial *= n;
    s.coefficients.push_back(raw_moment(d, n, tol) / factorial);
  }
  return s;
}

/// Truncated operator application: value = sum_n G_n f^(n)(z), with the
/// partial-sum trajectory kept for convergence diagnostics. `diverging` is
/// a ratio-test flag on the term magnitudes (trailing terms that refuse to
/// decay); such series are diagnosed, never resummed.
struct SeriesApplication {
  double value = 0.0;
  std::vector<double> partial_sums;
  bool diverging = false;
};

inline SeriesApplication apply_operator_series(const OperatorSeries& s,
                                               const ShiftFunction& f, double z) {
  if (!f.derivative) {
    throw MissingDerivativeOracleError("apply_operator_series: shift function '" +
                                       f.name + "' has no derivative oracle");
  }
  SeriesApplication out;
  out.partial_sums.reserve(s.coefficients.size());
  std::vector<double> terms;
  terms.reserve(s.coefficients.size());
  double acc = 0.0;
  double scale = 0.0;
  for (std::size_t n = 0; n < s.coefficients.size(); ++n) {
    const double t = s.coefficients[n] * f.derivative(static_cast<int>(n), z);
    terms.push_back(t);
    acc += t;
    out.partial_sums.push_back(acc);
    scale = std::max(scale, std::abs(acc));
  }
  out.value = acc;

  const double floor = 1e-13 * std::max(1.0, scale);
  int streak = 0;
  for (std::size_t n = 1; n < terms.size(); ++n) {
    if (std::abs(terms[n]) > floor && std::abs(terms[n]) >= 0.99 * std::abs(terms[n - 1])) {
      ++streak;
    } else {
      streak = 0;
    }
  }
  out.diverging = streak >= 6;
  return out;
}

/// Relative residual of the eigenfunction identity: applying the series to
/// exp(alpha w) at z must reproduce exp(alpha z) * mgf(alpha).
inline double exponential_eigenfunction_residual(const Distribution& d, double alpha,
                                                 double z, int order,
                                                 const Tolerance& tol = {}) {
  const ExtReal m = d.mgf(alpha);
  if (!m.is_finite()) {
    throw std::domain_error(
        "exponential_eigenfunction_residual: alpha outside the MGF domain");
  }
  const double target = std::exp(alpha * z) * m.value();
  const SeriesApplication app =
      apply_operator_series(series_coefficients(d, order, tol), make_exp_shift(alpha), z);
  return std::abs(app.value - target) / target;
}

/// Strict absolute monotonicity probe: f and its derivatives up to the
/// given order must be strictly positive at every probe point. A false
/// verdict carries the first offending (order, point, value). The result is
/// "SAM up to this order at these points", never a universal claim.
struct SamViolation {
  int order = 0;
  double point = 0.0;
  double value = 0.0;
};

struct SamReport {
  bool is_sam = true;
  std::optional<SamViolation> first_violation;
  int orders_checked = 0;
  std::vector<double> points_checked;
};

inline SamReport sam_check(const ShiftFunction& f, const std::vector<double>& points,
                           int order) {
  if (!f.derivative) {
    throw MissingDerivativeOracleError("sam_check: shift function '" + f.name +
                                       "' has no derivative oracle");
  }
  SamReport rep;
  rep.orders_checked = order;
  rep.points_checked = points;
  for (int n = 0; n <= order && rep.is_sam; ++n) {
    for (double z : points) {
      const double v = n == 0 ? f.eval(z) : f.derivative(n, z);
      if (!(v > 0.0)) {
        rep.is_sam = false;
        rep.first_violation = SamViolation{n, z, v};
        break;
      }
    }
  }
  return rep;
}

/// r = min_n a_n/b_n <= (sum a_n)/(sum b_n) <= max_n a_n/b_n = R for
/// positive sequences of equal length.
struct CauchyRatioBounds {
  double min_ratio = 0.0;
  double sum_ratio = 0.0;
  double max_ratio = 0.0;
  bool holds = false;
};

inline CauchyRatioBounds cauchy_third_inequality(std::span<const double> a,
                                                 std::span<const double> b) {
  if (a.size() != b.size()) {
    throw LengthMismatchError("cauchy_third_inequality: sequence lengths differ");
  }
  if (a.empty()) {
    throw LengthMismatchError("cauchy_third_inequality: sequences must be non-empty");
  }
  CauchyRatioBounds out;
  double sa = 0.0, sb = 0.0;
  out.min_ratio = std::numeric_limits<double>::infinity();
  out.max_ratio = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] > 0.0) || !(b[i] > 0.0)) {
      throw NonPositiveEntryError("cauchy_third_inequality: entries must be > 0");
    }
    const double ratio = a[i] / b[i];
    out.min_ratio = std::min(out.min_ratio, ratio);
    out.max_ratio = std::max(out.max_ratio, ratio);
    sa += a[i];
    sb += b[i];
  }
  out.sum_ratio = sa / sb;
  const double slack = 1e-12 * std::max(1.0, std::abs(out.sum_ratio));
  out.holds = out.min_ratio <= out.sum_ratio + slack &&
              out.sum_ratio <= out.max_ratio + slack;
  return out;
}

/// Per-z record of the SAM ordering check: the truncated-series ratio
/// [sum m_n+ f^(n)(z)/n!] / [sum x^n f^(n)(z)/n!] against the integer
/// moment-bound floor, plus the four convolutions
///   (a) over (-inf, inf), (b) over (0, inf),
///   (c) over (-z, inf),   (d) over (max(0,-z), inf)
/// whose chain (c)=(d) <= (b) <= (a) must hold for z <= 0. Divergent
/// convolutions are carried as +infinity and compared in extended reals.
struct SamOrderingEntry {
  double z = 0.0;
  double series_ratio = 0.0;
  bool cauchy_leg_ok = false;
  ExtReal conv_full;       // (a)
  ExtReal conv_pos_meas;   // (b)
  ExtReal conv_pos_shift;  // (c)
  ExtReal conv_both_pos;   // (d)
  bool chain_ok = false;
};

struct SamOrderingReport {
  bool sam_ok = false;
  double integer_moment_floor = 0.0;  // min_n m_n+ / x^n over 0..order
  int floor_order = 0;
  std::vector<SamOrderingEntry> entries;
  bool passed = false;
};

namespace detail {

inline ExtReal convolve_region(const Distribution& d, const ShiftFunction& f, double z,
                               double lower, const Tolerance& tol) {
  auto w = [&f, z](double y) { return f.eval(z + y); };
  WeightedIntegral r = integrate_density_product(d, w, lower, tol);
  if (r.diverged) return ExtReal::infinity();
  if (!r.quad.converged) return ExtReal::not_computed();
  return ExtReal::finite(r.quad.value);
}

inline bool ext_close(const ExtReal& a, const ExtReal& b, double tol_eq) {
  if (a.is_infinite() && b.is_infinite()) return true;
  if (!a.is_finite() || !b.is_finite()) return false;
  return std::abs(a.value() - b.value()) <=
         tol_eq * std::max(1.0, std::abs(b.value()));
}

}  // namespace detail

inline SamOrderingReport sam_ordering_check(const Distribution& d, const ShiftFunction& f,
                                   double x, const std::vector<double>& z_grid,
                                   int order, const Tolerance& tol = {}) {
  if (!(x > 0.0)) throw std::domain_error("sam_ordering_check: requires x > 0");
  if (!f.sam_claimed) {
    throw std::invalid_argument("sam_ordering_check: shift function is not SAM-claimed");
  }
  for (double z : z_grid) {
    if (z > 0.0) throw std::invalid_argument("sam_ordering_check: z grid must satisfy z <= 0");
  }
  constexpr double kSlack = 1e-8;

  SamOrderingReport rep;
  rep.sam_ok = sam_check(f, z_grid, order).is_sam;

  std::vector<double> pos_moments(order + 1);
  for (int n = 0; n <= order; ++n) {
    const ExtReal m = positive_fractional_moment(d, static_cast<double>(n), tol);
    if (!m.is_finite()) {
      throw NonConvergentError("sam_ordering_check: positive moment of order " +
                               std::to_string(n) + " unavailable");
    }
    pos_moments[n] = m.value();
  }
  rep.integer_moment_floor = std::numeric_limits<double>::infinity();
  double xn = 1.0;
  for (int n = 0; n <= order; ++n) {
    const double v = pos_moments[n] / xn;
    if (v < rep.integer_moment_floor) {
      rep.integer_moment_floor = v;
      rep.floor_order = n;
    }
    xn *= x;
  }

  bool all = rep.sam_ok;
  for (double z : z_grid) {
    SamOrderingEntry e;
    e.z = z;

    double num = 0.0, den = 0.0, factorial = 1.0, xpow = 1.0;
    for (int n = 0; n <= order; ++n) {
      if (n > 0) {
        factorial *= n;
        xpow *= x;
      }
      const double deriv = f.derivative(n, z);
      num += pos_moments[n] / factorial * deriv;
      den += xpow / factorial * deriv;
    }
    e.series_ratio = num / den;
    e.cauchy_leg_ok =
        rep.integer_moment_floor <= e.series_ratio + kSlack * std::max(1.0, e.series_ratio);

    e.conv_full = detail::convolve_region(d, f, z, -detail::kInf, tol);
    e.conv_pos_meas = detail::convolve_region(d, f, z, 0.0, tol);
    e.conv_pos_shift = detail::convolve_region(d, f, z, -z, tol);
    e.conv_both_pos = detail::convolve_region(d, f, z, std::max(0.0, -z), tol);
    e.chain_ok = detail::ext_close(e.conv_pos_shift, e.conv_both_pos, kSlack) &&
                 ext_leq(e.conv_pos_shift, e.conv_pos_meas, kSlack) &&
                 ext_leq(e.conv_pos_meas, e.conv_full, kSlack);

    all = all && e.cauchy_leg_ok && e.chain_ok;
    rep.entries.push_back(e);
  }
  rep.passed = all;
  return rep;
}

}  // namespace tailbound
