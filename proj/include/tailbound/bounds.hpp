#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tailbound/convolution.hpp"
#include "tailbound/distribution.hpp"
#include "tailbound/errors.hpp"
#include "tailbound/extended_real.hpp"
#include "tailbound/interval.hpp"
#include "tailbound/operational.hpp"
#include "tailbound/optimize.hpp"
#include "tailbound/shift_function.hpp"

namespace tailbound {

enum class Method {
  markov,
  chernoff,
  moment,
  operational,
  heaviside_exact,
  logistic,
  truncated_exp,
  truncated_power,
};

enum class BoundStatus { ok, clamped, mgf_domain_empty, diverged, nonconvergent };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::markov: return "markov";
    case Method::chernoff: return "chernoff";
    case Method::moment: return "moment";
    case Method::operational: return "operational";
    case Method::heaviside_exact: return "heaviside_exact";
    case Method::logistic: return "logistic";
    case Method::truncated_exp: return "truncated_exp";
    case Method::truncated_power: return "truncated_power";
  }
  return "?";
}

inline const char* to_string(BoundStatus s) {
  switch (s) {
    case BoundStatus::ok: return "ok";
    case BoundStatus::clamped: return "clamped";
    case BoundStatus::mgf_domain_empty: return "mgf_domain_empty";
    case BoundStatus::diverged: return "diverged";
    case BoundStatus::nonconvergent: return "nonconvergent";
  }
  return "?";
}

/// One computed bound. bound_raw carries the unclamped ratio (ordering
/// checks compare raw values); bound_clamped is min(raw, 1), or 1 whenever
/// the raw value is infinite, unavailable, or the method infeasible.
struct BoundReport {
  Method method = Method::markov;
  ExtReal bound_raw;
  double bound_clamped = 1.0;
  std::optional<double> argmin_alpha;
  std::optional<double> argmin_z;
  BoundStatus status = BoundStatus::ok;
  long evaluations = 0;
};

/// Slack used by every ordering / soundness comparison on raw values.
inline constexpr double kOrderingSlack = 1e-6;

namespace detail {

inline BoundReport finish_report(Method m, ExtReal raw, long evals,
                                 std::optional<double> argmin_alpha = {},
                                 std::optional<double> argmin_z = {}) {
  BoundReport r;
  r.method = m;
  r.bound_raw = raw;
  r.argmin_alpha = argmin_alpha;
  r.argmin_z = argmin_z;
  r.evaluations = evals;
  if (raw.is_finite()) {
    r.bound_clamped = std::min(raw.value(), 1.0);
    r.status = raw.value() > 1.0 ? BoundStatus::clamped : BoundStatus::ok;
  } else {
    r.bound_clamped = 1.0;
    r.status = raw.is_infinite() ? BoundStatus::diverged : BoundStatus::nonconvergent;
  }
  return r;
}

inline void require_positive_threshold(double x, const char* who) {
  if (!(x > 0.0)) {
    throw std::domain_error(std::string(who) + ": requires threshold x > 0");
  }
}

}  // namespace detail

/// Markov: Pr[Z >= x] <= E[Z+]/x = m_1+/x. Uses the unconditioned positive
/// part, which upper-bounds the tail of an arbitrary law directly; the
/// conditioned construction lives in restrict_positive.
inline BoundReport markov_bound(const Distribution& d, double x,
                                const Tolerance& tol = {}) {
  detail::require_positive_threshold(x, "markov_bound");
  const ExtReal m1 = positive_fractional_moment(d, 1.0, tol);
  if (!m1.is_finite()) return detail::finish_report(Method::markov, m1, 0, 1.0);
  return detail::finish_report(Method::markov, ExtReal::finite(m1.value() / x), 0, 1.0);
}

/// Classical Chernoff: min over alpha in (0, t_hi) of mgf(alpha) e^{-alpha x},
/// minimized in log space, with the alpha -> 0+ limit value 1 always kept as
/// a candidate. Reports mgf_domain_empty (clamped to 1) when the MGF is
/// finite nowhere right of zero, e.g. the lognormal.
inline BoundReport chernoff_bound(const Distribution& d, double x,
                                  const Tolerance& tol = {}) {
  (void)tol;
  const double t_hi = d.mgf_domain.hi;
  if (!(t_hi > 0.0)) {
    BoundReport r;
    r.method = Method::chernoff;
    r.bound_raw = ExtReal::not_computed();
    r.bound_clamped = 1.0;
    r.status = BoundStatus::mgf_domain_empty;
    return r;
  }
  constexpr double kEdge = 1e-9;
  const double hi = std::isfinite(t_hi) ? t_hi * (1.0 - kEdge)
                                        : std::numeric_limits<double>::infinity();
  auto objective = [&d, x](double alpha) {
    const ExtReal m = d.mgf(alpha);
    if (!m.is_finite() || !(m.value() > 0.0)) {
      return std::numeric_limits<double>::infinity();
    }
    return std::log(m.value()) - alpha * x;
  };
  const ScalarMinimum s = minimize_scalar(objective, kEdge, hi, 1e-9);
  if (s.value < -1e-15) {
    return detail::finish_report(Method::chernoff, ExtReal::finite(std::exp(s.value)),
                                 s.evaluations, s.argmin);
  }
  // The alpha -> 0+ limit wins: the bound degenerates to 1.
  return detail::finish_report(Method::chernoff, ExtReal::finite(1.0), s.evaluations,
                               0.0);
}

/// Fractional-moment bound: min over alpha >= 0 of m_alpha+ / x^alpha in log
/// space. alpha = 0 (value Pr[Z > 0]) is always a candidate, so the raw
/// bound never exceeds 1; divergent moments enter the objective as +inf.
/// The search interval [0, 64] is extended while the objective still
/// decreases at its right edge.
inline BoundReport moment_bound(const Distribution& d, double x,
                                const Tolerance& tol = {}) {
  detail::require_positive_threshold(x, "moment_bound");
  const ExtReal m0 = positive_fractional_moment(d, 0.0, tol);
  if (m0.is_not_computed()) {
    return detail::finish_report(Method::moment, ExtReal::not_computed(), 0, 0.0);
  }
  const double log_x = std::log(x);
  long evals = 0;
  auto objective = [&d, log_x, &tol, &evals](double alpha) {
    const ExtReal m = positive_fractional_moment(d, alpha, tol);
    ++evals;
    if (m.is_infinite() || m.is_not_computed()) {
      return std::numeric_limits<double>::infinity();
    }
    if (!(m.value() > 0.0)) return -std::numeric_limits<double>::infinity();
    return std::log(m.value()) - alpha * log_x;
  };

  double best_alpha = 0.0;
  double best_log = m0.value() > 0.0 ? std::log(m0.value())
                                     : -std::numeric_limits<double>::infinity();
  double alpha_max = 64.0;
  for (int round = 0; round < 5; ++round) {
    const ScalarMinimum s = minimize_scalar(objective, 0.0, alpha_max, 1e-9);
    if (s.value < best_log) {
      best_log = s.value;
      best_alpha = s.argmin;
    }
    const bool at_edge = s.domain_clipped && s.argmin > 0.9 * alpha_max;
    if (at_edge && std::isfinite(s.value) && alpha_max < 1024.0) {
      alpha_max *= 2.0;
      continue;
    }
    break;
  }
  return detail::finish_report(Method::moment, ExtReal::finite(std::exp(best_log)),
                               evals, best_alpha);
}

/// Operational ratio E[f(z+Z)] / f(x+z) for a fixed shift point z. The
/// soundness guarantee of the bound family: for non-decreasing f >= 0 this
/// dominates Pr[Z >= x] whenever f(x+z) > 0.
inline ExtReal operational_ratio(const Distribution& d, const ShiftFunction& f,
                                 double x, double z, const Tolerance& tol = {}) {
  const double den = f.eval(x + z);
  if (!(den > 0.0)) {
    throw DenominatorZeroError("operational_ratio: f(x+z) = 0 at z = " +
                               std::to_string(z));
  }
  const ConvolutionResult conv = convolution_expectation(d, f, z, tol);
  if (conv.diverged) return ExtReal::infinity();
  if (!conv.quad.converged) return ExtReal::not_computed();
  return ExtReal::finite(conv.quad.value / den);
}

/// Default z-search window for a shift function: step-like functions are
/// searched from just right of the denominator's zero at z = cutoff - x
/// (offset 1e-6); the logistic is searched across its transition region
/// around z = -x; smooth unbounded functions get a fixed window (for the
/// pure exponential the ratio does not depend on z at all).
inline Interval default_shift_domain(const ShiftFunction& f, double x) {
  constexpr double kEdge = 1e-6;
  if (f.support_cutoff) {
    const double lo = *f.support_cutoff - x + kEdge;
    return {lo, lo + 12.0};
  }
  if (f.name == "logistic" && !f.params.empty()) {
    const double a = f.params[0];
    return {-x - 40.0 * a - 1.0, -x + 40.0 * a + 1.0};
  }
  return {-x - 10.0, 10.0};
}

namespace detail {

inline BoundReport optimize_ratio_over_shift(const Distribution& d,
                                             const ShiftFunction& f, double x,
                                             Interval z_domain, Method method,
                                             const Tolerance& tol) {
  long evals = 0;
  auto objective = [&](double z) {
    const double den = f.eval(x + z);
    if (!(den > 0.0)) return std::numeric_limits<double>::infinity();
    const ConvolutionResult conv = convolution_expectation(d, f, z, tol);
    evals += conv.quad.evaluations;
    if (conv.diverged || !conv.quad.converged) {
      return std::numeric_limits<double>::infinity();
    }
    return conv.quad.value / den;
  };
  ScalarMinimum s;
  try {
    s = minimize_scalar(objective, z_domain.lo, z_domain.hi, 1e-9);
  } catch (const NoFiniteValueError&) {
    BoundReport r = finish_report(method, ExtReal::infinity(), evals);
    return r;
  }
  ExtReal raw = operational_ratio(d, f, x, s.argmin, tol);
  BoundReport r = finish_report(method, raw, evals, {}, s.argmin);
  return r;
}

}  // namespace detail

/// Operational bound for fixed f: min over z in z_domain of the ratio.
/// The domain must keep f(x+z) > 0 on its interior (see
/// default_shift_domain).
inline BoundReport operational_bound(const Distribution& d, const ShiftFunction& f,
                                     double x, Interval z_domain,
                                     const Tolerance& tol = {}) {
  return detail::optimize_ratio_over_shift(d, f, x, z_domain, Method::operational, tol);
}

inline BoundReport operational_bound(const Distribution& d, const ShiftFunction& f,
                                     double x, const Tolerance& tol = {}) {
  return operational_bound(d, f, x, default_shift_domain(f, x), tol);
}

/// The step-function limit of the operational bound collapses to the exact
/// tail for continuous densities.
inline BoundReport heaviside_chernoff(const Distribution& d, double x,
                                      const Tolerance& tol = {}) {
  try {
    const double tail = exact_upper_tail(d, x, tol);
    return detail::finish_report(Method::heaviside_exact, ExtReal::finite(tail), 0);
  } catch (const NonConvergentError&) {
    return detail::finish_report(Method::heaviside_exact, ExtReal::not_computed(), 0);
  }
}

/// Smoothed-step tail estimates E[f_alpha(Z - x)] for a decreasing sequence
/// of logistic widths: the step-limit evaluation at the Heaviside shift
/// point z = -x, converging to the exact tail as alpha -> 0. Each report
/// records its alpha in argmin_alpha and z = -x in argmin_z. (The
/// z-optimized logistic ratio is available via operational_bound; its gap
/// to the exact tail decays only like alpha log(1/alpha).)
inline std::vector<BoundReport> logistic_bound_sweep(const Distribution& d, double x,
                                                     const std::vector<double>& alphas,
                                                     const Tolerance& tol = {}) {
  if (alphas.empty()) {
    throw std::invalid_argument("logistic_bound_sweep: need at least one alpha");
  }
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0)) {
      throw std::invalid_argument("logistic_bound_sweep: alphas must be > 0");
    }
    if (i > 0 && !(alphas[i] < alphas[i - 1])) {
      throw std::invalid_argument("logistic_bound_sweep: alphas must be decreasing");
    }
  }
  std::vector<BoundReport> out;
  out.reserve(alphas.size());
  for (double a : alphas) {
    const ConvolutionResult conv =
        convolution_expectation(d, make_logistic_shift(a), -x, tol);
    ExtReal raw = conv.quad.converged
                      ? ExtReal::finite(std::clamp(conv.quad.value, 0.0, 1.0))
                      : ExtReal::not_computed();
    out.push_back(detail::finish_report(Method::logistic, raw, conv.quad.evaluations,
                                        a, -x));
  }
  return out;
}

/// The two discontinuous step-approximant families, bounded by direct
/// convolution quadrature at z = 0 (series routes for these oscillate or
/// diverge and are only diagnosed, never summed):
///   truncated_exp:   f = e^{alpha w} u(w), minimized over alpha
///   truncated_power: f = w^alpha u(w),     minimized over alpha; this one
///                    reproduces the fractional-moment bound.
inline std::vector<BoundReport> section5_bounds(const Distribution& d, double x,
                                                const Tolerance& tol = {}) {
  detail::require_positive_threshold(x, "section5_bounds");
  std::vector<BoundReport> out;

  // -- truncated exponential, z = 0 --------------------------------------
  {
    long evals = 0;
    auto objective = [&](double alpha) {
      const ConvolutionResult conv =
          convolution_expectation(d, make_truncated_exp_shift(alpha), 0.0, tol);
      evals += conv.quad.evaluations;
      if (conv.diverged || !conv.quad.converged) {
        return std::numeric_limits<double>::infinity();
      }
      if (!(conv.quad.value > 0.0)) return -std::numeric_limits<double>::infinity();
      return std::log(conv.quad.value) - alpha * x;
    };
    // alpha -> 0+ limit: f -> u(w), the ratio at z=0 tends to Pr[Z > 0].
    const ExtReal m0 = positive_fractional_moment(d, 0.0, tol);
    double best_log = std::numeric_limits<double>::infinity();
    if (m0.is_finite()) {
      best_log = m0.value() > 0.0 ? std::log(m0.value())
                                  : -std::numeric_limits<double>::infinity();
    }
    double best_alpha = 0.0;
    // E[e^{alpha Z} u(Z)] shares the MGF's upper convergence edge: search
    // alpha in (0, t_hi) only.
    const double t_hi = d.mgf_domain.hi;
    if (t_hi > 0.0) {
      const double hi_alpha = std::isfinite(t_hi)
                                  ? t_hi * (1.0 - 1e-9)
                                  : std::numeric_limits<double>::infinity();
      try {
        const ScalarMinimum s = minimize_scalar(objective, 1e-9, hi_alpha, 1e-9);
        if (s.value < best_log) {
          best_log = s.value;
          best_alpha = s.argmin;
        }
      } catch (const NoFiniteValueError&) {
        // fall through to the limit candidate
      }
    }
    ExtReal raw = best_log == std::numeric_limits<double>::infinity()
                      ? ExtReal::not_computed()
                      : ExtReal::finite(std::exp(best_log));
    out.push_back(detail::finish_report(Method::truncated_exp, raw, evals, best_alpha,
                                        0.0));
  }

  // -- truncated power, z = 0 (the moment bound through the convolution
  //    route; mirrors moment_bound's alpha handling) ----------------------
  {
    long evals = 0;
    const double log_x = std::log(x);
    auto objective = [&](double alpha) {
      const ConvolutionResult conv =
          convolution_expectation(d, make_power_shift(alpha), 0.0, tol);
      evals += conv.quad.evaluations;
      if (conv.diverged || !conv.quad.converged) {
        return std::numeric_limits<double>::infinity();
      }
      if (!(conv.quad.value > 0.0)) return -std::numeric_limits<double>::infinity();
      return std::log(conv.quad.value) - alpha * log_x;
    };
    const ExtReal m0 = positive_fractional_moment(d, 0.0, tol);
    double best_log = m0.is_finite() && m0.value() > 0.0
                          ? std::log(m0.value())
                          : -std::numeric_limits<double>::infinity();
    double best_alpha = 0.0;
    double alpha_max = 64.0;
    for (int round = 0; round < 5; ++round) {
      const ScalarMinimum s = minimize_scalar(objective, 0.0, alpha_max, 1e-9);
      if (s.value < best_log) {
        best_log = s.value;
        best_alpha = s.argmin;
      }
      const bool at_edge = s.domain_clipped && s.argmin > 0.9 * alpha_max;
      if (at_edge && std::isfinite(s.value) && alpha_max < 1024.0) {
        alpha_max *= 2.0;
        continue;
      }
      break;
    }
    out.push_back(detail::finish_report(Method::truncated_power,
                                        ExtReal::finite(std::exp(best_log)), evals,
                                        best_alpha, 0.0));
  }
  return out;
}

/// All bound families at one threshold, with the ordering verdict
///   exact <= moment + slack  and  moment <= chernoff + slack
/// (the Chernoff leg is vacuous when the MGF domain is empty).
struct ComparisonTable {
  double x = 0.0;
  double exact = 0.0;
  std::vector<BoundReport> rows;
  bool ordering_ok = false;
};

inline constexpr double kCompareLogisticAlpha = 0.05;

inline ComparisonTable compare_all(const Distribution& d, double x,
                                   const Tolerance& tol = {},
                                   const std::optional<ShiftFunction>& extra_f = {}) {
  detail::require_positive_threshold(x, "compare_all");
  ComparisonTable table;
  table.x = x;
  table.exact = exact_upper_tail(d, x, tol);

  table.rows.push_back(heaviside_chernoff(d, x, tol));
  table.rows.push_back(markov_bound(d, x, tol));
  const BoundReport chernoff = chernoff_bound(d, x, tol);
  table.rows.push_back(chernoff);
  const BoundReport moment = moment_bound(d, x, tol);
  table.rows.push_back(moment);
  for (BoundReport& r : section5_bounds(d, x, tol)) table.rows.push_back(r);
  for (BoundReport& r :
       logistic_bound_sweep(d, x, {kCompareLogisticAlpha}, tol)) {
    table.rows.push_back(r);
  }
  if (extra_f) {
    table.rows.push_back(operational_bound(d, *extra_f, x, tol));
  }

  const bool exact_leg =
      moment.bound_raw.is_finite() &&
      table.exact <= moment.bound_raw.value() + kOrderingSlack;
  const bool chernoff_leg =
      chernoff.status == BoundStatus::mgf_domain_empty ||
      ext_leq(moment.bound_raw, chernoff.bound_raw, kOrderingSlack);
  table.ordering_ok = exact_leg && chernoff_leg;
  return table;
}

}  // namespace tailbound
