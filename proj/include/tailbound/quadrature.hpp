#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "tailbound/errors.hpp"

namespace tailbound {

/// Accuracy request for adaptive integration. Defaults give headroom below
/// the 1e-8 tolerances used by the bound checks.
struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 2000;

  void validate() const {
    if (!(abs_tol > 0.0 && abs_tol < 1.0) || !(rel_tol > 0.0 && rel_tol < 1.0)) {
      throw std::invalid_argument("Tolerance: abs_tol and rel_tol must lie in (0, 1)");
    }
    if (max_subdivisions < 1) {
      throw std::invalid_argument("Tolerance: max_subdivisions must be >= 1");
    }
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = std::numeric_limits<double>::infinity();
  bool converged = false;
  long evaluations = 0;
};

namespace detail {

// Gauss-7 / Kronrod-15 pair on [-1, 1]. Positive abscissae, descending;
// index 7 is the centre. Gauss points are the odd Kronrod indices plus
// the centre.
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double integral = 0.0;
  double error = 0.0;
};

inline bool panel_less(const Panel& x, const Panel& y) { return x.error < y.error; }

/// One Gauss-Kronrod 15-point panel with the QUADPACK error heuristic.
inline Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  double fv_lo[7], fv_hi[7];
  const double fc = f(c);
  double resk = kKronrodWeights[7] * fc;
  double resg = kGaussWeights[3] * fc;
  double resabs = std::abs(resk);
  for (int i = 0; i < 7; ++i) {
    fv_lo[i] = f(c - h * kKronrodNodes[i]);
    fv_hi[i] = f(c + h * kKronrodNodes[i]);
    const double sum = fv_lo[i] + fv_hi[i];
    resk += kKronrodWeights[i] * sum;
    resabs += kKronrodWeights[i] * (std::abs(fv_lo[i]) + std::abs(fv_hi[i]));
    if (i % 2 == 1) resg += kGaussWeights[i / 2] * sum;
  }

  const double reskh = resk * 0.5;
  double resasc = kKronrodWeights[7] * std::abs(fc - reskh);
  for (int i = 0; i < 7; ++i) {
    resasc += kKronrodWeights[i] *
              (std::abs(fv_lo[i] - reskh) + std::abs(fv_hi[i] - reskh));
  }
  resabs *= std::abs(h);
  resasc *= std::abs(h);

  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / eps50) {
    err = std::max(eps50 * resabs, err);
  }

  Panel p;
  p.a = a;
  p.b = b;
  p.integral = resk * h;
  p.error = err;
  return p;
}

/// Globally adaptive bisection over a finite interval: worst panel first.
/// initial_panels pre-splits the interval so that localized features are
/// seen by at least one starting panel (the transforms of infinite
/// intervals compress everything into (0,1), so they seed more).
inline QuadratureResult adaptive_finite(const std::function<double(double)>& f,
                                        double a, double b, const Tolerance& tol,
                                        int initial_panels = 4) {
  QuadratureResult res;
  std::priority_queue<Panel, std::vector<Panel>, decltype(&panel_less)> heap(&panel_less);

  double total = 0.0;
  double toterr = 0.0;
  for (int i = 0; i < initial_panels; ++i) {
    const double pa = a + (b - a) * i / initial_panels;
    const double pb = a + (b - a) * (i + 1) / initial_panels;
    Panel p = gk15(f, pa, pb);
    res.evaluations += 15;
    total += p.integral;
    toterr += p.error;
    heap.push(p);
  }

  double frozen_err = 0.0;  // panels too narrow to bisect further
  int splits = 0;
  while (true) {
    if (!std::isfinite(total) || !std::isfinite(toterr)) {
      res.value = total;
      res.error_estimate = std::numeric_limits<double>::infinity();
      res.converged = false;
      return res;
    }
    const double target = std::max(tol.abs_tol, tol.rel_tol * std::abs(total));
    if (toterr + frozen_err <= target) {
      res.converged = true;
      break;
    }
    if (splits >= tol.max_subdivisions || heap.empty()) break;

    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const double min_width = 64.0 * std::numeric_limits<double>::epsilon() *
                             std::max({std::abs(worst.a), std::abs(worst.b), 1.0});
    if (!(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < min_width) {
      frozen_err += worst.error;  // give up on this panel, keep its estimate
      toterr = std::max(toterr - worst.error, 0.0);
      continue;
    }
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    res.evaluations += 30;
    ++splits;
    total += left.integral + right.integral - worst.integral;
    toterr = std::max(toterr + left.error + right.error - worst.error, 0.0);
    heap.push(left);
    heap.push(right);
  }

  res.value = total;
  res.error_estimate = toterr + frozen_err;
  return res;
}

}  // namespace detail

/// Adaptive integral of f over (a, b); infinite endpoints are mapped to a
/// finite interval first:
///   (a, +inf)    via y = a + x/(1-x),   x in (0, 1)
///   (-inf, b)    via y = b - x/(1-x),   x in (0, 1)
///   (-inf, +inf) via y = x/(1-x^2),     x in (-1, 1)
/// The substitutions are fixed so that serialized outputs are reproducible.
/// On budget exhaustion the estimate is still returned with converged=false.
inline QuadratureResult integrate(const std::function<double(double)>& f,
                                  double a, double b, const Tolerance& tol = {}) {
  if (!(a < b)) throw std::invalid_argument("integrate: requires a < b");

  const bool lo_inf = std::isinf(a);
  const bool hi_inf = std::isinf(b);
  if (!lo_inf && !hi_inf) {
    return detail::adaptive_finite(f, a, b, tol);
  }
  if (!lo_inf && hi_inf) {
    auto g = [&f, a](double x) {
      const double om = 1.0 - x;
      const double y = a + x / om;
      if (!std::isfinite(y)) return 0.0;
      const double fy = f(y);
      if (fy == 0.0) return 0.0;
      return fy / (om * om);
    };
    return detail::adaptive_finite(g, 0.0, 1.0, tol, 16);
  }
  if (lo_inf && !hi_inf) {
    auto g = [&f, b](double x) {
      const double om = 1.0 - x;
      const double y = b - x / om;
      if (!std::isfinite(y)) return 0.0;
      const double fy = f(y);
      if (fy == 0.0) return 0.0;
      return fy / (om * om);
    };
    return detail::adaptive_finite(g, 0.0, 1.0, tol, 16);
  }
  auto g = [&f](double x) {
    const double om = 1.0 - x * x;
    const double y = x / om;
    if (!std::isfinite(y)) return 0.0;
    const double fy = f(y);
    if (fy == 0.0) return 0.0;
    return fy * (1.0 + x * x) / (om * om);
  };
  return detail::adaptive_finite(g, -1.0, 1.0, tol, 16);
}

/// Semi-infinite integral with divergence detection: nested truncations
/// [s, T_k], T_k = s + w0 * 2^k. Divergence is declared when increments fail
/// to decay geometrically over 6 consecutive doublings (or go non-finite);
/// convergence when two consecutive increments fall below the tolerance
/// threshold. first_width sets the initial window w0: it must cover the
/// integrand's bulk, otherwise the near-zero leading windows would satisfy
/// the quiet-exit test before any mass has been seen (callers that know a
/// tail function pass a coverage-based width; see
/// detail::first_window_width).
struct TailIntegral {
  QuadratureResult result;
  bool diverged = false;
};

inline TailIntegral integrate_to_infinity(const std::function<double(double)>& f,
                                          double s, const Tolerance& tol = {},
                                          double first_width = 4.0) {
  if (!std::isfinite(s)) {
    throw std::invalid_argument("integrate_to_infinity: lower limit must be finite");
  }
  if (!(first_width > 0.0) || !std::isfinite(first_width)) {
    throw std::invalid_argument("integrate_to_infinity: first_width must be finite and > 0");
  }
  constexpr int kMaxWindows = 80;
  constexpr int kDivergenceStreak = 6;
  constexpr double kDecayFactor = 0.99;

  Tolerance wtol = tol;
  wtol.abs_tol = tol.abs_tol * 0.25;

  TailIntegral out;
  double acc = 0.0;
  double err = 0.0;
  long evals = 0;
  double prev_inc = 0.0;
  double last_inc = 0.0;
  int fail_streak = 0;
  int quiet_streak = 0;
  bool all_windows_converged = true;
  double t_prev = s;

  for (int k = 0; k < kMaxWindows; ++k) {
    const double t_next = s + first_width * std::ldexp(1.0, k);
    QuadratureResult w = detail::adaptive_finite(f, t_prev, t_next, wtol, 2);
    evals += w.evaluations;
    if (!std::isfinite(w.value)) {
      out.diverged = true;
      out.result = {acc, err, false, evals};
      return out;
    }
    acc += w.value;
    err += w.error_estimate;
    all_windows_converged = all_windows_converged && w.converged;
    last_inc = w.value;

    const double thresh = 0.25 * std::max(tol.abs_tol, tol.rel_tol * std::abs(acc));
    if (std::abs(last_inc) <= thresh) {
      ++quiet_streak;
      fail_streak = 0;
    } else {
      quiet_streak = 0;
      if (k > 0 && std::abs(last_inc) >= kDecayFactor * std::abs(prev_inc)) {
        ++fail_streak;
      } else {
        fail_streak = 0;
      }
    }
    if (quiet_streak >= 2) {
      const double total_err = err + std::abs(last_inc);
      const bool within = total_err <= std::max(tol.abs_tol, tol.rel_tol * std::abs(acc));
      out.result = {acc, total_err, all_windows_converged && within, evals};
      return out;
    }
    if (fail_streak >= kDivergenceStreak) {
      out.diverged = true;
      out.result = {acc, err, false, evals};
      return out;
    }
    prev_inc = last_inc;
    t_prev = t_next;
  }
  out.result = {acc, err + std::abs(last_inc), false, evals};
  return out;
}

}  // namespace tailbound
