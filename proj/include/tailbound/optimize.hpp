#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tailbound/errors.hpp"

namespace tailbound {

/// Result of a one-dimensional minimization. domain_clipped reports a
/// minimum pinned at a feasible-domain edge (monotone objective);
/// bracketed means the argmin sat strictly between two worse points.
struct ScalarMinimum {
  double argmin = 0.0;
  double value = std::numeric_limits<double>::infinity();
  long evaluations = 0;
  bool bracketed = false;
  bool domain_clipped = false;
};

namespace detail {

inline constexpr int kSeedGridPoints = 64;
inline constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5)-1)/2

/// Seed grid over the open interval (lo, hi): uniform midpoints when
/// bounded, geometric offsets (1e-9 .. 1e9) from the finite end when
/// semi-infinite, and a tangent map when doubly infinite. The objectives
/// here carry no structure guarantees, so the grid guards the local
/// refinement against multimodality.
inline std::vector<double> seed_grid(double lo, double hi) {
  std::vector<double> pts;
  pts.reserve(kSeedGridPoints);
  const bool lo_inf = std::isinf(lo);
  const bool hi_inf = std::isinf(hi);
  if (!lo_inf && !hi_inf) {
    for (int i = 0; i < kSeedGridPoints; ++i) {
      pts.push_back(lo + (hi - lo) * (i + 0.5) / kSeedGridPoints);
    }
  } else if (!lo_inf && hi_inf) {
    const double ratio = std::pow(1e18, 1.0 / (kSeedGridPoints - 1));
    double off = 1e-9;
    for (int i = 0; i < kSeedGridPoints; ++i, off *= ratio) pts.push_back(lo + off);
  } else if (lo_inf && !hi_inf) {
    const double ratio = std::pow(1e18, 1.0 / (kSeedGridPoints - 1));
    double off = 1e9;
    for (int i = 0; i < kSeedGridPoints; ++i, off /= ratio) pts.push_back(hi - off);
  } else {
    for (int i = 0; i < kSeedGridPoints; ++i) {
      const double u = (i + 0.5) / kSeedGridPoints;
      pts.push_back(std::tan(M_PI * (u - 0.5)));
    }
  }
  return pts;
}

}  // namespace detail

/// Minimize g over the open interval (lo, hi): coarse seed grid, then
/// golden-section refinement of the best grid cell down to width tol on the
/// argmin. g may return +infinity (treated as worse than any finite value);
/// NaN is treated the same way. Throws NoFiniteValueError when the whole
/// seed grid is infinite.
inline ScalarMinimum minimize_scalar(const std::function<double(double)>& g,
                                     double lo, double hi, double tol = 1e-9) {
  if (!(lo < hi)) throw std::invalid_argument("minimize_scalar: requires lo < hi");
  if (!(tol > 0.0)) throw std::invalid_argument("minimize_scalar: tol must be > 0");

  ScalarMinimum out;
  auto eval = [&g, &out](double x) {
    double v = g(x);
    ++out.evaluations;
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  const std::vector<double> pts = detail::seed_grid(lo, hi);
  std::vector<double> vals(pts.size());
  std::size_t best = pts.size();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    vals[i] = eval(pts[i]);
    if (best == pts.size() || vals[i] < vals[best]) best = i;
  }
  if (best == pts.size() || vals[best] == std::numeric_limits<double>::infinity()) {
    throw NoFiniteValueError("minimize_scalar: objective is +inf on the entire seed grid");
  }

  out.domain_clipped = (best == 0 && !std::isinf(lo)) ||
                       (best + 1 == pts.size() && !std::isinf(hi));

  // Refinement bracket around the best grid point.
  double best_x = pts[best];
  double best_f = vals[best];
  double a, b;
  double fa = std::numeric_limits<double>::infinity();
  double fb = std::numeric_limits<double>::infinity();
  if (best == 0) {
    a = std::isinf(lo) ? pts[0] - 4.0 * (pts[1] - pts[0]) : lo;
    b = pts[1];
    fb = vals[1];
  } else if (best + 1 == pts.size()) {
    a = pts[best - 1];
    fa = vals[best - 1];
    if (std::isinf(hi)) {
      // Expand outward while the objective keeps improving.
      double step = pts[best] - pts[best - 1];
      double x = best_x + step;
      double fx = eval(x);
      int guard = 0;
      while (fx < best_f && guard++ < 128) {
        a = best_x;
        fa = best_f;
        best_x = x;
        best_f = fx;
        step *= 2.0;
        x += step;
        fx = eval(x);
      }
      b = x;
      fb = fx;
      if (guard > 0) out.domain_clipped = false;
    } else {
      b = hi;
    }
  } else {
    a = pts[best - 1];
    b = pts[best + 1];
    fa = vals[best - 1];
    fb = vals[best + 1];
  }
  out.bracketed = best_f <= fa && best_f <= fb && std::isfinite(fa + fb);

  // Golden-section: shrink (a, b) to width tol, tracking the best interior
  // point seen.
  double x1 = b - detail::kInvPhi * (b - a);
  double x2 = a + detail::kInvPhi * (b - a);
  double f1 = eval(x1);
  double f2 = eval(x2);
  int iter = 0;
  while ((b - a) > tol && iter++ < 256) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - detail::kInvPhi * (b - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + detail::kInvPhi * (b - a);
      f2 = eval(x2);
    }
  }
  if (f1 < best_f) {
    best_f = f1;
    best_x = x1;
  }
  if (f2 < best_f) {
    best_f = f2;
    best_x = x2;
  }

  out.argmin = best_x;
  out.value = best_f;
  return out;
}

}  // namespace tailbound
