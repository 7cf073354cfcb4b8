#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tailbound/errors.hpp"

namespace tailbound {

/// A nonnegative non-decreasing shift function f, the tunable object in the
/// operational bound E[f(z+Z)] / f(x+z). derivative(n, w) is an analytic
/// n-th-derivative oracle (empty when the function has none, e.g. the step).
/// support_cutoff c marks f(w) = 0 for w < c; integrators split there and
/// never integrate across the jump.
struct ShiftFunction {
  std::string name;
  std::vector<double> params;
  std::function<double(double)> eval;
  std::function<double(int, double)> derivative;
  bool nondecreasing = true;
  bool sam_claimed = false;
  std::optional<double> support_cutoff;

  std::string spec_string() const {
    std::string s = name;
    for (std::size_t i = 0; i < params.size(); ++i) {
      s += (i == 0 ? ':' : ',');
      s += std::to_string(params[i]);
    }
    return s;
  }
};

namespace detail {

// n-th derivative of the logistic sigmoid(w/alpha) as a polynomial in the
// sigmoid value s: d/dw s^k = k (s^k - s^{k+1}) / alpha.
inline double logistic_derivative(double alpha, int n, double w) {
  const double s = 1.0 / (1.0 + std::exp(-w / alpha));
  if (n == 0) return s;
  std::vector<double> c{0.0, 1.0};  // coefficients of s^k, starting from f = s
  for (int step = 0; step < n; ++step) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t k = 1; k < c.size(); ++k) {
      next[k] += static_cast<double>(k) * c[k] / alpha;
      next[k + 1] -= static_cast<double>(k) * c[k] / alpha;
    }
    c = std::move(next);
  }
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * s + c[k];
  return acc;
}

inline double falling_factorial(double alpha, int n) {
  double f = 1.0;
  for (int j = 0; j < n; ++j) f *= (alpha - j);
  return f;
}

}  // namespace detail

/// f(w) = exp(alpha w); strictly absolutely monotonic for alpha > 0.
/// alpha = 0 gives the constant function 1.
inline ShiftFunction make_exp_shift(double alpha) {
  if (!(alpha >= 0.0)) {
    throw std::invalid_argument("exp shift: alpha must be >= 0 (non-decreasing)");
  }
  ShiftFunction f;
  f.name = "exp";
  f.params = {alpha};
  f.eval = [alpha](double w) { return std::exp(alpha * w); };
  f.derivative = [alpha](int n, double w) {
    return std::pow(alpha, n) * std::exp(alpha * w);
  };
  f.sam_claimed = alpha > 0.0;
  return f;
}

/// Heaviside step u(w): 1 for w > 0, 0 for w < 0, 1/2 at the jump. The
/// value at w = 0 never enters an integral (panels split at the cutoff).
/// No derivative oracle.
inline ShiftFunction make_step_shift() {
  ShiftFunction f;
  f.name = "step";
  f.eval = [](double w) { return w > 0.0 ? 1.0 : (w < 0.0 ? 0.0 : 0.5); };
  f.support_cutoff = 0.0;
  return f;
}

/// f(w) = w^alpha u(w). Derivatives for w > 0 use falling factorials;
/// identically zero left of the cutoff.
inline ShiftFunction make_power_shift(double alpha) {
  if (!(alpha >= 0.0)) {
    throw std::invalid_argument("power shift: alpha must be >= 0 (non-decreasing)");
  }
  ShiftFunction f;
  f.name = "power";
  f.params = {alpha};
  f.eval = [alpha](double w) {
    if (w > 0.0) return std::pow(w, alpha);
    if (w < 0.0) return 0.0;
    return alpha == 0.0 ? 0.5 : 0.0;
  };
  f.derivative = [alpha](int n, double w) {
    if (w <= 0.0) return 0.0;
    return detail::falling_factorial(alpha, n) * std::pow(w, alpha - n);
  };
  f.support_cutoff = 0.0;
  return f;
}

/// f(w) = exp(alpha w) u(w): increasing but not SAM (vanishes left of 0).
inline ShiftFunction make_truncated_exp_shift(double alpha) {
  if (!(alpha >= 0.0)) {
    throw std::invalid_argument("trunc-exp shift: alpha must be >= 0 (non-decreasing)");
  }
  ShiftFunction f;
  f.name = "trunc-exp";
  f.params = {alpha};
  f.eval = [alpha](double w) {
    if (w > 0.0) return std::exp(alpha * w);
    return w < 0.0 ? 0.0 : 0.5;
  };
  f.derivative = [alpha](int n, double w) {
    if (w <= 0.0) return 0.0;
    return std::pow(alpha, n) * std::exp(alpha * w);
  };
  f.support_cutoff = 0.0;
  return f;
}

/// f(w) = 1 / (1 + exp(-w/alpha)): a smooth step approximant. Not SAM (its
/// derivatives alternate in sign for w > 0).
inline ShiftFunction make_logistic_shift(double alpha) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("logistic shift: alpha must be > 0");
  }
  ShiftFunction f;
  f.name = "logistic";
  f.params = {alpha};
  f.eval = [alpha](double w) { return 1.0 / (1.0 + std::exp(-w / alpha)); };
  f.derivative = [alpha](int n, double w) {
    return detail::logistic_derivative(alpha, n, w);
  };
  return f;
}

/// True when f is non-decreasing on a 1024-point probe grid over [lo, hi].
inline bool probe_nondecreasing(const ShiftFunction& f, double lo, double hi,
                                int points = 1024) {
  double prev = f.eval(lo);
  for (int i = 1; i < points; ++i) {
    const double w = lo + (hi - lo) * i / (points - 1.0);
    const double v = f.eval(w);
    if (v < prev - 1e-12 * std::max(1.0, std::abs(prev))) return false;
    prev = v;
  }
  return true;
}

inline const char* shift_function_grammar() {
  return "exp:ALPHA | step | power:ALPHA | trunc-exp:ALPHA | logistic:ALPHA";
}

inline ShiftFunction parse_shift_function(const std::string& spec) {
  const auto bad = [&spec](const std::string& why) {
    throw std::invalid_argument("invalid shift function '" + spec + "': " + why +
                                "; expected one of " + std::string(shift_function_grammar()));
  };
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::optional<double> alpha;
  if (colon != std::string::npos) {
    const std::string tok = spec.substr(colon + 1);
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || end != tok.c_str() + tok.size() || !std::isfinite(v)) {
      bad("cannot parse parameter '" + tok + "'");
    }
    alpha = v;
  }
  if (name != "exp" && name != "step" && name != "power" && name != "trunc-exp" &&
      name != "logistic") {
    bad("unknown name '" + name + "'");
  }
  if (name == "step") {
    if (alpha) bad("'step' takes no parameter");
    return make_step_shift();
  }
  if (!alpha) bad("'" + name + "' requires a parameter");
  try {
    if (name == "exp") return make_exp_shift(*alpha);
    if (name == "power") return make_power_shift(*alpha);
    if (name == "trunc-exp") return make_truncated_exp_shift(*alpha);
    return make_logistic_shift(*alpha);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("invalid shift function '" + spec + "': " + e.what());
  }
}

}  // namespace tailbound
