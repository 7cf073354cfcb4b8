#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tailbound/errors.hpp"
#include "tailbound/extended_real.hpp"
#include "tailbound/interval.hpp"
#include "tailbound/quadrature.hpp"
#include "tailbound/special.hpp"

namespace tailbound {

/// A continuous probability law. Values are immutable after construction
/// and safe to share across threads; every operation below is a pure
/// function of its inputs.
///
/// Convention: mgf(t) = E[exp(t Z)], finite on the interior of mgf_domain
/// and reported as an infinite marker outside it. closed_form_tail and
/// moment_oracle are optional (empty std::function when absent).
struct Distribution {
  std::string name;
  std::vector<double> params;
  Interval support;
  std::function<double(double)> density;
  Interval mgf_domain;
  std::function<ExtReal(double)> mgf;
  std::function<double(double)> closed_form_tail;
  std::function<double(int)> moment_oracle;

  /// CLI spec string, e.g. "exp:1" or "normal:0,1".
  std::string spec_string() const;
};

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline const double kSqrt2Pi = std::sqrt(2.0 * M_PI);

inline std::string format_param(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

/// First truncation-window width covering the density's bulk: without it,
/// a law whose mass sits far from the window start (normal:100,0.5) would
/// pass the tail scheme's quiet-exit test on near-zero leading windows.
/// Doubles a probe point until the closed-form tail drops below 1e-12;
/// falls back to the plain width when no tail function is available.
inline double first_window_width(const std::function<double(double)>& tail_fn,
                                 double s) {
  if (!tail_fn) return 4.0;
  double t = std::max(s + 4.0, 1.0);
  for (int guard = 0; tail_fn(t) > 1e-12 && guard < 60; ++guard) t *= 2.0;
  return std::max(4.0, t - s);
}

/// Integral of w(y) * density(y) over (max(support.lo, lo_clip), support.hi),
/// with the upper tail handled by the truncation-doubling scheme when the
/// support is unbounded above. lo_clip is the exact location of any
/// integrand discontinuity (Heaviside factors), so no panel straddles it.
struct WeightedIntegral {
  QuadratureResult quad;
  bool diverged = false;
};

inline WeightedIntegral integrate_density_product(
    const Distribution& d, const std::function<double(double)>& w,
    double lo_clip, const Tolerance& tol) {
  const double lo = std::max(d.support.lo, lo_clip);
  const double hi = d.support.hi;
  WeightedIntegral out;
  if (!(lo < hi)) {
    out.quad = {0.0, 0.0, true, 0};
    return out;
  }
  auto g = [&d, &w](double y) {
    const double p = d.density(y);
    if (p <= 0.0) return 0.0;
    return p * w(y);
  };
  if (std::isfinite(hi)) {
    out.quad = integrate(g, lo, hi, tol);
    return out;
  }
  const double split = std::isfinite(lo) ? lo : 0.0;
  QuadratureResult head{0.0, 0.0, true, 0};
  if (lo < split) {
    head = integrate(g, lo, split, tol);
  }
  TailIntegral tail = integrate_to_infinity(g, split, tol,
                                            first_window_width(d.closed_form_tail, split));
  out.diverged = tail.diverged;
  out.quad.value = head.value + tail.result.value;
  out.quad.error_estimate = head.error_estimate + tail.result.error_estimate;
  out.quad.converged = head.converged && tail.result.converged && !tail.diverged;
  out.quad.evaluations = head.evaluations + tail.result.evaluations;
  return out;
}

inline double tail_by_quadrature(const Distribution& d, double x, const Tolerance& tol) {
  if (x <= d.support.lo) return 1.0;
  if (x >= d.support.hi) return 0.0;
  auto one = [](double) { return 1.0; };
  WeightedIntegral r = integrate_density_product(d, one, x, tol);
  if (!r.quad.converged) {
    throw NonConvergentError("exact_upper_tail: quadrature did not converge");
  }
  return std::clamp(r.quad.value, 0.0, 1.0);
}

inline double moment_by_quadrature(const Distribution& d, int n, const Tolerance& tol) {
  auto w = [n](double y) { return std::pow(y, n); };
  WeightedIntegral r = integrate_density_product(d, w, -kInf, tol);
  if (r.diverged || !r.quad.converged) {
    throw NonConvergentError("raw_moment: quadrature did not converge");
  }
  return r.quad.value;
}

}  // namespace detail

inline std::string Distribution::spec_string() const {
  std::string s = name;
  for (std::size_t i = 0; i < params.size(); ++i) {
    s += (i == 0 ? ':' : ',');
    s += detail::format_param(params[i]);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

inline Distribution make_normal(double mu, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("normal: sigma must be > 0");
  Distribution d;
  d.name = "normal";
  d.params = {mu, sigma};
  d.support = {-detail::kInf, detail::kInf};
  d.density = [mu, sigma](double z) {
    const double t = (z - mu) / sigma;
    return std::exp(-0.5 * t * t) / (sigma * detail::kSqrt2Pi);
  };
  d.mgf_domain = {-detail::kInf, detail::kInf};
  d.mgf = [mu, sigma](double t) {
    return ExtReal::finite(std::exp(mu * t + 0.5 * sigma * sigma * t * t));
  };
  d.closed_form_tail = [mu, sigma](double x) {
    return 0.5 * std::erfc((x - mu) / (sigma * M_SQRT2));
  };
  d.moment_oracle = [mu, sigma](int n) {
    // m_n = mu m_{n-1} + (n-1) sigma^2 m_{n-2}
    double prev = 1.0, cur = mu;
    if (n == 0) return 1.0;
    for (int i = 2; i <= n; ++i) {
      const double next = mu * cur + (i - 1) * sigma * sigma * prev;
      prev = cur;
      cur = next;
    }
    return cur;
  };
  return d;
}

inline Distribution make_standard_normal() { return make_normal(0.0, 1.0); }

inline Distribution make_exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exp: rate must be > 0");
  Distribution d;
  d.name = "exp";
  d.params = {rate};
  d.support = {0.0, detail::kInf};
  d.density = [rate](double z) { return z < 0.0 ? 0.0 : rate * std::exp(-rate * z); };
  d.mgf_domain = {-detail::kInf, rate};
  d.mgf = [rate](double t) {
    if (t >= rate) return ExtReal::infinity();
    return ExtReal::finite(rate / (rate - t));
  };
  d.closed_form_tail = [rate](double x) { return x <= 0.0 ? 1.0 : std::exp(-rate * x); };
  d.moment_oracle = [rate](int n) {
    double m = 1.0;
    for (int i = 1; i <= n; ++i) m *= i / rate;
    return m;
  };
  return d;
}

/// Gamma law with shape k and scale theta (mean k*theta).
inline Distribution make_gamma(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw std::invalid_argument("gamma: shape and scale must be > 0");
  }
  Distribution d;
  d.name = "gamma";
  d.params = {shape, scale};
  d.support = {0.0, detail::kInf};
  const double log_norm = std::lgamma(shape) + shape * std::log(scale);
  d.density = [shape, scale, log_norm](double z) {
    if (z <= 0.0) return 0.0;
    return std::exp((shape - 1.0) * std::log(z) - z / scale - log_norm);
  };
  d.mgf_domain = {-detail::kInf, 1.0 / scale};
  d.mgf = [shape, scale](double t) {
    if (t >= 1.0 / scale) return ExtReal::infinity();
    return ExtReal::finite(std::exp(-shape * std::log1p(-scale * t)));
  };
  d.closed_form_tail = [shape, scale](double x) {
    return x <= 0.0 ? 1.0 : special::gamma_q(shape, x / scale);
  };
  d.moment_oracle = [shape, scale](int n) {
    double m = 1.0;
    for (int i = 0; i < n; ++i) m *= scale * (shape + i);
    return m;
  };
  return d;
}

inline Distribution make_uniform(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("uniform: requires a < b");
  Distribution d;
  d.name = "uniform";
  d.params = {a, b};
  d.support = {a, b};
  const double dens = 1.0 / (b - a);
  d.density = [a, b, dens](double z) { return (z >= a && z <= b) ? dens : 0.0; };
  d.mgf_domain = {-detail::kInf, detail::kInf};
  d.mgf = [a, b](double t) {
    if (t == 0.0) return ExtReal::finite(1.0);
    const double u = t * (b - a);
    return ExtReal::finite(std::exp(t * a) * std::expm1(u) / u);
  };
  d.closed_form_tail = [a, b](double x) {
    if (x <= a) return 1.0;
    if (x >= b) return 0.0;
    return (b - x) / (b - a);
  };
  d.moment_oracle = [a, b](int n) {
    return (std::pow(b, n + 1) - std::pow(a, n + 1)) / ((n + 1) * (b - a));
  };
  return d;
}

/// Log-normal law: exercises the "Chernoff infeasible, moment bound finite"
/// path, since E[exp(tZ)] is infinite for every t > 0.
inline Distribution make_lognormal(double mu, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("lognormal: sigma must be > 0");
  Distribution d;
  d.name = "lognormal";
  d.params = {mu, sigma};
  d.support = {0.0, detail::kInf};
  d.density = [mu, sigma](double z) {
    if (z <= 0.0) return 0.0;
    const double t = (std::log(z) - mu) / sigma;
    return std::exp(-0.5 * t * t) / (z * sigma * detail::kSqrt2Pi);
  };
  d.mgf_domain = {-detail::kInf, 0.0};
  d.mgf = [mu, sigma](double t) -> ExtReal {
    if (t > 0.0) return ExtReal::infinity();
    if (t == 0.0) return ExtReal::finite(1.0);
    // No elementary closed form for t < 0; bounded integrand, quadrature.
    auto g = [mu, sigma, t](double y) {
      if (y <= 0.0) return 0.0;
      const double u = (std::log(y) - mu) / sigma;
      return std::exp(t * y - 0.5 * u * u) / (y * sigma * detail::kSqrt2Pi);
    };
    // Mass sits near exp(mu); cover it in the first truncation window.
    const double width = std::max(4.0, std::exp(mu + 7.0 * sigma));
    TailIntegral r = integrate_to_infinity(g, 0.0, Tolerance{}, width);
    if (!r.result.converged) return ExtReal::not_computed();
    return ExtReal::finite(r.result.value);
  };
  d.closed_form_tail = [mu, sigma](double x) {
    if (x <= 0.0) return 1.0;
    return 0.5 * std::erfc((std::log(x) - mu) / (sigma * M_SQRT2));
  };
  d.moment_oracle = [mu, sigma](int n) {
    return std::exp(n * mu + 0.5 * n * n * sigma * sigma);
  };
  return d;
}

/// The six catalog laws used by sweeps and the verification suite.
inline std::vector<Distribution> catalog() {
  return {make_standard_normal(), make_normal(1.0, 2.0), make_exponential(1.0),
          make_gamma(2.0, 1.0),   make_uniform(0.0, 1.0), make_lognormal(0.0, 1.0)};
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

inline double density(const Distribution& d, double z) { return d.density(z); }

inline ExtReal mgf(const Distribution& d, double t) { return d.mgf(t); }

/// Raw moment m_n = E[Z^n]: closed form when the catalog provides one,
/// otherwise adaptive quadrature. Throws NonConvergentError on a missed
/// error target.
inline double raw_moment(const Distribution& d, int n, const Tolerance& tol = {}) {
  if (n < 0) throw std::invalid_argument("raw_moment: order must be >= 0");
  if (n == 0) return 1.0;
  if (d.moment_oracle) return d.moment_oracle(n);
  return detail::moment_by_quadrature(d, n, tol);
}

/// Positive fractional moment m_alpha_plus = integral of y^alpha p(y) over
/// (0, inf), by semi-infinite quadrature with divergence detection.
/// Returns the infinite marker when the tail integral diverges and
/// not-computed when quadrature misses its target without diverging.
inline ExtReal positive_fractional_moment(const Distribution& d, double alpha,
                                          const Tolerance& tol = {}) {
  if (!(alpha >= 0.0)) {
    throw std::invalid_argument("positive_fractional_moment: alpha must be >= 0");
  }
  auto w = [alpha](double y) {
    if (y <= 0.0) return alpha == 0.0 ? 1.0 : 0.0;
    return std::pow(y, alpha);
  };
  detail::WeightedIntegral r = detail::integrate_density_product(d, w, 0.0, tol);
  if (r.diverged) return ExtReal::infinity();
  if (!r.quad.converged) return ExtReal::not_computed();
  return ExtReal::finite(std::max(r.quad.value, 0.0));
}

/// Pr[Z >= x], closed form when available, else semi-infinite quadrature of
/// the density. Always in [0, 1].
inline double exact_upper_tail(const Distribution& d, double x, const Tolerance& tol = {}) {
  if (x <= d.support.lo) return 1.0;
  if (x >= d.support.hi) return 0.0;
  if (d.closed_form_tail) return std::clamp(d.closed_form_tail(x), 0.0, 1.0);
  return detail::tail_by_quadrature(d, x, tol);
}

/// The law of Z conditioned on Z > 0, together with the conditioning mass.
struct PositiveRestriction {
  Distribution base;
  double mass = 0.0;  // Pr[base > 0]
  Distribution law;   // normalized positive-part law
};

inline PositiveRestriction restrict_positive(const Distribution& d,
                                             const Tolerance& tol = {}) {
  const double mass = exact_upper_tail(d, 0.0, tol);
  if (!(mass > 1e-10)) {
    throw ZeroMassError("restrict_positive: Pr[Z > 0] is numerically zero");
  }
  PositiveRestriction r;
  r.base = d;
  r.mass = mass;

  Distribution law;
  law.name = d.name + "+";
  law.params = d.params;
  law.support = {std::max(0.0, d.support.lo), d.support.hi};
  law.density = [base = d.density, mass](double z) {
    return z > 0.0 ? base(z) / mass : 0.0;
  };
  law.mgf_domain = {-detail::kInf, d.mgf_domain.hi};
  law.mgf = [base = d.density, base_tail = d.closed_form_tail, mass,
             hi = d.support.hi, tol](double t) -> ExtReal {
    auto g = [&base, mass, t](double y) {
      const double p = y > 0.0 ? base(y) : 0.0;
      if (p <= 0.0) return 0.0;
      return p / mass * std::exp(t * y);
    };
    if (std::isfinite(hi)) {
      QuadratureResult q = integrate(g, 0.0, hi, tol);
      if (!q.converged) return ExtReal::not_computed();
      return ExtReal::finite(q.value);
    }
    TailIntegral ti = integrate_to_infinity(g, 0.0, tol,
                                            detail::first_window_width(base_tail, 0.0));
    if (ti.diverged) return ExtReal::infinity();
    if (!ti.result.converged) return ExtReal::not_computed();
    return ExtReal::finite(ti.result.value);
  };
  if (d.closed_form_tail) {
    law.closed_form_tail = [base_tail = d.closed_form_tail, mass](double x) {
      if (x <= 0.0) return 1.0;
      return std::min(base_tail(x) / mass, 1.0);
    };
  }
  r.law = std::move(law);
  return r;
}

// ---------------------------------------------------------------------------
// Spec-string parsing: name:param1,param2
// ---------------------------------------------------------------------------

inline const char* distribution_grammar() {
  return "normal:MU,SIGMA | exp:RATE | gamma:SHAPE,SCALE | uniform:A,B | "
         "lognormal:MU,SIGMA";
}

inline Distribution parse_distribution(const std::string& spec) {
  const auto bad = [&spec](const std::string& why) {
    throw std::invalid_argument("invalid distribution '" + spec + "': " + why +
                                "; expected one of " + distribution_grammar());
  };
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::vector<double> params;
  if (colon != std::string::npos) {
    std::string rest = spec.substr(colon + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      const auto comma = rest.find(',', pos);
      const std::string tok =
          rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      if (tok.empty()) bad("empty parameter");
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size() || !std::isfinite(v)) {
        bad("cannot parse parameter '" + tok + "'");
      }
      params.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  const auto arity = [&](std::size_t n) {
    if (params.size() != n) {
      bad("'" + name + "' takes " + std::to_string(n) + " parameter(s), got " +
          std::to_string(params.size()));
    }
  };
  std::size_t expected = 0;
  if (name == "normal" || name == "gamma" || name == "uniform" || name == "lognormal") {
    expected = 2;
  } else if (name == "exp") {
    expected = 1;
  } else {
    bad("unknown name '" + name + "'");
  }
  arity(expected);
  try {
    if (name == "normal") return make_normal(params[0], params[1]);
    if (name == "exp") return make_exponential(params[0]);
    if (name == "gamma") return make_gamma(params[0], params[1]);
    if (name == "uniform") return make_uniform(params[0], params[1]);
    return make_lognormal(params[0], params[1]);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("invalid distribution '" + spec + "': " + e.what());
  }
}

}  // namespace tailbound
