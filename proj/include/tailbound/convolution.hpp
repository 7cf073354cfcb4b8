#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "tailbound/distribution.hpp"
#include "tailbound/quadrature.hpp"
#include "tailbound/shift_function.hpp"

namespace tailbound {

/// E[f(z + Z)] = integral of f(z+y) p(y) dy.
struct ConvolutionResult {
  QuadratureResult quad;
  bool diverged = false;  // f grows faster than the density decays
};

/// Computes E[f(z + Z)] by direct quadrature over the support of Z,
/// clipped at y = cutoff - z when f vanishes left of a cutoff (the
/// integrand's jump is never straddled by a panel). Unbounded upper
/// supports go through the truncation-doubling tail with divergence
/// detection.
inline ConvolutionResult convolution_expectation(const Distribution& d,
                                                 const ShiftFunction& f, double z,
                                                 const Tolerance& tol = {}) {
  const double lo_clip = f.support_cutoff
                             ? *f.support_cutoff - z
                             : -std::numeric_limits<double>::infinity();
  auto w = [&f, z](double y) { return f.eval(z + y); };
  detail::WeightedIntegral r = detail::integrate_density_product(d, w, lo_clip, tol);
  ConvolutionResult out;
  out.quad = r.quad;
  out.diverged = r.diverged;
  if (out.quad.converged) out.quad.value = std::max(out.quad.value, 0.0);
  return out;
}

}  // namespace tailbound
