#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tailbound/convolution.hpp"
#include "tailbound/distribution.hpp"
#include "tailbound/shift_function.hpp"

using namespace tailbound;
using Catch::Approx;

TEST_CASE("convolution_expectation: worked values", "[convolution]") {
  SECTION("Gaussian with the exponential shift reproduces the MGF") {
    const ConvolutionResult r =
        convolution_expectation(make_standard_normal(), make_exp_shift(1.0), 0.0);
    CHECK(r.quad.converged);
    CHECK_FALSE(r.diverged);
    CHECK(r.quad.value == Approx(std::exp(0.5)).epsilon(1e-9));
    CHECK(r.quad.evaluations > 0);
  }
  SECTION("constant shift integrates the total mass") {
    for (const Distribution& d : catalog()) {
      for (double z : {-2.0, 0.0, 3.0}) {
        const ConvolutionResult r = convolution_expectation(d, make_exp_shift(0.0), z);
        INFO(d.spec_string() << " z=" << z);
        CHECK(r.quad.value == Approx(1.0).margin(1e-8));
      }
    }
  }
  SECTION("ramp at z = 0 on the unit exponential is the mean") {
    const ConvolutionResult r =
        convolution_expectation(make_exponential(1.0), make_power_shift(1.0), 0.0);
    CHECK(r.quad.value == Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("convolution_expectation: Heaviside identity E[u(z+Z)] = Pr[Z >= -z]",
          "[convolution]") {
  const ShiftFunction step = make_step_shift();
  for (const Distribution& d : catalog()) {
    for (double z : {-2.0, -0.5, 0.0, 0.5, 2.0}) {
      const ConvolutionResult r = convolution_expectation(d, step, z);
      INFO(d.spec_string() << " z=" << z);
      CHECK(r.quad.value == Approx(exact_upper_tail(d, -z)).margin(1e-8));
    }
  }
}

TEST_CASE("convolution_expectation: divergence and empty overlap", "[convolution]") {
  // f grows faster than the density decays.
  const ConvolutionResult div =
      convolution_expectation(make_exponential(1.0), make_exp_shift(2.0), 0.0);
  CHECK(div.diverged);
  CHECK_FALSE(div.quad.converged);

  // Boundary rate: the integrand is a positive constant, still divergent.
  const ConvolutionResult edge =
      convolution_expectation(make_exponential(1.0), make_exp_shift(1.0), 0.0);
  CHECK(edge.diverged);

  // The cutoff clears the whole support: the expectation is exactly zero.
  const ConvolutionResult zero =
      convolution_expectation(make_uniform(0.0, 1.0), make_step_shift(), -5.0);
  CHECK_FALSE(zero.diverged);
  CHECK(zero.quad.converged);
  CHECK(zero.quad.value == 0.0);
}

TEST_CASE("convolution_expectation: converged results meet the tolerance invariant",
          "[convolution]") {
  const Tolerance tol;
  for (const Distribution& d : catalog()) {
    const ConvolutionResult r = convolution_expectation(d, make_logistic_shift(0.2), -1.0, tol);
    INFO(d.spec_string());
    REQUIRE(r.quad.converged);
    CHECK(r.quad.error_estimate <=
          std::max(tol.abs_tol, tol.rel_tol * std::abs(r.quad.value)));
  }
}
