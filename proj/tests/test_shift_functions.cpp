#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tailbound/shift_function.hpp"

using namespace tailbound;
using Catch::Approx;

TEST_CASE("shift function values", "[shift]") {
  const ShiftFunction step = make_step_shift();
  CHECK(step.eval(1.0) == 1.0);
  CHECK(step.eval(-1.0) == 0.0);
  CHECK(step.eval(0.0) == 0.5);
  CHECK(step.support_cutoff == 0.0);
  CHECK_FALSE(step.derivative);

  const ShiftFunction p = make_power_shift(1.5);
  CHECK(p.eval(4.0) == Approx(8.0).epsilon(1e-12));
  CHECK(p.eval(-0.5) == 0.0);

  const ShiftFunction te = make_truncated_exp_shift(0.5);
  CHECK(te.eval(2.0) == Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(te.eval(-2.0) == 0.0);

  const ShiftFunction lg = make_logistic_shift(0.1);
  CHECK(lg.eval(0.0) == Approx(0.5).epsilon(1e-12));
  CHECK(lg.eval(5.0) == Approx(1.0).epsilon(1e-9));
  CHECK(lg.eval(-5.0) == Approx(0.0).margin(1e-9));

  CHECK(make_exp_shift(0.0).eval(3.0) == 1.0);  // constant as exp(0 w)
}

TEST_CASE("first derivatives agree with finite differences", "[shift]") {
  struct Probe {
    ShiftFunction f;
    std::vector<double> points;
  };
  const std::vector<Probe> probes = {
      {make_exp_shift(0.7), {-1.0, 0.0, 1.5}},
      {make_power_shift(2.5), {0.5, 1.5, 3.0}},   // away from the cutoff
      {make_truncated_exp_shift(0.5), {0.5, 2.0}},
      {make_logistic_shift(0.3), {-1.0, 0.0, 0.7}}};
  for (const Probe& pr : probes) {
    for (double w : pr.points) {
      const double h = 1e-6 * std::max(1.0, std::abs(w));
      const double fd = (pr.f.eval(w + h) - pr.f.eval(w - h)) / (2.0 * h);
      INFO(pr.f.spec_string() << " at w=" << w);
      CHECK(pr.f.derivative(1, w) == Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("logistic higher derivatives match the closed form", "[shift]") {
  const ShiftFunction f = make_logistic_shift(1.0);
  const double w = 1.0;
  const double s = 1.0 / (1.0 + std::exp(-w));
  CHECK(f.derivative(0, w) == Approx(s).epsilon(1e-14));
  CHECK(f.derivative(1, w) == Approx(s * (1.0 - s)).epsilon(1e-13));
  CHECK(f.derivative(2, w) == Approx(s * (1.0 - s) * (1.0 - 2.0 * s)).epsilon(1e-13));
  // Second derivative is negative right of the midpoint.
  CHECK(f.derivative(2, w) < 0.0);
}

TEST_CASE("power derivatives terminate for integer exponents", "[shift]") {
  const ShiftFunction f = make_power_shift(2.0);
  CHECK(f.derivative(2, 1.5) == Approx(2.0).epsilon(1e-14));
  CHECK(f.derivative(3, 1.5) == 0.0);
  CHECK(f.derivative(1, -1.0) == 0.0);
}

TEST_CASE("catalog shift functions are non-decreasing on a probe grid", "[shift]") {
  for (const ShiftFunction& f :
       {make_exp_shift(0.5), make_step_shift(), make_power_shift(1.5),
        make_truncated_exp_shift(0.5), make_logistic_shift(0.2)}) {
    INFO(f.spec_string());
    CHECK(f.nondecreasing);
    CHECK(probe_nondecreasing(f, -5.0, 5.0));
  }
}

TEST_CASE("decreasing parameters are rejected", "[shift]") {
  CHECK_THROWS_AS(make_exp_shift(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_power_shift(-0.5), std::invalid_argument);
  CHECK_THROWS_AS(make_logistic_shift(0.0), std::invalid_argument);
}

TEST_CASE("shift spec parsing", "[shift]") {
  CHECK(parse_shift_function("exp:0.5").name == "exp");
  CHECK(parse_shift_function("step").name == "step");
  CHECK(parse_shift_function("power:1.5").params[0] == 1.5);
  CHECK(parse_shift_function("trunc-exp:0.25").name == "trunc-exp");
  CHECK(parse_shift_function("logistic:0.1").params[0] == 0.1);

  CHECK_THROWS_AS(parse_shift_function("sigmoid:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_shift_function("exp"), std::invalid_argument);
  CHECK_THROWS_AS(parse_shift_function("step:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_shift_function("logistic:x"), std::invalid_argument);
  try {
    parse_shift_function("nope");
    FAIL("expected throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("logistic:ALPHA") != std::string::npos);
  }
}
