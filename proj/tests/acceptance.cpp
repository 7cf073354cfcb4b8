// Acceptance suite: one line per criterion, every tolerance pinned in code.
// Exit 0 iff all criteria pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tailbound/bounds.hpp"
#include "tailbound/cli.hpp"
#include "tailbound/distribution.hpp"
#include "tailbound/operational.hpp"

using namespace tailbound;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// 1. Gaussian Chernoff closed form exp(-x^2/2), 1e-6 relative.
Check gaussian_chernoff() {
  Check c;
  const Distribution n = make_standard_normal();
  for (double x : {0.5, 1.0, 2.0, 3.0}) {
    const BoundReport r = chernoff_bound(n, x);
    const double expected = std::exp(-0.5 * x * x);
    c.expect(r.bound_raw.is_finite() &&
                 std::abs(r.bound_raw.value() - expected) <= 1e-6 * expected,
             "x=" + fmt(x) + " got " + fmt(r.bound_raw.as_double()) + " want " +
                 fmt(expected));
  }
  return c;
}

// 2. Ordering: exact <= moment + 1e-6 and moment <= chernoff + 1e-6 on four
//    laws, 12 upper-tail thresholds each.
Check ordering_theorem() {
  Check c;
  struct Row {
    Distribution d;
    double x_lo, x_hi;
  };
  const std::vector<Row> rows = {{make_standard_normal(), 0.5, 3.0},
                                 {make_exponential(1.0), 1.0, 6.0},
                                 {make_gamma(2.0, 1.0), 2.2, 8.0},
                                 {make_uniform(0.0, 1.0), 0.5, 0.95}};
  for (const Row& row : rows) {
    for (int i = 0; i < 12; ++i) {
      const double x = row.x_lo + (row.x_hi - row.x_lo) * i / 11.0;
      const double exact = exact_upper_tail(row.d, x);
      const BoundReport mom = moment_bound(row.d, x);
      const BoundReport che = chernoff_bound(row.d, x);
      c.expect(mom.bound_raw.is_finite() &&
                   exact <= mom.bound_raw.value() + 1e-6,
               row.d.spec_string() + " x=" + fmt(x) + " exact>moment");
      c.expect(che.status == BoundStatus::mgf_domain_empty ||
                   ext_leq(mom.bound_raw, che.bound_raw, 1e-6),
               row.d.spec_string() + " x=" + fmt(x) + " moment>chernoff");
    }
  }
  return c;
}

// 3. Heaviside-Chernoff equals the closed-form survival within 1e-9 (and the
//    quadrature route agrees to the same tolerance).
Check heaviside_exactness() {
  Check c;
  const Distribution e = make_exponential(1.0);
  const Distribution u = make_uniform(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double xe = 0.25 + i * 0.35;
    const double he = heaviside_chernoff(e, xe).bound_raw.value();
    c.expect(std::abs(he - std::exp(-xe)) <= 1e-9, "exp x=" + fmt(xe));
    c.expect(std::abs(detail::tail_by_quadrature(e, xe, Tolerance{}) - std::exp(-xe)) <=
                 1e-9,
             "exp quadrature x=" + fmt(xe));
    const double xu = (i + 0.5) / 21.0;
    const double hu = heaviside_chernoff(u, xu).bound_raw.value();
    c.expect(std::abs(hu - (1.0 - xu)) <= 1e-9, "uniform x=" + fmt(xu));
    c.expect(std::abs(detail::tail_by_quadrature(u, xu, Tolerance{}) - (1.0 - xu)) <=
                 1e-9,
             "uniform quadrature x=" + fmt(xu));
  }
  return c;
}

// 4. Logistic convergence: non-increasing gaps, final gap < 5% relative.
Check logistic_convergence() {
  Check c;
  const std::vector<double> alphas = {0.4, 0.2, 0.1, 0.05};
  struct Row {
    Distribution d;
    double x;
  };
  for (const Row& row : std::vector<Row>{{make_standard_normal(), 1.0},
                                         {make_exponential(1.0), 2.0}}) {
    const double exact = exact_upper_tail(row.d, row.x);
    const std::vector<BoundReport> sweep = logistic_bound_sweep(row.d, row.x, alphas);
    double prev_gap = std::numeric_limits<double>::infinity();
    for (const BoundReport& r : sweep) {
      c.expect(r.bound_raw.is_finite(), row.d.spec_string() + " non-finite row");
      const double gap = std::abs(r.bound_raw.as_double() - exact);
      c.expect(gap <= prev_gap + 1e-12,
               row.d.spec_string() + " gap increased at alpha=" +
                   fmt(*r.argmin_alpha));
      prev_gap = gap;
    }
    c.expect(prev_gap < 0.05 * exact,
             row.d.spec_string() + " final gap " + fmt(prev_gap / exact));
  }
  return c;
}

// 5. Truncated-power operational bound at z = 0 equals the moment bound
//    within 1e-6 relative.
Check moment_reduction() {
  Check c;
  for (const Distribution& d : {make_exponential(1.0), make_gamma(2.0, 1.0)}) {
    for (double x : {1.5, 2.0, 3.0}) {
      const std::vector<BoundReport> rows = section5_bounds(d, x);
      const double tp = rows[1].bound_raw.as_double();
      const double mb = moment_bound(d, x).bound_raw.as_double();
      c.expect(std::abs(tp - mb) <= 1e-6 * mb,
               d.spec_string() + " x=" + fmt(x) + " tp=" + fmt(tp) + " mb=" + fmt(mb));
    }
  }
  return c;
}

// 6. Eigenfunction identity residual < 1e-8 at order 40.
Check eigenfunction_identity() {
  Check c;
  const Distribution n = make_standard_normal();
  for (double alpha : {0.25, 0.5, 1.0}) {
    for (double z : {-1.0, 0.0, 0.3}) {
      const double r = exponential_eigenfunction_residual(n, alpha, z, 40);
      c.expect(r < 1e-8, "alpha=" + fmt(alpha) + " z=" + fmt(z) + " residual=" + fmt(r));
    }
  }
  return c;
}

// 7. Cauchy's third inequality on 1000 random positive sequence pairs.
Check cauchy_random() {
  Check c;
  std::mt19937_64 rng(20250809);
  auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 50);
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = std::exp(uniform(-6.0, 6.0));
      b[i] = std::exp(uniform(-6.0, 6.0));
    }
    c.expect(cauchy_third_inequality(a, b).holds, "trial " + std::to_string(trial));
  }
  return c;
}

// 8. SAM ordering: the integer moment-bound floor under the truncated-series
//    ratio, plus the four-convolution chain (c)=(d) <= (b) <= (a), within
//    1e-8 (extended reals on divergent legs).
Check sam_ordering_suite() {
  Check c;
  const std::vector<double> z_grid = {-2.0, -1.0, 0.0};
  for (const Distribution& d :
       {make_exponential(1.0), make_gamma(2.0, 1.0), make_standard_normal()}) {
    for (double alpha : {0.5, 1.0}) {
      for (double x : {1.0, 2.0, 3.0}) {
        const SamOrderingReport rep =
            sam_ordering_check(d, make_exp_shift(alpha), x, z_grid, 16);
        c.expect(rep.passed, d.spec_string() + " f=exp:" + fmt(alpha) +
                                 " x=" + fmt(x));
      }
    }
  }
  return c;
}

// 9. Degenerate paths: lognormal Chernoff infeasibility with a finite moment
//    bound; x <= 0 rejected as usage; series divergence flagged.
Check degenerate_paths() {
  Check c;
  const Distribution ln = make_lognormal(0.0, 1.0);
  const BoundReport che = chernoff_bound(ln, 2.0);
  c.expect(che.status == BoundStatus::mgf_domain_empty, "lognormal chernoff status");
  c.expect(che.bound_clamped == 1.0, "lognormal chernoff clamp");
  const BoundReport mom = moment_bound(ln, 2.0);
  c.expect(mom.bound_raw.is_finite() && mom.bound_raw.value() < 1.0,
           "lognormal moment bound not finite");

  RunConfig cfg;
  cfg.command = RunConfig::Command::bounds;
  cfg.dist_spec = "exp:1";
  cfg.x = 0.0;
  c.expect(run_command(cfg).exit_code == kExitUsage, "x=0 not a usage error");
  cfg.x = -1.0;
  c.expect(run_command(cfg).exit_code == kExitUsage, "x<0 not a usage error");

  const SeriesApplication app = apply_operator_series(
      series_coefficients(make_exponential(1.0), 40), make_exp_shift(1.0), 0.0);
  c.expect(app.diverging, "series divergence not flagged");
  return c;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Check()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "gaussian-chernoff-closed-form", 1.0, gaussian_chernoff},
      {2, "ordering-exact-moment-chernoff", 30.0, ordering_theorem},
      {3, "heaviside-chernoff-exactness", 1.0, heaviside_exactness},
      {4, "logistic-step-limit-convergence", 30.0, logistic_convergence},
      {5, "truncated-power-moment-reduction", 10.0, moment_reduction},
      {6, "exponential-eigenfunction-identity", 1.0, eigenfunction_identity},
      {7, "cauchy-third-inequality-random", 1.0, cauchy_random},
      {8, "sam-ordering-suite", 60.0, sam_ordering_suite},
      {9, "degenerate-paths", 5.0, degenerate_paths},
  };

  int failures = 0;
  for (const Criterion& cr : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = cr.run();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (elapsed > cr.budget_seconds) {
      c.ok = false;
      if (c.detail.empty()) c.detail = "over time budget";
    }
    std::printf("%s  %d. %s (%.2fs/%.0fs)%s%s\n", c.ok ? "PASS" : "FAIL", cr.id,
                cr.name, elapsed, cr.budget_seconds, c.detail.empty() ? "" : " -- ",
                c.detail.c_str());
    if (!c.ok) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
