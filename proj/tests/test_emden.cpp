#include <chrono>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "polytrope/emden.hpp"

using namespace polytrope;

namespace {

double sup_abs(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_SUITE("emden") {
  TEST_CASE("right-hand side") {
    const auto d0 = emden_rhs(PolytropeIndex(0.0), {2.0, 0.7, -0.4});
    CHECK(d0.dtheta == -0.4);
    CHECK(d0.ddtheta == doctest::Approx(-1.0 + 0.4));

    const auto s = oracle::closed_form(1, 1.3);
    const auto d1 = emden_rhs(PolytropeIndex(1.0), {s.xi, s.theta, s.dtheta});
    CHECK(std::abs(d1.ddtheta - oracle::closed_form_ddtheta(1, 1.3)) <= 1e-12);

    const auto ref = oracle::rk4(3.0, 1.0);
    const auto d3 = emden_rhs(PolytropeIndex(3.0), {ref.xi, ref.theta, ref.dtheta});
    const auto num = integrate_emden(PolytropeIndex(3.0));
    const RadialState at1 = evaluate(num, 1.0);
    const auto dn = emden_rhs(PolytropeIndex(3.0), at1);
    CHECK(std::abs(dn.dtheta - d3.dtheta) <= 1e-8);
    CHECK(std::abs(dn.ddtheta - d3.ddtheta) <= 1e-8);

    try {
      (void)emden_rhs(PolytropeIndex(2.0), {0.0, 1.0, 0.0});
      FAIL("expected an exception");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SingularOrigin);
    }
  }

  TEST_CASE("negative theta is clipped for fractional indices") {
    const auto d = emden_rhs(PolytropeIndex(1.5), {3.7, -1e-3, -0.2});
    CHECK(std::isfinite(d.ddtheta));
    CHECK(d.ddtheta == doctest::Approx(-2.0 * -0.2 / 3.7));
  }

  TEST_CASE("series launch") {
    const auto s0 = series_start(PolytropeIndex(0.0), 1e-4);
    CHECK(s0.theta == 1.0 - 1e-8 / 6.0);
    CHECK(s0.dtheta == doctest::Approx(-1e-4 / 3.0).epsilon(1e-15));

    const auto s1 = series_start(PolytropeIndex(1.0), 0.01);
    CHECK(std::abs(s1.theta - std::sin(0.01) / 0.01) <= 1e-14);

    // quartic coefficient from the power-series recurrence
    const auto a = oracle::series_coefficients(3.0L, 4);
    CHECK(static_cast<double>(a[1]) == doctest::Approx(-1.0 / 6.0));
    CHECK(static_cast<double>(a[2]) == doctest::Approx(3.0 / 120.0));
    const double xi = 0.01;
    const auto s3 = series_start(PolytropeIndex(3.0), xi);
    const double quartic = (s3.theta - 1.0 + xi * xi / 6.0) / std::pow(xi, 4);
    CHECK(quartic == doctest::Approx(static_cast<double>(a[2])).epsilon(1e-4));
    // truncation error is sixth order
    const auto ref = oracle::series_state(3.0, xi);
    CHECK(std::abs(s3.theta - ref.theta) <= 2.0 * std::abs(static_cast<double>(a[3])) * std::pow(xi, 6));

    try {
      (void)series_start(PolytropeIndex(3.0), 0.02);
      FAIL("expected an exception");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::LaunchTooLarge);
    }
    CHECK_THROWS_AS((void)series_start(PolytropeIndex(3.0), 0.0), Error);
  }

  TEST_CASE("options are validated") {
    IntegrationOptions bad;
    bad.launch_xi = -1.0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = {};
    bad.rel_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = {};
    bad.max_xi = 1e-5;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = {};
    bad.sample_count = 1;
    CHECK_THROWS_AS((void)integrate_emden(PolytropeIndex(1.0), bad), Error);
  }

  TEST_CASE("surface radii") {
    const auto p0 = integrate_emden(PolytropeIndex(0.0));
    REQUIRE(p0.surface);
    CHECK(std::abs(p0.surface->xi1 - std::sqrt(6.0)) <= 1e-8);

    const auto p1 = integrate_emden(PolytropeIndex(1.0));
    REQUIRE(p1.surface);
    CHECK(std::abs(p1.surface->xi1 / 3.141 - 1.0) <= 0.005);
    CHECK(std::abs(p1.surface->xi1 - M_PI) <= 1e-8);
    CHECK_FALSE(p1.surface->omega0.has_value());

    const auto p3 = integrate_emden(PolytropeIndex(3.0));
    REQUIRE(p3.surface);
    CHECK(std::abs(p3.surface->xi1 / 6.897 - 1.0) <= 0.005);
    CHECK(std::abs(*p3.surface->omega0 / 2.02 - 1.0) <= 0.01);
    CHECK(p3.samples.back().theta == 0.0);
    CHECK(p3.samples.back().xi == p3.surface->xi1);
  }

  TEST_CASE("n = 3 agrees with fixed-step Runge-Kutta") {
    const auto prof = integrate_emden(PolytropeIndex(3.0));
    for (double xi : {0.5, 1.0, 3.0, 6.0}) {
      const auto ref = oracle::rk4(3.0, xi);
      const RadialState s = evaluate(prof, xi);
      CAPTURE(xi);
      CHECK(std::abs(s.theta - ref.theta) <= 1e-8);
      CHECK(std::abs(s.dtheta - ref.dtheta) <= 1e-8);
    }
  }

  TEST_CASE("mass function") {
    const auto p1 = integrate_emden(PolytropeIndex(1.0));
    const auto m1 = mass_profile(p1);
    CHECK(m1.back().first == p1.surface->xi1);
    CHECK(m1.back().second == doctest::Approx(M_PI).epsilon(1e-8));

    const auto p0 = integrate_emden(PolytropeIndex(0.0));
    const RadialState s = evaluate(p0, 1.0);
    CHECK(-s.dtheta == doctest::Approx(1.0 / 3.0).epsilon(1e-10));

    const auto p3 = integrate_emden(PolytropeIndex(3.0));
    CHECK(p3.surface->mass_coeff == doctest::Approx(*p3.surface->omega0).epsilon(1e-12));
    CHECK(p3.mass.back() == p3.surface->mass_coeff);
    for (double n : {0.0, 1.0, 3.0, 4.0}) {
      const auto m = mass_profile(integrate_emden(PolytropeIndex(n)));
      for (std::size_t i = 1; i < m.size(); ++i) REQUIRE(m[i].second > m[i - 1].second);
    }
    // for n near 5 the outer increments fall below the integration tolerance
    for (double n : {4.5, 4.9}) {
      const auto m = mass_profile(integrate_emden(PolytropeIndex(n)));
      for (std::size_t i = 1; i < m.size(); ++i) {
        REQUIRE(m[i].second > m[i - 1].second * (1.0 - tol::integration));
      }
    }
  }

  TEST_CASE("closed forms are reproduced") {
    for (int n : {0, 1, 5}) {
      IntegrationOptions opts;
      double upper = 50.0;
      if (n == 5) {
        opts.max_xi = 50.0;
      } else {
        upper = 0.99 * (n == 0 ? std::sqrt(6.0) : M_PI);
      }
      const auto prof = integrate_emden(PolytropeIndex(n), opts);
      double worst = 0.0;
      for (const auto& s : prof.samples) {
        if (s.xi > upper) break;
        worst = std::max(worst, std::abs(s.theta - oracle::closed_form(n, s.xi).theta));
      }
      CAPTURE(n);
      CHECK(worst <= tol::integration);
    }
  }

  TEST_CASE("monotone columns") {
    for (double n : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}) {
      const auto p = integrate_emden(PolytropeIndex(n));
      for (std::size_t i = 1; i < p.size(); ++i) {
        REQUIRE(p.samples[i].xi > p.samples[i - 1].xi);
        REQUIRE(p.samples[i].theta < p.samples[i - 1].theta);
        if (n == 0.0) {
          // u = 3 throughout, dropping to 0 only at the surface sample
          REQUIRE((std::abs(p.u[i] - 3.0) <= 1e-12 || (i + 1 == p.size() && p.u[i] == 0.0)));
        } else if (p.samples[i - 1].xi >= 1e-2) {
          // closer in, the per-sample change of u is below the integration tolerance
          REQUIRE(p.u[i] < p.u[i - 1]);
        }
        // n = 5 has v -> 1 at large radius, where the increments are unresolvable
        if (n < 5.0 || p.v[i - 1] < 0.999) REQUIRE(p.v[i] > p.v[i - 1]);
      }
    }
  }

  TEST_CASE("Lane-Emden residual of the sampled solution") {
    for (double n : {0.0, 1.0, 2.0, 3.0, 4.0, 4.99, 5.0}) {
      const auto p = integrate_emden(PolytropeIndex(n));
      CAPTURE(n);
      CHECK(sup_abs(lane_emden_residual(p)) <= 1e-6);
    }
    // theta^1.5 is not smooth at the surface, so only the interior is tested
    const auto p = integrate_emden(PolytropeIndex(1.5));
    const auto r = lane_emden_residual(p);
    double worst = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p.samples[i].xi < 0.95 * p.surface->xi1) worst = std::max(worst, std::abs(r[i]));
    }
    CHECK(worst <= 1e-6);
  }

  TEST_CASE("n >= 5 runs to the cutoff and reports a trend") {
    IntegrationOptions opts;
    opts.max_xi = 100.0;
    const auto p = integrate_emden(PolytropeIndex(5.0), opts);
    CHECK_FALSE(p.surface);
    REQUIRE(p.asymptote);
    CHECK(p.asymptote->xi_end == 100.0);
    CHECK(p.asymptote->dlog_omega_dlog_xi == doctest::Approx(-0.5).epsilon(0.01));
    const auto p6 = integrate_emden(PolytropeIndex(6.0), opts);
    CHECK_FALSE(p6.surface);
  }

  TEST_CASE("interpolation stays inside the profile") {
    const auto p = integrate_emden(PolytropeIndex(2.0));
    CHECK_THROWS_AS((void)evaluate(p, 1e-6), Error);
    CHECK_THROWS_AS((void)evaluate(p, 5.0), Error);
    const RadialState s = evaluate(p, p.samples[10].xi);
    CHECK(s.theta == p.samples[10].theta);
  }

  TEST_CASE("near-origin invariants converge at fourth order") {
    for (double n : {1.0, 3.0}) {
      const auto a = near_origin_defects(PolytropeIndex(n), 1e-3);
      const auto b = near_origin_defects(PolytropeIndex(n), 5e-4);
      CAPTURE(n);
      CHECK(a.u_defect / b.u_defect >= 15.0);
      CHECK(a.v_defect / b.v_defect >= 15.0);
      // leading coefficients of the truncated-series state
      CHECK(a.u_defect / 1e-12 == doctest::Approx(std::abs(-n / 24 + 7 * n * n / 150)).epsilon(1e-3));
      CHECK(a.v_defect / 1e-12 == doctest::Approx(std::abs(5.0 - 3.0 * n) / 90.0).epsilon(1e-3));
    }
    CHECK_THROWS_AS((void)near_origin_defects(PolytropeIndex(1.0), 0.1), Error);
  }

  TEST_CASE("integration time per index") {
    for (double n : {0.0, 1.0, 2.0, 3.0, 4.0}) {
      const auto t0 = std::chrono::steady_clock::now();
      (void)integrate_emden(PolytropeIndex(n));
      const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      CHECK(dt < 1.0);
    }
  }
}
