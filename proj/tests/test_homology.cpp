#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "polytrope/emden.hpp"
#include "polytrope/homology.hpp"

using namespace polytrope;

namespace {

const SolutionProfile& n3() {
  static const SolutionProfile p = integrate_emden(PolytropeIndex(3.0));
  return p;
}

double sup_abs(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_SUITE("homology") {
  TEST_CASE("unit factor is the identity") {
    const auto mapped = homology_map(1.0, PolytropeIndex(3.0), n3());
    REQUIRE(mapped.size() == n3().size());
    for (std::size_t i = 0; i < mapped.size(); ++i) {
      REQUIRE(mapped.samples[i].xi == n3().samples[i].xi);
      REQUIRE(mapped.samples[i].theta == n3().samples[i].theta);
      REQUIRE(mapped.samples[i].dtheta == n3().samples[i].dtheta);
    }
    CHECK(mapped.surface->xi1 == n3().surface->xi1);
  }

  TEST_CASE("rescaled n = 3 solutions") {
    for (double A : {4.0, 0.25}) {
      const auto mapped = homology_map(A, PolytropeIndex(3.0), n3());
      CAPTURE(A);
      CHECK(central_value(mapped) == doctest::Approx(A).epsilon(1e-12));
      CHECK(sup_abs(lane_emden_residual(mapped)) <= 1e-6);
      CHECK(mapped.surface->xi1 == doctest::Approx(n3().surface->xi1 / A).epsilon(1e-15));
      CHECK(mapped.surface->omega0 == n3().surface->omega0);
      CHECK(mapped.mass.back() == doctest::Approx(mapped.surface->mass_coeff).epsilon(1e-14));
    }
  }

  TEST_CASE("rescaling is a translation in log-log coordinates") {
    for (double A : {4.0, 0.25, 1.7}) {
      const auto mapped = homology_map(A, PolytropeIndex(3.0), n3());
      for (std::size_t i = 0; i + 1 < mapped.size(); i += 37) {
        const double dx = std::log(mapped.samples[i].xi) - std::log(n3().samples[i].xi);
        const double dy = std::log(mapped.samples[i].theta) - std::log(n3().samples[i].theta);
        CHECK(dx == doctest::Approx(-std::log(A)).epsilon(1e-12));
        CHECK(dy == doctest::Approx(std::log(A)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("homology arguments") {
    const auto p1 = integrate_emden(PolytropeIndex(1.0));
    try {
      (void)homology_map(2.0, PolytropeIndex(1.0), p1);
      FAIL("expected an exception");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UndefinedExponent);
    }
    CHECK_THROWS_AS((void)homology_map(0.0, PolytropeIndex(3.0), n3()), Error);
    CHECK_THROWS_AS((void)homology_map(-2.0, PolytropeIndex(3.0), n3()), Error);
    CHECK_THROWS_AS((void)homology_map(2.0, PolytropeIndex(2.0), n3()), Error);
  }

  TEST_CASE("homologous points at fixed v levels") {
    for (double level : {0.081, 0.25, 2.3}) {
      const double xi = xi_at_v(n3(), level);
      CHECK(invariants_from_state(PolytropeIndex(3.0), evaluate(n3(), xi)).v ==
            doctest::Approx(level).epsilon(1e-12));
      for (double A : {4.0, 0.25, 1.0}) {
        const auto pair = homologous_points(A, n3(), xi / A);
        CHECK(std::abs(pair.original.u - pair.rescaled.u) <= 1e-8);
        CHECK(std::abs(pair.original.v - pair.rescaled.v) <= 1e-8);
        CHECK(pair.original.v == doctest::Approx(level).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("homologous points at a hundred radii") {
    const double xi1 = n3().surface->xi1;
    for (double A : {4.0, 0.25}) {
      double worst = 0.0;
      for (int k = 1; k <= 100; ++k) {
        const double xi = 0.98 * xi1 * k / 100.0 / A;
        const auto pair = homologous_points(A, n3(), xi);
        worst = std::max({worst, std::abs(pair.original.u - pair.rescaled.u),
                          std::abs(pair.original.v - pair.rescaled.v)});
      }
      CAPTURE(A);
      CHECK(worst <= 1e-8);
    }
  }

  TEST_CASE("homologous points outside the profile") {
    CHECK_THROWS_AS((void)homologous_points(4.0, n3(), 2.0), Error);
    CHECK_THROWS_AS((void)xi_at_v(n3(), -1.0), Error);
    const auto p5 = integrate_emden(PolytropeIndex(5.0));
    CHECK_THROWS_AS((void)xi_at_v(p5, 5.0), Error);
  }

  TEST_CASE("monotone resampling") {
    std::vector<double> grid;
    for (int i = 0; i < 200; ++i) grid.push_back(0.01 + i * (6.8 - 0.01) / 199.0);
    const auto r = resample(n3(), grid);
    REQUIRE(r.size() == grid.size());
    for (std::size_t i = 1; i < r.size(); ++i) REQUIRE(r.samples[i].theta < r.samples[i - 1].theta);
    for (std::size_t i = 0; i < r.size(); i += 20) {
      CHECK(std::abs(r.samples[i].theta - evaluate(n3(), grid[i]).theta) <= 1e-6);
    }
  }

  TEST_CASE("dimensional model") {
    const auto model = build_star(1.0, 1.0, n3());
    CHECK(model.alpha * model.alpha ==
          doctest::Approx((3.0 + 1.0) / (4 * std::numbers::pi) * 1.0 * std::pow(1.0, 1.0 / 3.0 - 1.0)));
    CHECK(model.H_c == doctest::Approx(4.0));
    CHECK(model.R == doctest::Approx(model.alpha * n3().surface->xi1));
    const double unit = 4 * std::numbers::pi * model.rho_c * std::pow(model.alpha, 3);
    CHECK(model.M / unit == doctest::Approx(n3().surface->mass_coeff).epsilon(1e-14));
    for (std::size_t i = 0; i < model.profile.size(); ++i) {
      const auto& s = model.profile[i];
      if (s.rho > 0) {
        REQUIRE(s.P == doctest::Approx(*model.K * std::pow(s.rho, 1.0 + 1.0 / 3.0)).epsilon(1e-12));
      }
      if (i > 0) {
        const auto& prev = model.profile[i - 1];
        REQUIRE(s.m > prev.m);
        REQUIRE(s.P < prev.P);
        REQUIRE(s.rho < prev.rho);
        REQUIRE(s.H < prev.H);
      }
    }
  }

  TEST_CASE("n = 1 model with unit length scale") {
    const auto p1 = integrate_emden(PolytropeIndex(1.0));
    const double rho_c = 2.5;
    const double K = 2.0 * std::numbers::pi;  // alpha^2 = 2 K / (4 pi G) = 1
    const auto model = build_star(rho_c, K, p1);
    CHECK(model.alpha == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(model.R == doctest::Approx(std::numbers::pi).epsilon(1e-8));
    CHECK(model.M == doctest::Approx(4 * std::numbers::pi * rho_c * std::numbers::pi).epsilon(1e-8));
  }

  TEST_CASE("mean density of the n = 3 model") {
    const auto model = build_star(1.0, 1.0, n3());
    const double mean = model.M / (4.0 / 3.0 * std::numbers::pi * std::pow(model.R, 3));
    const double xi1 = n3().surface->xi1;
    CHECK(mean / model.rho_c == doctest::Approx(3 * n3().surface->mass_coeff / std::pow(xi1, 3)).epsilon(1e-12));
    CHECK(mean / model.rho_c == doctest::Approx(3 * 2.02 / std::pow(6.897, 3)).epsilon(0.01));
  }

  TEST_CASE("models need a radius") {
    const auto p5 = integrate_emden(PolytropeIndex(5.0));
    try {
      (void)build_star(1.0, 1.0, p5);
      FAIL("expected an exception");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MissingSurface);
    }
    const auto cut = build_star(1.0, 1.0, p5, {}, 20.0);
    CHECK(cut.R == doctest::Approx(cut.alpha * 20.0));
    // V + H is constant inside; with the cut the constant is H(R) - G M / R
    CHECK(std::abs(energy_check(cut) - cut.profile.back().H) <= 1e-6);
    const auto p0 = integrate_emden(PolytropeIndex(0.0));
    CHECK_THROWS_AS((void)build_star(1.0, 1.0, p0), Error);
    CHECK_THROWS_AS((void)build_star(-1.0, 1.0, n3()), Error);
    CHECK_THROWS_AS((void)build_star(1.0, 0.0, n3()), Error);
  }

  TEST_CASE("energy conservation") {
    CHECK(energy_check(build_star(1.0, 1.0, n3())) <= 1e-6);
    CHECK(energy_check(build_star(3.0, 0.2, n3(), Units{2.0})) <= 1e-6);

    const auto p0 = integrate_emden(PolytropeIndex(0.0));
    const auto uniform = build_star_from_enthalpy(1.0, 1.0, p0);
    CHECK(energy_check(uniform) <= 1e-8);
    const auto V = gravitational_potential(uniform);
    double worst = 0.0;
    for (std::size_t i = 0; i < V.size(); ++i) {
      worst = std::max(worst, std::abs(V[i] - oracle::uniform_sphere_potential(1.0, uniform.R,
                                                                               uniform.profile[i].r)));
    }
    CHECK(worst <= 1e-8);
    CHECK(V.back() == -uniform.M / uniform.R);
  }

  TEST_CASE("dimensional round trip") {
    const auto model = build_star(1.7, 0.3, n3(), Units::cgs());
    const auto back = to_dimensionless(model);
    REQUIRE(back.size() == n3().size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      const auto& a = back.samples[i];
      const auto& b = n3().samples[i];
      REQUIRE(relative_difference(a.xi, b.xi) <= 1e-12);
      REQUIRE(std::abs(a.theta - b.theta) <= 1e-12 * std::abs(b.theta));
      REQUIRE(relative_difference(a.dtheta, b.dtheta) <= 1e-12);
    }
    REQUIRE(back.surface);
    CHECK(relative_difference(back.surface->xi1, n3().surface->xi1) <= 1e-12);
  }

  TEST_CASE("near-centre mean density law") {
    const double xi1 = n3().surface->xi1;
    const double d1 = mean_density_law_defect(n3(), 1e-2 * xi1);
    const double d2 = mean_density_law_defect(n3(), 5e-3 * xi1);
    CHECK(std::abs(d1) < 1e-6);
    CHECK(std::abs(d1 / d2) >= 15.0);
  }
}
