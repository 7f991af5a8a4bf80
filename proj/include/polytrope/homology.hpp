#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "polytrope/core.hpp"

namespace polytrope {

/// theta_A(xi) = A^(2/(n-1)) theta(A xi), sampled on the grid xi_k / A.
/// Throws UndefinedExponent for n = 1 and InvalidArgument for A <= 0 or an
/// index that does not match the profile.
[[nodiscard]] SolutionProfile homology_map(double A, PolytropeIndex index,
                                           const SolutionProfile& profile);

/// Invariants of the original solution at A xi and of the rescaled one at xi.
struct HomologousPair {
  double xi = 0.0;
  PhasePoint original;
  PhasePoint rescaled;
};
[[nodiscard]] HomologousPair homologous_points(double A, const SolutionProfile& profile, double xi);

/// First radius at which v reaches `level` on the profile (root of the
/// interpolated invariant). Throws OutOfRange when v never reaches it.
[[nodiscard]] double xi_at_v(const SolutionProfile& profile, double level);

/// theta at xi = 0 from the first sample, theta(0) = theta - xi theta' / 2 + O(xi^4).
[[nodiscard]] double central_value(const SolutionProfile& profile);

/// Monotone cubic resampling of theta and theta' onto `grid`.
[[nodiscard]] SolutionProfile resample(const SolutionProfile& profile, std::span<const double> grid);

/// Gravitational constant used by the dimensional model.
struct Units {
  double G = 1.0;
  [[nodiscard]] static Units cgs() { return {6.674e-8}; }
};

struct StarSample {
  double r = 0.0;
  double rho = 0.0;
  double P = 0.0;
  double m = 0.0;
  double H = 0.0;  ///< specific enthalpy
};

struct StarModel {
  double rho_c = 0.0;
  std::optional<double> K;  ///< empty when built from H_c (n = 0)
  PolytropeIndex index{0.0};
  double alpha = 0.0;
  double H_c = 0.0;
  double G = 1.0;
  std::vector<StarSample> profile;
  double M = 0.0;
  double R = 0.0;
};

/// r = alpha xi, H = H_c theta, rho = rho_c theta^n, P = rho H / (n+1),
/// m = 4 pi rho_c alpha^3 (-xi^2 theta'), with H_c = (n+1) K rho_c^(1/n) and
/// alpha^2 = H_c / (4 pi G rho_c). Without a surface, `truncation_xi` must be
/// given (MissingSurface otherwise). n = 0 has no K; use build_star_from_enthalpy.
[[nodiscard]] StarModel build_star(double rho_c, double K, const SolutionProfile& profile,
                                   Units units = {},
                                   std::optional<double> truncation_xi = std::nullopt);

[[nodiscard]] StarModel build_star_from_enthalpy(double rho_c, double H_c,
                                                 const SolutionProfile& profile, Units units = {},
                                                 std::optional<double> truncation_xi = std::nullopt);

/// Inverse of build_star: xi = r / alpha, theta = H / H_c, theta' from m.
[[nodiscard]] SolutionProfile to_dimensionless(const StarModel& model);

/// V(r) = -G M / R - integral_r^R G m / r'^2 dr' at every sample.
[[nodiscard]] std::vector<double> gravitational_potential(const StarModel& model);

/// sup |V + H + G M / R| over the samples.
[[nodiscard]] double energy_check(const StarModel& model);

/// rho_bar / (rho_c^(2/5) rho^(3/5)) - 1 at xi, with rho_bar the mean density
/// inside xi. Vanishes to O(xi^4) near the centre.
[[nodiscard]] double mean_density_law_defect(const SolutionProfile& profile, double xi);

}  // namespace polytrope
