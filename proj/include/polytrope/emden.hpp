#pragma once

#include <utility>
#include <vector>

#include "polytrope/core.hpp"

namespace polytrope {

struct IntegrationOptions {
  double launch_xi = 1e-4;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_xi = 1e4;
  std::size_t sample_count = 1000;  ///< log-spaced output samples

  /// Throws InvalidArgument when an invariant is violated.
  void validate() const;
};

/// Raised when the adaptive step collapses; carries the last accepted state.
class StepUnderflowError : public Error {
 public:
  StepUnderflowError(const RadialState& last, const std::string& what)
      : Error(ErrorCode::StepUnderflow, what), last_(last) {}
  [[nodiscard]] const RadialState& last_state() const noexcept { return last_; }

 private:
  RadialState last_;
};

struct EmdenDerivative {
  double dtheta = 0.0;
  double ddtheta = 0.0;
};

/// First-order form of (xi^2 theta')' + xi^2 theta^n = 0. Non-integer powers
/// use max(theta, 0).
[[nodiscard]] EmdenDerivative emden_rhs(PolytropeIndex index, const RadialState& s);

/// Regular-centre expansion theta = 1 - xi^2/6 + n xi^4/120 at 0 < xi0 <= 1e-2.
[[nodiscard]] RadialState series_start(PolytropeIndex index, double xi0);

/// Regular (Emden) solution from the centre to its first zero, or to max_xi
/// when theta stays positive. Samples are log-spaced from launch_xi; when a
/// surface exists the last sample sits exactly on it with theta = 0.
[[nodiscard]] SolutionProfile integrate_emden(PolytropeIndex index,
                                              const IntegrationOptions& opts = {});

/// (xi, -xi^2 theta') pairs.
[[nodiscard]] std::vector<std::pair<double, double>> mass_profile(const SolutionProfile& profile);

/// Quintic Hermite interpolation of theta (and its derivative for theta') between
/// samples, using theta'' from the Lane-Emden equation at the nodes.
[[nodiscard]] RadialState evaluate(const SolutionProfile& profile, double xi);

/// Pointwise residual -d(mass)/dxi + xi^2 theta^n at every sample, with the
/// derivative taken by seven-point finite differences in log xi.
[[nodiscard]] std::vector<double> lane_emden_residual(const SolutionProfile& profile);

/// Defects |u - (3 - n xi^2/5)| and |v - xi^2/3| of the series state at xi,
/// evaluated in extended precision so the O(xi^4) behaviour is resolvable.
struct NearOriginDefect {
  double u_defect = 0.0;
  double v_defect = 0.0;
};
[[nodiscard]] NearOriginDefect near_origin_defects(PolytropeIndex index, double xi);

}  // namespace polytrope
