#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polytrope/core.hpp"

namespace polytrope {

/// Thresholds and integration settings for the (u, v) flow. All curves are
/// integrated in t = log xi from the autonomous system, in extended precision.
struct PhaseOptions {
  double launch_xi = 1e-3;  ///< separatrix launch radius for the near-origin expansion
  double u_min = 1e-6;      ///< separatrix stops once u drops below this
  double v_max = 1e6;       ///< surface reached / M escape threshold for v
  double u_escape = 1e6;    ///< M escape threshold for u (mass exhausted at finite radius)
  double e_ball = 1e-6;     ///< radius of the ball around (3, 0) that marks an E solution
  double f_ball = 1e-2;     ///< radius of the ball around the inward F attractor
  double rel_tol = 1e-17;
  double abs_tol = 1e-19;
  double max_dt = 0.02;     ///< maximum t spacing of stored trajectory points
};

struct TrajectoryPoint {
  double t = 0.0;  ///< log xi, up to an additive scale offset
  PhasePoint p;
};

/// Why an integration stopped.
enum class Termination { USurface, VSurface, TSpan, EBall, FAttractor, Escape };

struct Trajectory {
  PolytropeIndex index{0.0};
  std::vector<TrajectoryPoint> points;  ///< ordered by t
  SolutionClass solution_class = SolutionClass::E;
  Termination inner_end = Termination::TSpan;
  Termination outer_end = Termination::TSpan;
  std::size_t start_index = 0;  ///< position of the starting point in `points`
};

struct PhaseVelocity {
  double du_dt = 0.0;
  double dv_dt = 0.0;
};

/// du/dt = u(3 - u - n v), dv/dt = v(u - 1 + v).
[[nodiscard]] PhaseVelocity autonomous_rhs(PolytropeIndex index, const PhasePoint& p);

/// dv/du from the reduced first-order equation. Throws SingularLocus where
/// u(3 - u - n v) vanishes.
[[nodiscard]] double reduced_rhs(PolytropeIndex index, const PhasePoint& p);

struct CriticalPoint {
  PhasePoint p;
  bool physical = true;  ///< false for the interior point when n <= 3
  std::string label;
};

/// (0,0), (3,0), (0,1) and the interior point ((n-3)/(n-1), 2/(n-1)) when n != 1.
[[nodiscard]] std::vector<CriticalPoint> critical_points(PolytropeIndex index);

/// Inward attractor of F solutions: (0, 1) for n <= 3, the interior point for n > 3.
[[nodiscard]] PhasePoint f_attractor(PolytropeIndex index);

/// Regular solution launched from (3 - n xi^2/5, xi^2/3) at t = log(launch_xi);
/// runs until u < u_min, v > v_max or t_span is used up.
[[nodiscard]] Trajectory integrate_separatrix(PolytropeIndex index, double t_span,
                                              const PhaseOptions& opts = {});

/// Integrates outward and inward from `start` (placed at t = start_t) and
/// classifies by the inward end.
[[nodiscard]] Trajectory integrate_irregular(PolytropeIndex index, const PhasePoint& start,
                                             double t_span, const PhaseOptions& opts = {},
                                             double start_t = 0.0);

/// A point on the separatrix at which v first reaches `v_boundary`, with omega
/// scaled by `omega_factor` at fixed theta (u -> u / f, v -> v f).
struct BoundaryStart {
  double t = 0.0;
  PhasePoint unperturbed;
  PhasePoint start;
};
[[nodiscard]] BoundaryStart perturbed_boundary(PolytropeIndex index, double omega_factor,
                                               double v_boundary = 10.0,
                                               const PhaseOptions& opts = {});

/// E, F or M from the inward end of a trajectory; throws Inconclusive otherwise.
[[nodiscard]] SolutionClass classify_solution(const Trajectory& traj,
                                              const PhaseOptions& opts = {});

struct RadiusSample {
  PhasePoint p;
  double log_r_over_R = 0.0;
};

enum class QuadratureForm { DvForm, DuForm };

/// log r increments between consecutive trajectory points from the curve alone:
/// integral dv / (v (u - 1 + v)) or integral du / (u (3 - u - n v)).
/// The du form is undefined for n = 0 (u is constant) and throws Domain.
[[nodiscard]] std::vector<double> log_radius_increments(PolytropeIndex index,
                                                        const Trajectory& traj,
                                                        QuadratureForm form);

/// log(r/R) at every trajectory point by quadrature along the curve. When the
/// curve runs out to the surface (v diverging) the tail beyond the last point
/// is closed analytically and the surface maps to 0; otherwise the point
/// nearest `p_ref` maps to 0.
[[nodiscard]] std::vector<RadiusSample> radius_quadrature(PolytropeIndex index,
                                                          const Trajectory& traj,
                                                          const PhasePoint& p_ref);

/// Rebuilds theta(xi) from an E trajectory: log xi from the radius quadrature,
/// log theta from d log theta / d log xi = -v with theta -> 1 at the centre.
[[nodiscard]] SolutionProfile reconstruct_profile(PolytropeIndex index, const Trajectory& traj);

/// Whether the trajectory's outer end runs to the stellar surface.
[[nodiscard]] bool reaches_surface(const Trajectory& traj);

[[nodiscard]] const char* to_string(Termination t) noexcept;

}  // namespace polytrope
