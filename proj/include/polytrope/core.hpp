#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace polytrope {

/// Failure categories shared by every module. The CLI maps these onto exit codes.
enum class ErrorCode {
  DegenerateState,    ///< invariants requested at the centre or the surface
  UndefinedExponent,  ///< omega or 2/(n-1) requested for n = 1
  UnsupportedIndex,   ///< closed form requested for n outside {0, 1, 5}
  Domain,             ///< argument outside the function's domain
  SingularOrigin,     ///< Lane-Emden right-hand side evaluated at xi = 0
  LaunchTooLarge,     ///< series launch radius above 1e-2
  StepUnderflow,      ///< adaptive step collapsed below the minimum
  SingularLocus,      ///< dv/du requested where u(3 - u - n v) = 0
  LaunchFailure,      ///< separatrix launch point outside the (3,0) basin
  CriticalPointStart, ///< irregular integration started on a fixed point
  Inconclusive,       ///< classification ran out of t-span
  MissingSurface,     ///< dimensional model needs a finite radius
  OutOfRange,         ///< interpolation requested outside a profile
  InvalidArgument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Default comparison tolerances.
namespace tol {
inline constexpr double algebraic = 1e-10;
inline constexpr double integration = 1e-8;
}  // namespace tol

/// Polytropic index n >= 0 together with the homology exponent 2/(n-1).
class PolytropeIndex {
 public:
  explicit PolytropeIndex(double n);

  [[nodiscard]] double n() const noexcept { return n_; }
  /// 2/(n-1); empty for n = 1.
  [[nodiscard]] std::optional<double> omega_tilde() const noexcept;
  /// Exponent (n+1)/(n-1) linking omega to xi and theta'; empty for n = 1.
  [[nodiscard]] std::optional<double> omega_xi_exponent() const noexcept;
  /// Same as omega_tilde() but throws UndefinedExponent for n = 1.
  [[nodiscard]] double require_omega_tilde() const;

  friend bool operator==(const PolytropeIndex&, const PolytropeIndex&) = default;

 private:
  double n_;
};

/// One sample (xi, theta, dtheta/dxi) of the dimensionless radial solution.
struct RadialState {
  double xi = 0.0;
  double theta = 1.0;
  double dtheta = 0.0;
};

/// Homology invariants u = dlog m/dlog r and v = -dlog(P/rho)/dlog r.
struct PhasePoint {
  double u = 0.0;
  double v = 0.0;
};

struct SurfaceSummary {
  double xi1 = 0.0;
  double mass_coeff = 0.0;  ///< -xi1^2 theta'(xi1)
  std::optional<double> omega0;  ///< empty for n = 1
};

/// Reported instead of a surface when the solution did not terminate before max_xi.
struct AsymptoticTrend {
  double xi_end = 0.0;
  double omega_end = 0.0;
  double dlog_omega_dlog_xi = 0.0;
};

enum class SolutionClass { E, F, M };

[[nodiscard]] const char* to_string(SolutionClass c) noexcept;

/// Ordered radial samples of one solution plus their derived invariant columns.
struct SolutionProfile {
  PolytropeIndex index{0.0};
  std::vector<RadialState> samples;
  std::vector<double> mass;  ///< -xi^2 theta'
  std::vector<double> u;
  std::vector<double> v;
  std::vector<std::optional<double>> omega;
  std::optional<SurfaceSummary> surface;
  std::optional<AsymptoticTrend> asymptote;

  [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
  [[nodiscard]] bool empty() const noexcept { return samples.empty(); }
};

/// Builds the derived columns for a set of samples. Samples at xi = 0 get the
/// regular-centre limits (u, v) = (3, 0); samples with theta = 0 get the surface
/// limits (0, inf) with omega taken from the xi-form.
[[nodiscard]] SolutionProfile make_profile(PolytropeIndex index, std::vector<RadialState> samples,
                                           std::optional<SurfaceSummary> surface = std::nullopt);

/// u = -xi theta^n / theta', v = -xi theta' / theta. Requires theta > 0 and theta' < 0.
[[nodiscard]] PhasePoint invariants_from_state(PolytropeIndex index, const RadialState& s);

/// omega = (u v^n)^(1/(n-1)), evaluated through logarithms.
[[nodiscard]] double omega(PolytropeIndex index, const PhasePoint& p);

/// omega = xi^((n+1)/(n-1)) (-theta'), the radial form of the same invariant.
[[nodiscard]] double omega_from_state(PolytropeIndex index, const RadialState& s);

/// Relative difference |a - b| / max(|a|, |b|, tiny).
[[nodiscard]] double relative_difference(double a, double b) noexcept;

}  // namespace polytrope
