#include "polytrope/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polytrope {

PolytropeIndex::PolytropeIndex(double n) : n_(n) {
  if (!(n >= 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::InvalidArgument, "polytropic index must be finite and >= 0");
  }
}

std::optional<double> PolytropeIndex::omega_tilde() const noexcept {
  if (n_ == 1.0) return std::nullopt;
  return 2.0 / (n_ - 1.0);
}

std::optional<double> PolytropeIndex::omega_xi_exponent() const noexcept {
  if (n_ == 1.0) return std::nullopt;
  return (n_ + 1.0) / (n_ - 1.0);
}

double PolytropeIndex::require_omega_tilde() const {
  if (auto w = omega_tilde()) return *w;
  throw Error(ErrorCode::UndefinedExponent, "2/(n-1) is undefined for n = 1");
}

const char* to_string(SolutionClass c) noexcept {
  switch (c) {
    case SolutionClass::E: return "E";
    case SolutionClass::F: return "F";
    case SolutionClass::M: return "M";
  }
  return "?";
}

PhasePoint invariants_from_state(PolytropeIndex index, const RadialState& s) {
  if (!(s.theta > 0.0) || !(s.dtheta < 0.0) || !(s.xi > 0.0)) {
    throw Error(ErrorCode::DegenerateState,
                "invariants need xi > 0, theta > 0 and theta' < 0 (interior point)");
  }
  const double n = index.n();
  return {-s.xi * std::pow(s.theta, n) / s.dtheta, -s.xi * s.dtheta / s.theta};
}

double omega(PolytropeIndex index, const PhasePoint& p) {
  const double n = index.n();
  if (n == 1.0) throw Error(ErrorCode::UndefinedExponent, "omega is undefined for n = 1");
  if (!(p.u > 0.0) || !(p.v > 0.0)) {
    throw Error(ErrorCode::Domain, "omega needs u > 0 and v > 0");
  }
  // v -> inf near the surface; stay in log space.
  const double log_v = std::isinf(p.v) ? std::numeric_limits<double>::infinity() : std::log(p.v);
  return std::exp((std::log(p.u) + n * log_v) / (n - 1.0));
}

double omega_from_state(PolytropeIndex index, const RadialState& s) {
  const auto e = index.omega_xi_exponent();
  if (!e) throw Error(ErrorCode::UndefinedExponent, "omega is undefined for n = 1");
  if (!(s.xi > 0.0)) throw Error(ErrorCode::Domain, "omega needs xi > 0");
  return std::exp(*e * std::log(s.xi)) * (-s.dtheta);
}

SolutionProfile make_profile(PolytropeIndex index, std::vector<RadialState> samples,
                             std::optional<SurfaceSummary> surface) {
  SolutionProfile p;
  p.index = index;
  p.surface = surface;
  const std::size_t count = samples.size();
  p.mass.reserve(count);
  p.u.reserve(count);
  p.v.reserve(count);
  p.omega.reserve(count);
  const bool has_omega = index.omega_tilde().has_value();
  for (const auto& s : samples) {
    p.mass.push_back(-s.xi * s.xi * s.dtheta);
    if (s.xi == 0.0) {
      p.u.push_back(3.0);
      p.v.push_back(0.0);
      // limit value only; not tabulated
      p.omega.push_back(std::nullopt);
    } else if (s.theta <= 0.0) {
      p.u.push_back(0.0);
      p.v.push_back(std::numeric_limits<double>::infinity());
      p.omega.push_back(has_omega ? std::optional<double>(omega_from_state(index, s)) : std::nullopt);
    } else {
      const PhasePoint q = invariants_from_state(index, s);
      p.u.push_back(q.u);
      p.v.push_back(q.v);
      p.omega.push_back(has_omega ? std::optional<double>(omega(index, q)) : std::nullopt);
    }
  }
  p.samples = std::move(samples);
  return p;
}

double relative_difference(double a, double b) noexcept {
  const double scale = std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
  return std::abs(a - b) / scale;
}

}  // namespace polytrope
