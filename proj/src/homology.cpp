#include "polytrope/homology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>

#include "polytrope/emden.hpp"
#include "polytrope/numerics.hpp"

namespace polytrope {
namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

StarModel assemble(double rho_c, double H_c, const SolutionProfile& profile, Units units,
                   std::optional<double> truncation_xi) {
  if (!(rho_c > 0.0) || !(H_c > 0.0) || !(units.G > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "rho_c, H_c and G must be > 0");
  }
  if (profile.size() < 2) throw Error(ErrorCode::InvalidArgument, "profile too short");

  std::vector<RadialState> states;
  if (truncation_xi) {
    const double cut = *truncation_xi;
    if (!(cut > profile.samples.front().xi)) {
      throw Error(ErrorCode::OutOfRange, "truncation radius inside the first sample");
    }
    for (const auto& s : profile.samples) {
      if (s.xi >= cut) break;
      states.push_back(s);
    }
    states.push_back(evaluate(profile, cut));
  } else {
    if (!profile.surface) {
      throw Error(ErrorCode::MissingSurface, "profile has no surface; supply a truncation radius");
    }
    states = profile.samples;
  }

  const double n = profile.index.n();
  StarModel model;
  model.rho_c = rho_c;
  model.index = profile.index;
  model.H_c = H_c;
  model.G = units.G;
  model.alpha = std::sqrt(H_c / (kFourPi * units.G * rho_c));
  const double mass_unit = kFourPi * rho_c * std::pow(model.alpha, 3);
  model.profile.reserve(states.size());
  for (const auto& s : states) {
    StarSample out;
    out.r = model.alpha * s.xi;
    out.H = H_c * s.theta;
    out.rho = rho_c * (n == 0.0 ? 1.0 : std::pow(std::max(s.theta, 0.0), n));
    out.P = out.rho * out.H / (n + 1.0);
    out.m = mass_unit * (-s.xi * s.xi * s.dtheta);
    model.profile.push_back(out);
  }
  model.R = model.profile.back().r;
  model.M = model.profile.back().m;
  return model;
}

}  // namespace

SolutionProfile homology_map(double A, PolytropeIndex index, const SolutionProfile& profile) {
  const double w = index.require_omega_tilde();
  if (!(A > 0.0) || !std::isfinite(A)) throw Error(ErrorCode::InvalidArgument, "A must be > 0");
  if (!(index == profile.index)) {
    throw Error(ErrorCode::InvalidArgument, "index does not match the profile");
  }
  const double theta_scale = std::pow(A, w);
  const double slope_scale = std::pow(A, w + 1.0);
  std::vector<RadialState> samples;
  samples.reserve(profile.size());
  for (const auto& s : profile.samples) {
    samples.push_back({s.xi / A, theta_scale * s.theta, slope_scale * s.dtheta});
  }
  std::optional<SurfaceSummary> surface;
  if (profile.surface) {
    surface = *profile.surface;
    surface->xi1 /= A;
    surface->mass_coeff *= std::pow(A, w - 1.0);
  }
  SolutionProfile out = make_profile(index, std::move(samples), surface);
  if (profile.asymptote) {
    out.asymptote = *profile.asymptote;
    out.asymptote->xi_end /= A;
  }
  return out;
}

HomologousPair homologous_points(double A, const SolutionProfile& profile, double xi) {
  const SolutionProfile mapped = homology_map(A, profile.index, profile);
  HomologousPair pair;
  pair.xi = xi;
  pair.original = invariants_from_state(profile.index, evaluate(profile, A * xi));
  pair.rescaled = invariants_from_state(profile.index, evaluate(mapped, xi));
  return pair;
}

double xi_at_v(const SolutionProfile& profile, double level) {
  if (!(level > 0.0)) throw Error(ErrorCode::Domain, "v level must be > 0");
  for (std::size_t i = 1; i < profile.size(); ++i) {
    if (profile.v[i] < level) continue;
    const double a = profile.samples[i - 1].xi;
    const double b = profile.samples[i].xi;
    if (profile.v[i] == level) return b;
    auto f = [&](double xi) {
      const RadialState s = evaluate(profile, xi);
      if (s.theta <= 0.0) return 1.0;
      return invariants_from_state(profile.index, s).v - level;
    };
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(
        f, a, b, profile.v[i - 1] - level, f(b),
        [](double lo, double hi) { return std::abs(hi - lo) <= 1e-15 * hi; }, iters);
    return 0.5 * (r.first + r.second);
  }
  throw Error(ErrorCode::OutOfRange, "v never reaches the requested level");
}

double central_value(const SolutionProfile& profile) {
  if (profile.empty()) throw Error(ErrorCode::OutOfRange, "empty profile");
  const RadialState& s = profile.samples.front();
  return s.theta - 0.5 * s.xi * s.dtheta;
}

SolutionProfile resample(const SolutionProfile& profile, std::span<const double> grid) {
  std::vector<double> xs, theta, dtheta;
  xs.reserve(profile.size());
  theta.reserve(profile.size());
  dtheta.reserve(profile.size());
  for (const auto& s : profile.samples) {
    xs.push_back(s.xi);
    theta.push_back(s.theta);
    dtheta.push_back(s.dtheta);
  }
  const auto t = numerics::pchip(xs, theta, grid);
  const auto d = numerics::pchip(xs, dtheta, grid);
  std::vector<RadialState> samples;
  samples.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) samples.push_back({grid[i], t[i], d[i]});
  return make_profile(profile.index, std::move(samples), profile.surface);
}

StarModel build_star(double rho_c, double K, const SolutionProfile& profile, Units units,
                     std::optional<double> truncation_xi) {
  const double n = profile.index.n();
  if (n == 0.0) {
    throw Error(ErrorCode::Domain, "n = 0 has no polytropic constant; build from H_c instead");
  }
  if (!(K > 0.0)) throw Error(ErrorCode::InvalidArgument, "K must be > 0");
  if (!(rho_c > 0.0)) throw Error(ErrorCode::InvalidArgument, "rho_c must be > 0");
  const double H_c = (n + 1.0) * K * std::pow(rho_c, 1.0 / n);
  StarModel model = assemble(rho_c, H_c, profile, units, truncation_xi);
  model.K = K;
  return model;
}

StarModel build_star_from_enthalpy(double rho_c, double H_c, const SolutionProfile& profile,
                                   Units units, std::optional<double> truncation_xi) {
  return assemble(rho_c, H_c, profile, units, truncation_xi);
}

SolutionProfile to_dimensionless(const StarModel& model) {
  const double mass_unit = kFourPi * model.rho_c * std::pow(model.alpha, 3);
  std::vector<RadialState> samples;
  samples.reserve(model.profile.size());
  for (const auto& s : model.profile) {
    const double xi = s.r / model.alpha;
    samples.push_back({xi, s.H / model.H_c, -s.m / (mass_unit * xi * xi)});
  }
  std::optional<SurfaceSummary> surface;
  if (!samples.empty() && samples.back().theta == 0.0) {
    const RadialState& last = samples.back();
    SurfaceSummary sum;
    sum.xi1 = last.xi;
    sum.mass_coeff = -last.xi * last.xi * last.dtheta;
    if (model.index.omega_tilde()) sum.omega0 = omega_from_state(model.index, last);
    surface = sum;
  }
  return make_profile(model.index, std::move(samples), surface);
}

std::vector<double> gravitational_potential(const StarModel& model) {
  const auto& p = model.profile;
  const double G = model.G;
  auto g = [G](const StarSample& s) { return G * s.m / (s.r * s.r); };
  auto dg = [G](const StarSample& s) {
    return kFourPi * G * s.rho - 2.0 * G * s.m / (s.r * s.r * s.r);
  };
  std::vector<double> V(p.size());
  double outer = 0.0;
  V.back() = -G * model.M / model.R;
  for (std::size_t i = p.size() - 1; i-- > 0;) {
    const StarSample& a = p[i];
    const StarSample& b = p[i + 1];
    const double h = b.r - a.r;
    // trapezoid with the endpoint derivative correction, fourth order
    outer += 0.5 * h * (g(a) + g(b)) - h * h / 12.0 * (dg(b) - dg(a));
    V[i] = V.back() - outer;
  }
  return V;
}

double energy_check(const StarModel& model) {
  const auto V = gravitational_potential(model);
  const double surface = model.G * model.M / model.R;
  double worst = 0.0;
  for (std::size_t i = 0; i < V.size(); ++i) {
    worst = std::max(worst, std::abs(V[i] + model.profile[i].H + surface));
  }
  return worst;
}

double mean_density_law_defect(const SolutionProfile& profile, double xi) {
  const RadialState s = evaluate(profile, xi);
  const double n = profile.index.n();
  if (!(s.theta > 0.0)) throw Error(ErrorCode::Domain, "xi must lie inside the surface");
  const double mean = -3.0 * s.dtheta / s.xi;
  return mean / std::pow(s.theta, 0.6 * n) - 1.0;
}

}  // namespace polytrope
