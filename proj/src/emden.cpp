#include "polytrope/emden.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "polytrope/numerics.hpp"
#include "polytrope/ode.hpp"

namespace polytrope {
namespace {

constexpr double kMaxLaunch = 1e-2;
constexpr double kRootTol = 1e-13;

double theta_power(double theta, double n) {
  if (n == 0.0) return 1.0;
  if (n == std::floor(n)) return std::pow(theta, n);
  return std::pow(std::max(theta, 0.0), n);
}

using Step = ode::DenseStep<double, 2>;

RadialState sample_steps(const std::vector<Step>& steps, double xi) {
  auto it = std::lower_bound(steps.begin(), steps.end(), xi,
                             [](const Step& s, double x) { return s.t1() < x; });
  if (it == steps.end()) it = std::prev(steps.end());
  const auto y = (*it)(xi);
  return {xi, y[0], y[1]};
}

}  // namespace

void IntegrationOptions::validate() const {
  if (!(launch_xi > 0.0)) throw Error(ErrorCode::InvalidArgument, "launch_xi must be > 0");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerances must be > 0");
  }
  if (!(max_xi > launch_xi)) throw Error(ErrorCode::InvalidArgument, "max_xi must exceed launch_xi");
  if (sample_count < 2) throw Error(ErrorCode::InvalidArgument, "sample_count must be >= 2");
}

EmdenDerivative emden_rhs(PolytropeIndex index, const RadialState& s) {
  if (!(s.xi > 0.0)) {
    throw Error(ErrorCode::SingularOrigin, "Lane-Emden right-hand side is singular at xi = 0");
  }
  return {s.dtheta, -theta_power(s.theta, index.n()) - 2.0 * s.dtheta / s.xi};
}

RadialState series_start(PolytropeIndex index, double xi0) {
  if (!(xi0 > 0.0)) throw Error(ErrorCode::Domain, "launch radius must be > 0");
  if (xi0 > kMaxLaunch) {
    throw Error(ErrorCode::LaunchTooLarge, "series launch radius must be <= 1e-2");
  }
  const double n = index.n();
  const double x2 = xi0 * xi0;
  return {xi0, 1.0 - x2 / 6.0 + n * x2 * x2 / 120.0, -xi0 / 3.0 + n * xi0 * x2 / 30.0};
}

SolutionProfile integrate_emden(PolytropeIndex index, const IntegrationOptions& opts) {
  opts.validate();
  const double n = index.n();
  const RadialState start = series_start(index, opts.launch_xi);

  auto rhs = [n](double xi, const ode::State<double, 2>& y) -> ode::State<double, 2> {
    return {y[1], -theta_power(y[0], n) - 2.0 * y[1] / xi};
  };

  ode::StepControl<double> ctl;
  ctl.rel_tol = opts.rel_tol;
  ctl.abs_tol = opts.abs_tol;

  std::vector<Step> steps;
  std::optional<double> root;
  auto observer = [&](const Step& step) {
    steps.push_back(step);
    if (step.y0[0] > 0.0 && step.y1[0] <= 0.0) {
      if (step.y1[0] == 0.0) {
        root = step.t1();
      } else {
        auto f = [&step](double xi) { return step(xi)[0]; };
        std::uintmax_t iters = 200;
        const auto r = boost::math::tools::toms748_solve(
            f, step.t0, step.t1(), step.y0[0], step.y1[0],
            [](double a, double b) { return std::abs(b - a) <= kRootTol; }, iters);
        root = 0.5 * (r.first + r.second);
      }
      return false;
    }
    return true;
  };

  const auto outcome = ode::integrate<double, 2>(rhs, start.xi, {start.theta, start.dtheta},
                                                 opts.max_xi, ctl, observer);
  if (outcome.status == ode::Status::StepUnderflow || outcome.status == ode::Status::TooManySteps) {
    throw StepUnderflowError({outcome.t, outcome.y[0], outcome.y[1]},
                             "Lane-Emden integration stalled at xi = " + std::to_string(outcome.t));
  }

  const double xi_end = root.value_or(opts.max_xi);
  const auto grid = numerics::log_space(start.xi, xi_end, opts.sample_count);
  std::vector<RadialState> samples;
  samples.reserve(grid.size());
  samples.push_back(start);
  for (std::size_t i = 1; i < grid.size(); ++i) samples.push_back(sample_steps(steps, grid[i]));

  std::optional<SurfaceSummary> surface;
  if (root) {
    samples.back().theta = 0.0;
    const RadialState& s = samples.back();
    SurfaceSummary sum;
    sum.xi1 = s.xi;
    sum.mass_coeff = -s.xi * s.xi * s.dtheta;
    if (index.omega_tilde()) sum.omega0 = omega_from_state(index, s);
    surface = sum;
  }

  SolutionProfile profile = make_profile(index, std::move(samples), surface);
  if (!root && index.omega_tilde()) {
    const RadialState& s = profile.samples.back();
    const double ddtheta = emden_rhs(index, s).ddtheta;
    AsymptoticTrend trend;
    trend.xi_end = s.xi;
    trend.omega_end = omega_from_state(index, s);
    trend.dlog_omega_dlog_xi = *index.omega_xi_exponent() + s.xi * ddtheta / s.dtheta;
    profile.asymptote = trend;
  }
  return profile;
}

std::vector<std::pair<double, double>> mass_profile(const SolutionProfile& profile) {
  std::vector<std::pair<double, double>> out;
  out.reserve(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    out.emplace_back(profile.samples[i].xi, profile.mass[i]);
  }
  return out;
}

RadialState evaluate(const SolutionProfile& profile, double xi) {
  if (profile.size() < 2) throw Error(ErrorCode::OutOfRange, "profile too short to interpolate");
  const double lo = profile.samples.front().xi;
  const double hi = profile.samples.back().xi;
  if (!(xi >= lo && xi <= hi)) {
    throw Error(ErrorCode::OutOfRange, "xi = " + std::to_string(xi) + " outside profile range");
  }
  auto it = std::upper_bound(profile.samples.begin(), profile.samples.end(), xi,
                             [](double x, const RadialState& s) { return x < s.xi; });
  std::size_t i = it == profile.samples.begin()
                      ? 0
                      : static_cast<std::size_t>(it - profile.samples.begin()) - 1;
  i = std::min(i, profile.size() - 2);
  const RadialState& a = profile.samples[i];
  const RadialState& b = profile.samples[i + 1];
  if (xi == a.xi) return a;
  if (xi == b.xi) return b;
  const auto da = emden_rhs(profile.index, a);
  const auto db = emden_rhs(profile.index, b);
  const auto h = numerics::quintic_hermite(a.xi, b.xi, {a.theta, a.dtheta, da.ddtheta},
                                           {b.theta, b.dtheta, db.ddtheta}, xi);
  return {xi, h.value, h.derivative};
}

std::vector<double> lane_emden_residual(const SolutionProfile& profile) {
  const std::size_t count = profile.size();
  constexpr std::size_t kStencil = 7;
  if (count < kStencil) throw Error(ErrorCode::OutOfRange, "residual needs at least seven samples");
  std::vector<double> log_xi(count);
  for (std::size_t i = 0; i < count; ++i) log_xi[i] = std::log(profile.samples[i].xi);
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t first = std::min(i >= kStencil / 2 ? i - kStencil / 2 : 0, count - kStencil);
    const std::span<const double> nodes(log_xi.data() + first, kStencil);
    const auto w = numerics::derivative_weights(log_xi[i], nodes);
    double dmass_dlog = 0.0;
    for (std::size_t k = 0; k < kStencil; ++k) dmass_dlog += w[k] * profile.mass[first + k];
    const RadialState& s = profile.samples[i];
    out[i] = -dmass_dlog / s.xi + s.xi * s.xi * theta_power(s.theta, profile.index.n());
  }
  return out;
}

NearOriginDefect near_origin_defects(PolytropeIndex index, double xi) {
  if (!(xi > 0.0) || xi > kMaxLaunch) throw Error(ErrorCode::Domain, "xi must lie in (0, 1e-2]");
  using L = long double;
  const L n = index.n();
  const L x = xi;
  const L x2 = x * x;
  const L theta = L(1) - x2 / 6 + n * x2 * x2 / 120;
  const L dtheta = -x / 3 + n * x * x2 / 30;
  const L u = -x * std::pow(theta, n) / dtheta;
  const L v = -x * dtheta / theta;
  return {static_cast<double>(std::abs(u - (L(3) - n * x2 / 5))),
          static_cast<double>(std::abs(v - x2 / 3))};
}

}  // namespace polytrope
