#include "polytrope/phase_plane.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>

#include "polytrope/numerics.hpp"
#include "polytrope/ode.hpp"

namespace polytrope {
namespace {

using Ext = long double;
using ExtState = ode::State<Ext, 2>;
using ExtStep = ode::DenseStep<Ext, 2>;

struct Flow {
  Ext n;
  ExtState operator()(Ext /*t*/, const ExtState& y) const {
    const Ext u = y[0];
    const Ext v = y[1];
    return {u * (3 - u - n * v), v * (u - 1 + v)};
  }
};

double distance(const PhasePoint& a, const PhasePoint& b) {
  return std::hypot(a.u - b.u, a.v - b.v);
}

ode::StepControl<Ext> step_control(const PhaseOptions& opts) {
  ode::StepControl<Ext> ctl;
  ctl.rel_tol = opts.rel_tol;
  ctl.abs_tol = opts.abs_tol;
  ctl.min_step = Ext(1e-17);
  ctl.max_steps = 5000000;
  return ctl;
}

struct Run {
  std::vector<TrajectoryPoint> points;  // in integration order, excluding the start
  Termination end = Termination::TSpan;
  ExtState last{};
  Ext last_t = 0;
};

// Integrates from (t0, y0) to t_end and stores points no further than max_dt
// apart. `stop` inspects each accepted endpoint.
template <typename Stop>
Run run_flow(Ext n, Ext t0, const ExtState& y0, Ext t_end, const PhaseOptions& opts,
             Stop&& stop) {
  Run run;
  const Ext max_dt = opts.max_dt;
  auto observer = [&](const ExtStep& step) {
    const Ext span = std::abs(step.h);
    const auto pieces = static_cast<std::size_t>(std::ceil(span / max_dt));
    for (std::size_t k = 1; k < pieces; ++k) {
      const Ext t = step.t0 + step.h * Ext(k) / Ext(pieces);
      const ExtState y = step(t);
      run.points.push_back({static_cast<double>(t),
                            {static_cast<double>(y[0]), static_cast<double>(y[1])}});
    }
    run.points.push_back({static_cast<double>(step.t1()),
                          {static_cast<double>(step.y1[0]), static_cast<double>(step.y1[1])}});
    run.last = step.y1;
    run.last_t = step.t1();
    if (auto end = stop(step.y1)) {
      run.end = *end;
      return false;
    }
    return true;
  };
  const auto outcome = ode::integrate<Ext, 2>(Flow{n}, t0, y0, t_end, step_control(opts), observer);
  if (outcome.status == ode::Status::StepUnderflow || outcome.status == ode::Status::TooManySteps) {
    // A collapsing step at large |u| or |v| is the finite-t blow-up itself.
    const Ext u = outcome.y[0];
    const Ext v = outcome.y[1];
    if (std::abs(u) > Ext(1e3) || std::abs(v) > Ext(1e3)) {
      run.end = Termination::Escape;
    } else {
      throw Error(ErrorCode::StepUnderflow, "phase-plane integration stalled");
    }
  }
  return run;
}

// Stored values and derivatives of u(s), s = log v, along the curve.
struct DvNode {
  double s, u, us, uss;
};

DvNode dv_node(double n, const PhasePoint& p) {
  const double u = p.u, v = p.v;
  const double a = u * (3 - u - n * v);
  const double b = u - 1 + v;
  const double au = 3 - 2 * u - n * v;
  const double av = -n * u;
  const double f = a / b;
  const double fu = (au * b - a) / (b * b);
  const double fv = (av * b - a) / (b * b);
  return {std::log(v), u, f, fu * f + fv * v};
}

struct DuNode {
  double w, v, vw, vww;
};

DuNode du_node(double n, const PhasePoint& p) {
  const double u = p.u, v = p.v;
  const double c = v * (u - 1 + v);
  const double d = 3 - u - n * v;
  const double cu = v, cv = u - 1 + 2 * v;
  const double du = -1, dv = -n;
  const double g = c / d;
  const double gu = (cu * d - c * du) / (d * d);
  const double gv = (cv * d - c * dv) / (d * d);
  return {std::log(u), v, g, gv * g + gu * u};
}

// integral over one segment of the dv form; `weight_v` selects the theta integrand v/(u-1+v).
double dv_segment(const DvNode& a, const DvNode& b, bool weight_v) {
  if (a.s == b.s) return 0.0;
  auto integrand = [&](double s) {
    const double u = numerics::quintic_hermite(a.s, b.s, {a.u, a.us, a.uss}, {b.u, b.us, b.uss}, s).value;
    const double v = std::exp(s);
    const double denom = u - 1 + v;
    return weight_v ? v / denom : 1.0 / denom;
  };
  return numerics::gauss_legendre5(integrand, a.s, b.s);
}

double du_segment(double n, const DuNode& a, const DuNode& b) {
  if (a.w == b.w) return 0.0;
  auto integrand = [&](double w) {
    const double v = numerics::quintic_hermite(a.w, b.w, {a.v, a.vw, a.vww}, {b.v, b.vw, b.vww}, w).value;
    return 1.0 / (3 - std::exp(w) - n * v);
  };
  return numerics::gauss_legendre5(integrand, a.w, b.w);
}

// integral from the last point to v = inf with u frozen at its last value.
double surface_tail(const PhasePoint& last) {
  const double c = 1.0 - last.u;
  if (c == 0.0) return 1.0 / last.v;
  return -std::log1p(-c / last.v) / c;
}

}  // namespace

const char* to_string(Termination t) noexcept {
  switch (t) {
    case Termination::USurface: return "u_min";
    case Termination::VSurface: return "v_max";
    case Termination::TSpan: return "t_span";
    case Termination::EBall: return "e_ball";
    case Termination::FAttractor: return "f_attractor";
    case Termination::Escape: return "escape";
  }
  return "?";
}

PhaseVelocity autonomous_rhs(PolytropeIndex index, const PhasePoint& p) {
  const double n = index.n();
  return {p.u * (3.0 - p.u - n * p.v), p.v * (p.u - 1.0 + p.v)};
}

double reduced_rhs(PolytropeIndex index, const PhasePoint& p) {
  const double denom = p.u * (3.0 - p.u - index.n() * p.v);
  if (denom == 0.0) {
    throw Error(ErrorCode::SingularLocus, "dv/du is singular where u(3 - u - n v) = 0");
  }
  return p.v * (p.u - 1.0 + p.v) / denom;
}

std::vector<CriticalPoint> critical_points(PolytropeIndex index) {
  std::vector<CriticalPoint> out = {
      {{0.0, 0.0}, true, "origin"},
      {{3.0, 0.0}, true, "regular_centre"},
      {{0.0, 1.0}, true, "point_mass"},
  };
  const double n = index.n();
  if (n != 1.0) {
    const PhasePoint interior{(n - 3.0) / (n - 1.0), 2.0 / (n - 1.0)};
    out.push_back({interior, n > 3.0, "interior"});
  }
  return out;
}

PhasePoint f_attractor(PolytropeIndex index) {
  const double n = index.n();
  if (n <= 3.0) return {0.0, 1.0};
  return {(n - 3.0) / (n - 1.0), 2.0 / (n - 1.0)};
}

Trajectory integrate_separatrix(PolytropeIndex index, double t_span, const PhaseOptions& opts) {
  if (!(t_span > 0.0)) throw Error(ErrorCode::InvalidArgument, "t_span must be > 0");
  const Ext n = index.n();
  const Ext xi = opts.launch_xi;
  const ExtState y0 = {3 - n * xi * xi / 5, xi * xi / 3};
  const PhasePoint launch{static_cast<double>(y0[0]), static_cast<double>(y0[1])};
  if (!(xi > 0) || distance(launch, {3.0, 0.0}) > 1e-2) {
    throw Error(ErrorCode::LaunchFailure, "separatrix launch point is not close to (3, 0)");
  }
  const Ext t0 = std::log(xi);
  const Ext u_min = opts.u_min;
  const Ext v_max = opts.v_max;
  Run run = run_flow(n, t0, y0, t0 + Ext(t_span), opts,
                     [&](const ExtState& y) -> std::optional<Termination> {
                       if (y[0] < u_min) return Termination::USurface;
                       if (y[1] > v_max) return Termination::VSurface;
                       return std::nullopt;
                     });
  Trajectory traj;
  traj.index = index;
  traj.solution_class = SolutionClass::E;
  traj.inner_end = Termination::EBall;
  traj.outer_end = run.end == Termination::Escape ? Termination::VSurface : run.end;
  traj.points.reserve(run.points.size() + 1);
  traj.points.push_back({static_cast<double>(t0), launch});
  traj.points.insert(traj.points.end(), run.points.begin(), run.points.end());
  return traj;
}

Trajectory integrate_irregular(PolytropeIndex index, const PhasePoint& start, double t_span,
                               const PhaseOptions& opts, double start_t) {
  if (!(start.u > 0.0) || !(start.v > 0.0)) {
    throw Error(ErrorCode::Domain, "start must lie in the open positive quadrant");
  }
  if (!(t_span > 0.0)) throw Error(ErrorCode::InvalidArgument, "t_span must be > 0");
  for (const auto& cp : critical_points(index)) {
    if (distance(cp.p, start) <= 1e-12) {
      throw Error(ErrorCode::CriticalPointStart, "start coincides with critical point " + cp.label);
    }
  }
  const Ext n = index.n();
  const ExtState y0 = {start.u, start.v};
  const Ext t0 = start_t;
  const PhasePoint attractor = f_attractor(index);

  Run outward = run_flow(n, t0, y0, t0 + Ext(t_span), opts,
                         [&](const ExtState& y) -> std::optional<Termination> {
                           if (y[0] < Ext(opts.u_min)) return Termination::USurface;
                           if (y[1] > Ext(opts.v_max)) return Termination::VSurface;
                           if (y[0] > Ext(opts.u_escape)) return Termination::Escape;
                           return std::nullopt;
                         });
  Run inward = run_flow(n, t0, y0, t0 - Ext(t_span), opts,
                        [&](const ExtState& y) -> std::optional<Termination> {
                          const PhasePoint p{static_cast<double>(y[0]), static_cast<double>(y[1])};
                          if (std::hypot(static_cast<double>(y[0] - 3), p.v) <= opts.e_ball) {
                            return Termination::EBall;
                          }
                          if (p.u >= opts.u_escape || std::abs(p.v) >= opts.v_max || p.v < 0.0) {
                            return Termination::Escape;
                          }
                          if (distance(p, attractor) <= opts.f_ball) return Termination::FAttractor;
                          return std::nullopt;
                        });

  Trajectory traj;
  traj.index = index;
  traj.inner_end = inward.end;
  traj.outer_end = outward.end;
  traj.points.reserve(inward.points.size() + outward.points.size() + 1);
  traj.points.assign(inward.points.rbegin(), inward.points.rend());
  traj.start_index = traj.points.size();
  traj.points.push_back({start_t, start});
  traj.points.insert(traj.points.end(), outward.points.begin(), outward.points.end());
  try {
    traj.solution_class = classify_solution(traj, opts);
  } catch (const Error&) {
    throw;
  }
  return traj;
}

BoundaryStart perturbed_boundary(PolytropeIndex index, double omega_factor, double v_boundary,
                                 const PhaseOptions& opts) {
  if (!(omega_factor > 0.0)) throw Error(ErrorCode::InvalidArgument, "omega factor must be > 0");
  if (!(v_boundary > 0.0)) throw Error(ErrorCode::InvalidArgument, "v_boundary must be > 0");
  const Ext n = index.n();
  const Ext xi = opts.launch_xi;
  const ExtState y0 = {3 - n * xi * xi / 5, xi * xi / 3};
  const Ext t0 = std::log(xi);
  const Ext target = v_boundary;

  std::optional<std::pair<Ext, ExtState>> hit;
  auto observer = [&](const ExtStep& step) {
    if (step.y0[1] < target && step.y1[1] >= target) {
      auto f = [&](Ext t) { return step(t)[1] - target; };
      std::uintmax_t iters = 200;
      const auto r = boost::math::tools::toms748_solve(
          f, step.t0, step.t1(), step.y0[1] - target, step.y1[1] - target,
          [](Ext a, Ext b) { return std::abs(b - a) <= Ext(1e-18); }, iters);
      const Ext t = (r.first + r.second) / 2;
      hit = std::make_pair(t, step(t));
      return false;
    }
    return true;
  };
  ode::integrate<Ext, 2>(Flow{n}, t0, y0, t0 + Ext(100), step_control(opts), observer);
  if (!hit) {
    throw Error(ErrorCode::Domain, "separatrix never reaches the requested v boundary");
  }
  BoundaryStart b;
  b.t = static_cast<double>(hit->first);
  const Ext u = hit->second[0];
  const Ext v = hit->second[1];
  b.unperturbed = {static_cast<double>(u), static_cast<double>(v)};
  b.start = {static_cast<double>(u / Ext(omega_factor)), static_cast<double>(v * Ext(omega_factor))};
  return b;
}

SolutionClass classify_solution(const Trajectory& traj, const PhaseOptions& opts) {
  if (traj.points.empty()) throw Error(ErrorCode::Inconclusive, "empty trajectory");
  const PhasePoint inner = traj.points.front().p;
  if (distance(inner, {3.0, 0.0}) <= opts.e_ball) return SolutionClass::E;
  if (inner.u >= opts.u_escape || std::abs(inner.v) >= opts.v_max || inner.v < 0.0 ||
      traj.inner_end == Termination::Escape) {
    return SolutionClass::M;
  }
  if (distance(inner, f_attractor(traj.index)) <= opts.f_ball) return SolutionClass::F;
  throw Error(ErrorCode::Inconclusive,
              "inward trajectory met none of the E, F or M conditions within its t-span");
}

bool reaches_surface(const Trajectory& traj) {
  if (traj.points.empty()) return false;
  if (traj.outer_end == Termination::VSurface) return true;
  return traj.outer_end == Termination::USurface && traj.points.back().p.v >= 2.0;
}

std::vector<double> log_radius_increments(PolytropeIndex index, const Trajectory& traj,
                                          QuadratureForm form) {
  const double n = index.n();
  std::vector<double> out;
  if (traj.points.size() < 2) return out;
  out.reserve(traj.points.size() - 1);
  if (form == QuadratureForm::DvForm) {
    DvNode prev = dv_node(n, traj.points.front().p);
    for (std::size_t i = 1; i < traj.points.size(); ++i) {
      const DvNode cur = dv_node(n, traj.points[i].p);
      out.push_back(dv_segment(prev, cur, false));
      prev = cur;
    }
    return out;
  }
  if (n == 0.0) throw Error(ErrorCode::Domain, "the du form is undefined for n = 0 (u is constant)");
  DuNode prev = du_node(n, traj.points.front().p);
  for (std::size_t i = 1; i < traj.points.size(); ++i) {
    const DuNode cur = du_node(n, traj.points[i].p);
    out.push_back(du_segment(n, prev, cur));
    prev = cur;
  }
  return out;
}

std::vector<RadiusSample> radius_quadrature(PolytropeIndex index, const Trajectory& traj,
                                            const PhasePoint& p_ref) {
  if (traj.points.empty()) throw Error(ErrorCode::Domain, "empty trajectory");
  std::size_t ref = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    const double d = distance(traj.points[i].p, p_ref);
    if (d < best) {
      best = d;
      ref = i;
    }
  }
  if (best > 1e-6 * std::max(1.0, std::hypot(p_ref.u, p_ref.v))) {
    throw Error(ErrorCode::Domain, "reference point does not lie on the trajectory");
  }

  const auto inc = log_radius_increments(index, traj, QuadratureForm::DvForm);
  std::vector<double> q(traj.points.size(), 0.0);
  for (std::size_t i = 1; i < q.size(); ++i) q[i] = q[i - 1] + inc[i - 1];

  double offset = q[ref];
  if (reaches_surface(traj)) offset = q.back() + surface_tail(traj.points.back().p);

  std::vector<RadiusSample> out;
  out.reserve(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) out.push_back({traj.points[i].p, q[i] - offset});
  return out;
}

SolutionProfile reconstruct_profile(PolytropeIndex index, const Trajectory& traj) {
  if (traj.points.size() < 2) throw Error(ErrorCode::Domain, "trajectory too short");
  const PhasePoint first = traj.points.front().p;
  if (distance(first, {3.0, 0.0}) > 1e-2) {
    throw Error(ErrorCode::Domain, "reconstruction needs an E trajectory starting near (3, 0)");
  }
  const double n = index.n();
  const auto radii = radius_quadrature(index, traj, first);

  // Invert v = x/3 + (5 - 3n) x^2/90 for x = xi^2, then log theta = -x/6 + (n/120 - 1/72) x^2.
  const double x0 = 3.0 * first.v - 0.3 * (5.0 - 3.0 * n) * first.v * first.v;
  const double log_xi0 = 0.5 * std::log(x0);
  const double log_theta0 = -x0 / 6.0 + (n / 120.0 - 1.0 / 72.0) * x0 * x0;
  const double log_xi_shift = log_xi0 - radii.front().log_r_over_R;

  std::vector<RadialState> samples;
  samples.reserve(traj.points.size());
  double log_theta = log_theta0;
  DvNode prev = dv_node(n, first);
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    const PhasePoint& p = traj.points[i].p;
    if (i > 0) {
      const DvNode cur = dv_node(n, p);
      log_theta -= dv_segment(prev, cur, true);
      prev = cur;
    }
    const double xi = std::exp(log_xi_shift + radii[i].log_r_over_R);
    const double theta = std::exp(log_theta);
    samples.push_back({xi, theta, -p.v * theta / xi});
  }

  std::optional<SurfaceSummary> surface;
  if (reaches_surface(traj)) {
    SurfaceSummary s;
    s.xi1 = std::exp(log_xi_shift);
    const RadialState& last = samples.back();
    // carry the mass across the closed-form tail with d log m / d log r = u frozen
    s.mass_coeff = -last.xi * last.xi * last.dtheta *
                   std::exp(-traj.points.back().p.u * radii.back().log_r_over_R);
    // xi-form at the extrapolated surface; the last point itself sits slightly inside it
    if (index.omega_tilde()) s.omega0 = s.mass_coeff * std::pow(s.xi1, (3.0 - n) / (n - 1.0));
    surface = s;
  }
  return make_profile(index, std::move(samples), surface);
}

}  // namespace polytrope
