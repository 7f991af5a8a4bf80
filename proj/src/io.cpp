#include "polytrope/io.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

namespace polytrope::io {
namespace {

using nlohmann::ordered_json;

ordered_json real_or_null(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

std::string optional_real(const std::optional<double>& x) {
  return x ? format_real(*x) : std::string();
}

std::optional<double> trajectory_omega(PolytropeIndex index, const PhasePoint& p) {
  if (!index.omega_tilde() || !(p.u > 0.0) || !(p.v > 0.0)) return std::nullopt;
  return omega(index, p);
}

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x);
}

void write_profile_csv(std::ostream& os, const SolutionProfile& profile) {
  os << "xi,theta,dtheta,mass,u,v,omega\n";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const RadialState& s = profile.samples[i];
    os << format_real(s.xi) << ',' << format_real(s.theta) << ',' << format_real(s.dtheta) << ','
       << format_real(profile.mass[i]) << ',' << format_real(profile.u[i]) << ','
       << format_real(profile.v[i]) << ',' << optional_real(profile.omega[i]) << '\n';
  }
}

ordered_json summary_json(const SolutionProfile& profile) {
  ordered_json j;
  j["n"] = profile.index.n();
  if (profile.surface) {
    const SurfaceSummary& s = *profile.surface;
    j["surface"] = {{"xi1", s.xi1},
                    {"mass_coeff", s.mass_coeff},
                    {"omega0", s.omega0 ? ordered_json(*s.omega0) : ordered_json(nullptr)}};
  }
  if (profile.asymptote) {
    const AsymptoticTrend& a = *profile.asymptote;
    j["asymptote"] = {{"xi_end", a.xi_end},
                      {"omega_end", a.omega_end},
                      {"dlog_omega_dlog_xi", a.dlog_omega_dlog_xi}};
  }
  return j;
}

ordered_json profile_json(const SolutionProfile& profile) {
  ordered_json j = summary_json(profile);
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const RadialState& s = profile.samples[i];
    rows.push_back({{"xi", s.xi},
                    {"theta", s.theta},
                    {"dtheta", s.dtheta},
                    {"mass", profile.mass[i]},
                    {"u", real_or_null(profile.u[i])},
                    {"v", real_or_null(profile.v[i])},
                    {"omega", profile.omega[i] ? real_or_null(*profile.omega[i]) : nullptr}});
  }
  j["samples"] = std::move(rows);
  return j;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,u,v,omega,class\n";
  const char* cls = to_string(traj.solution_class);
  for (const auto& pt : traj.points) {
    os << format_real(pt.t) << ',' << format_real(pt.p.u) << ',' << format_real(pt.p.v) << ','
       << optional_real(trajectory_omega(traj.index, pt.p)) << ',' << cls << '\n';
  }
}

ordered_json trajectory_json(const Trajectory& traj) {
  ordered_json j;
  j["n"] = traj.index.n();
  j["class"] = to_string(traj.solution_class);
  j["inner_end"] = to_string(traj.inner_end);
  j["outer_end"] = to_string(traj.outer_end);
  ordered_json rows = ordered_json::array();
  for (const auto& pt : traj.points) {
    const auto w = trajectory_omega(traj.index, pt.p);
    rows.push_back({{"t", pt.t},
                    {"u", real_or_null(pt.p.u)},
                    {"v", real_or_null(pt.p.v)},
                    {"omega", w ? real_or_null(*w) : nullptr}});
  }
  j["points"] = std::move(rows);
  return j;
}

ordered_json critical_points_json(PolytropeIndex index) {
  ordered_json points = ordered_json::array();
  for (const auto& cp : critical_points(index)) {
    points.push_back({{"label", cp.label}, {"u", cp.p.u}, {"v", cp.p.v}, {"physical", cp.physical}});
  }
  return {{"n", index.n()}, {"critical_points", std::move(points)}};
}

void write_summary_csv(std::ostream& os, const std::vector<SolutionProfile>& profiles) {
  os << "n,xi1,mass_coeff,omega0,finite_surface\n";
  for (const auto& p : profiles) {
    os << format_real(p.index.n()) << ',';
    if (p.surface) {
      os << format_real(p.surface->xi1) << ',' << format_real(p.surface->mass_coeff) << ','
         << optional_real(p.surface->omega0) << ",true\n";
    } else {
      os << ",,,false\n";
    }
  }
}

ordered_json summary_table_json(const std::vector<SolutionProfile>& profiles) {
  ordered_json rows = ordered_json::array();
  for (const auto& p : profiles) {
    ordered_json row;
    row["n"] = p.index.n();
    row["finite_surface"] = p.surface.has_value();
    row["xi1"] = p.surface ? ordered_json(p.surface->xi1) : ordered_json(nullptr);
    row["mass_coeff"] = p.surface ? ordered_json(p.surface->mass_coeff) : ordered_json(nullptr);
    row["omega0"] = p.surface && p.surface->omega0 ? ordered_json(*p.surface->omega0)
                                                    : ordered_json(nullptr);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace polytrope::io
