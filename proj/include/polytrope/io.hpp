#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "polytrope/core.hpp"
#include "polytrope/phase_plane.hpp"

namespace polytrope::io {

/// Round-trip decimal text for a double ("inf" and "nan" for non-finite values).
[[nodiscard]] std::string format_real(double x);

/// Header `xi,theta,dtheta,mass,u,v,omega`; omega is blank where undefined.
void write_profile_csv(std::ostream& os, const SolutionProfile& profile);

/// {"n", "surface": {xi1, mass_coeff, omega0}} or {"n", "asymptote": {...}}.
[[nodiscard]] nlohmann::ordered_json summary_json(const SolutionProfile& profile);

/// summary_json plus a "samples" array of the profile columns.
[[nodiscard]] nlohmann::ordered_json profile_json(const SolutionProfile& profile);

/// Header `t,u,v,omega,class`.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

[[nodiscard]] nlohmann::ordered_json trajectory_json(const Trajectory& traj);

[[nodiscard]] nlohmann::ordered_json critical_points_json(PolytropeIndex index);

/// One row per profile: `n,xi1,mass_coeff,omega0,finite_surface`; surface
/// columns stay empty when the profile has no surface.
void write_summary_csv(std::ostream& os, const std::vector<SolutionProfile>& profiles);

[[nodiscard]] nlohmann::ordered_json summary_table_json(const std::vector<SolutionProfile>& profiles);

}  // namespace polytrope::io
