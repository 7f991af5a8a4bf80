#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "polytrope/phase_plane.hpp"

namespace helpers {

// v on the separatrix at abscissa u, by cubic Hermite interpolation between the
// bracketing trajectory points with slopes dv/du from the reduced equation.
// Requires u to decrease monotonically along the trajectory. Returns NaN outside.
inline double separatrix_v_at_u(const polytrope::Trajectory& traj, double u) {
  const auto& pts = traj.points;
  if (pts.size() < 2 || u > pts.front().p.u || u < pts.back().p.u) return std::nan("");
  std::size_t lo = 0, hi = pts.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (pts[mid].p.u >= u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const auto a = pts[lo].p, b = pts[hi].p;
  const double h = b.u - a.u;
  if (h == 0.0) return a.v;
  const double s = (u - a.u) / h;
  const double da = polytrope::reduced_rhs(traj.index, a) * h;
  const double db = polytrope::reduced_rhs(traj.index, b) * h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * a.v + (s3 - 2 * s2 + s) * da + (-2 * s3 + 3 * s2) * b.v +
         (s3 - s2) * db;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("polytrope_tests_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace helpers
