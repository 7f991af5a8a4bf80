#pragma once

#include <limits>

#include "polytrope/core.hpp"

namespace polytrope::analytic {

/// Closed-form Emden functions exist for these indices only.
[[nodiscard]] bool has_closed_form(double n) noexcept;

/// theta_n(xi) and theta_n'(xi) for n in {0, 1, 5}, valid from the centre up to
/// (and including) the first zero.
[[nodiscard]] RadialState theta(double n, double xi);

/// (u, v) in closed form; xi must be strictly inside the first zero.
[[nodiscard]] PhasePoint invariants(double n, double xi);

/// First zero of theta_n; +inf for n = 5.
[[nodiscard]] double xi1(double n);

/// -xi^2 theta_n'(xi).
[[nodiscard]] double mass(double n, double xi);

}  // namespace polytrope::analytic
