#include "polytrope/analytic.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace polytrope::analytic {
namespace {

constexpr double kSeriesCutoff = 1.0;
constexpr int kSeriesTerms = 14;

void require_closed_form(double n) {
  if (!has_closed_form(n)) {
    throw Error(ErrorCode::UnsupportedIndex,
                "no closed-form Emden function for n = " + std::to_string(n));
  }
}

void require_inside(double n, double xi, bool allow_zero_radius, bool allow_surface) {
  if (!(xi >= 0.0) || (!allow_zero_radius && xi == 0.0)) {
    throw Error(ErrorCode::Domain, "xi must be positive");
  }
  const double edge = xi1(n);
  if (xi > edge || (!allow_surface && xi == edge)) {
    throw Error(ErrorCode::Domain, "xi lies beyond the first zero of theta");
  }
}

// sin(xi)/xi and its derivative by Taylor series, free of the cancellation in
// (xi cos xi - sin xi) / xi^2 at small xi.
RadialState sinc_series(double xi) {
  const double x2 = xi * xi;
  double term = 1.0;
  double theta = 1.0;
  double dtheta = 0.0;
  for (int k = 1; k < kSeriesTerms; ++k) {
    term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
    theta += term;
    dtheta += 2.0 * k * term;
  }
  return {xi, theta, xi > 0.0 ? dtheta / xi : 0.0};
}

// 1 - xi cot xi
double one_minus_xi_cot(double xi) {
  if (xi < kSeriesCutoff) {
    const RadialState s = sinc_series(xi);
    return -xi * s.dtheta / s.theta;
  }
  return 1.0 - xi * std::cos(xi) / std::sin(xi);
}

}  // namespace

bool has_closed_form(double n) noexcept { return n == 0.0 || n == 1.0 || n == 5.0; }

double xi1(double n) {
  require_closed_form(n);
  if (n == 0.0) return std::sqrt(6.0);
  if (n == 1.0) return std::numbers::pi;
  return std::numeric_limits<double>::infinity();
}

RadialState theta(double n, double xi) {
  require_closed_form(n);
  require_inside(n, xi, true, true);
  if (n == 0.0) return {xi, 1.0 - xi * xi / 6.0, -xi / 3.0};
  if (n == 1.0) {
    if (xi < kSeriesCutoff) return sinc_series(xi);
    if (xi == std::numbers::pi) return {xi, 0.0, -1.0 / std::numbers::pi};
    const double s = std::sin(xi);
    const double c = std::cos(xi);
    return {xi, s / xi, (xi * c - s) / (xi * xi)};
  }
  const double q = 1.0 + xi * xi / 3.0;
  return {xi, 1.0 / std::sqrt(q), -(xi / 3.0) / (q * std::sqrt(q))};
}

PhasePoint invariants(double n, double xi) {
  require_closed_form(n);
  require_inside(n, xi, false, false);
  const double x2 = xi * xi;
  if (n == 0.0) return {3.0, 2.0 * x2 / (6.0 - x2)};
  if (n == 1.0) {
    const double v = one_minus_xi_cot(xi);
    return {x2 / v, v};
  }
  return {3.0 / (1.0 + x2 / 3.0), x2 / (3.0 + x2)};
}

double mass(double n, double xi) {
  require_closed_form(n);
  require_inside(n, xi, true, true);
  if (n == 0.0) return xi * xi * xi / 3.0;
  if (n == 1.0) {
    if (xi < kSeriesCutoff) return xi * xi * xi / 3.0 - std::pow(xi, 5) / 30.0;
    return std::sin(xi) - xi * std::cos(xi);
  }
  const double q = 1.0 + xi * xi / 3.0;
  return xi * xi * xi / 3.0 / (q * std::sqrt(q));
}

}  // namespace polytrope::analytic
