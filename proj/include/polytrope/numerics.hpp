#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace polytrope::numerics {

/// Finite-difference weights for the first derivative at x0 on arbitrary nodes
/// (Fornberg's recursion).
[[nodiscard]] std::vector<double> derivative_weights(double x0, std::span<const double> nodes);

struct HermiteValue {
  double value = 0.0;
  double derivative = 0.0;
};

/// Quintic Hermite interpolant on [x0, x1] from value, first and second
/// derivatives at both ends.
[[nodiscard]] HermiteValue quintic_hermite(double x0, double x1, std::array<double, 3> f0,
                                           std::array<double, 3> f1, double x);

/// Five-point Gauss-Legendre rule for integral_a^b f.
[[nodiscard]] double gauss_legendre5(const std::function<double(double)>& f, double a, double b);

/// Monotone piecewise-cubic (Fritsch-Carlson) interpolation of (xs, ys) at xq.
/// xs strictly increasing; xq must lie inside [xs.front(), xs.back()].
[[nodiscard]] std::vector<double> pchip(std::span<const double> xs, std::span<const double> ys,
                                        std::span<const double> xq);

/// n points log-spaced from a to b inclusive (a, b > 0).
[[nodiscard]] std::vector<double> log_space(double a, double b, std::size_t n);

/// Index i with xs[i] <= x <= xs[i+1] (clamped to the valid segment range).
[[nodiscard]] std::size_t bracket(std::span<const double> xs, double x);

}  // namespace polytrope::numerics
