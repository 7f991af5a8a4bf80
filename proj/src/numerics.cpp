#include "polytrope/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "polytrope/core.hpp"

namespace polytrope::numerics {

std::vector<double> derivative_weights(double x0, std::span<const double> nodes) {
  // Fornberg (1988), specialised to derivative orders 0 and 1.
  const std::size_t n = nodes.size();
  std::vector<std::array<double, 2>> c(n, {0.0, 0.0});
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min<std::size_t>(i, 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][1];
  return w;
}

HermiteValue quintic_hermite(double x0, double x1, std::array<double, 3> f0,
                             std::array<double, 3> f1, double x) {
  const double h = x1 - x0;
  const double s = (x - x0) / h;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const double h0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
  const double h1 = s - 6 * s3 + 8 * s4 - 3 * s5;
  const double h2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
  const double h3 = 10 * s3 - 15 * s4 + 6 * s5;
  const double h4 = -4 * s3 + 7 * s4 - 3 * s5;
  const double h5 = 0.5 * (s3 - 2 * s4 + s5);
  const double d0 = -30 * s2 + 60 * s3 - 30 * s4;
  const double d1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
  const double d2 = 0.5 * (2 * s - 9 * s2 + 12 * s3 - 5 * s4);
  const double d3 = 30 * s2 - 60 * s3 + 30 * s4;
  const double d4 = -12 * s2 + 28 * s3 - 15 * s4;
  const double d5 = 0.5 * (3 * s2 - 8 * s3 + 5 * s4);
  HermiteValue r;
  r.value = f0[0] * h0 + h * f0[1] * h1 + h * h * f0[2] * h2 + f1[0] * h3 + h * f1[1] * h4 +
            h * h * f1[2] * h5;
  r.derivative = (f0[0] * d0 + h * f0[1] * d1 + h * h * f0[2] * d2 + f1[0] * d3 +
                  h * f1[1] * d4 + h * h * f1[2] * d5) /
                 h;
  return r;
}

double gauss_legendre5(const std::function<double(double)>& f, double a, double b) {
  static constexpr std::array<double, 5> x = {0.0, 0.5384693101056831, -0.5384693101056831,
                                              0.9061798459386640, -0.9061798459386640};
  static constexpr std::array<double, 5> w = {0.5688888888888889, 0.4786286704993665,
                                              0.4786286704993665, 0.2369268850561891,
                                              0.2369268850561891};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < 5; ++i) acc += w[i] * f(mid + half * x[i]);
  return acc * half;
}

std::size_t bracket(std::span<const double> xs, double x) {
  if (xs.size() < 2) throw Error(ErrorCode::OutOfRange, "need at least two nodes");
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
  return std::min(i, xs.size() - 2);
}

std::vector<double> pchip(std::span<const double> xs, std::span<const double> ys,
                          std::span<const double> xq) {
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n) throw Error(ErrorCode::InvalidArgument, "pchip needs >= 2 nodes");
  std::vector<double> delta(n - 1), d(n);
  for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
  if (n == 2) {
    d[0] = d[1] = delta[0];
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        d[i] = 0.0;
      } else {
        const double h0 = xs[i] - xs[i - 1];
        const double h1 = xs[i + 1] - xs[i];
        const double w1 = 2 * h1 + h0;
        const double w2 = h1 + 2 * h0;
        d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    auto end_slope = [](double h0, double h1, double del0, double del1) {
      double s = ((2 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
      if (s * del0 <= 0.0) return 0.0;
      if (del0 * del1 <= 0.0 && std::abs(s) > std::abs(3 * del0)) return 3 * del0;
      return s;
    };
    d[0] = end_slope(xs[1] - xs[0], xs[2] - xs[1], delta[0], delta[1]);
    d[n - 1] = end_slope(xs[n - 1] - xs[n - 2], xs[n - 2] - xs[n - 3], delta[n - 2], delta[n - 3]);
  }
  std::vector<double> out;
  out.reserve(xq.size());
  for (double x : xq) {
    if (x < xs.front() || x > xs.back()) {
      throw Error(ErrorCode::OutOfRange, "pchip query outside node range");
    }
    const std::size_t i = bracket(xs, x);
    const double h = xs[i + 1] - xs[i];
    const double t = (x - xs[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    out.push_back((2 * t3 - 3 * t2 + 1) * ys[i] + (t3 - 2 * t2 + t) * h * d[i] +
                  (-2 * t3 + 3 * t2) * ys[i + 1] + (t3 - t2) * h * d[i + 1]);
  }
  return out;
}

std::vector<double> log_space(double a, double b, std::size_t n) {
  if (!(a > 0.0) || !(b > a) || n < 2) {
    throw Error(ErrorCode::InvalidArgument, "log_space needs 0 < a < b and n >= 2");
  }
  std::vector<double> out(n);
  const double la = std::log(a);
  const double step = (std::log(b) - la) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(la + step * static_cast<double>(i));
  out.front() = a;
  out.back() = b;
  return out;
}

}  // namespace polytrope::numerics
