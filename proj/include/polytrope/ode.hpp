#pragma once

// Dormand-Prince 5(4) integrator with PI step-size control and the
// fourth-order continuous extension. Header-only so the phase-plane code can
// run it in extended precision.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

#include "polytrope/core.hpp"

namespace polytrope::ode {

template <typename Real, std::size_t N>
using State = std::array<Real, N>;

template <typename Real>
struct StepControl {
  Real rel_tol = Real(1e-10);
  Real abs_tol = Real(1e-12);
  Real initial_step = Real(0);  ///< 0 selects an automatic guess
  Real min_step = Real(1e-14);  ///< relative to |t|+1
  Real max_step = std::numeric_limits<Real>::infinity();
  std::size_t max_steps = 1000000;
};

/// One accepted step together with its dense interpolant.
template <typename Real, std::size_t N>
struct DenseStep {
  Real t0 = 0;
  Real h = 0;
  State<Real, N> y0{};
  State<Real, N> y1{};
  State<Real, N> f0{};
  State<Real, N> f1{};
  std::array<State<Real, N>, 5> rcont{};

  [[nodiscard]] Real t1() const { return t0 + h; }

  [[nodiscard]] bool contains(Real t) const {
    return h > 0 ? (t >= t0 && t <= t0 + h) : (t <= t0 && t >= t0 + h);
  }

  [[nodiscard]] State<Real, N> operator()(Real t) const {
    const Real s = (t - t0) / h;
    const Real s1 = Real(1) - s;
    State<Real, N> y;
    for (std::size_t i = 0; i < N; ++i) {
      y[i] = rcont[0][i] +
             s * (rcont[1][i] + s1 * (rcont[2][i] + s * (rcont[3][i] + s1 * rcont[4][i])));
    }
    return y;
  }
};

enum class Status { Completed, Stopped, StepUnderflow, TooManySteps };

template <typename Real, std::size_t N>
struct Outcome {
  Status status = Status::Completed;
  Real t = 0;
  State<Real, N> y{};
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

namespace detail {

template <typename Real>
struct Tableau {
  static constexpr Real c2 = Real(1) / 5, c3 = Real(3) / 10, c4 = Real(4) / 5, c5 = Real(8) / 9;
  static constexpr Real a21 = Real(1) / 5;
  static constexpr Real a31 = Real(3) / 40, a32 = Real(9) / 40;
  static constexpr Real a41 = Real(44) / 45, a42 = Real(-56) / 15, a43 = Real(32) / 9;
  static constexpr Real a51 = Real(19372) / 6561, a52 = Real(-25360) / 2187,
                        a53 = Real(64448) / 6561, a54 = Real(-212) / 729;
  static constexpr Real a61 = Real(9017) / 3168, a62 = Real(-355) / 33,
                        a63 = Real(46732) / 5247, a64 = Real(49) / 176,
                        a65 = Real(-5103) / 18656;
  static constexpr Real a71 = Real(35) / 384, a73 = Real(500) / 1113, a74 = Real(125) / 192,
                        a75 = Real(-2187) / 6784, a76 = Real(11) / 84;
  static constexpr Real e1 = Real(71) / 57600, e3 = Real(-71) / 16695, e4 = Real(71) / 1920,
                        e5 = Real(-17253) / 339200, e6 = Real(22) / 525, e7 = Real(-1) / 40;
  static constexpr Real d1 = Real(-12715105075.0L) / Real(11282082432.0L),
                        d3 = Real(87487479700.0L) / Real(32700410799.0L),
                        d4 = Real(-10690763975.0L) / Real(1880347072.0L),
                        d5 = Real(701980252875.0L) / Real(199316789632.0L),
                        d6 = Real(-1453857185.0L) / Real(822651844.0L),
                        d7 = Real(69997945.0L) / Real(29380423.0L);
};

}  // namespace detail

/// Integrates y' = rhs(t, y) from t0 towards t_end (either direction).
/// `observer(step)` is called after every accepted step and may return false
/// to stop; the outcome then reports Status::Stopped at the end of that step.
template <typename Real, std::size_t N, typename Rhs, typename Observer>
Outcome<Real, N> integrate(Rhs&& rhs, Real t0, State<Real, N> y0, Real t_end,
                           const StepControl<Real>& ctl, Observer&& observer) {
  using T = detail::Tableau<Real>;
  using std::abs;
  using std::max;
  using std::min;
  using std::pow;
  using std::sqrt;

  Outcome<Real, N> out;
  out.t = t0;
  out.y = y0;
  const Real dir = t_end >= t0 ? Real(1) : Real(-1);
  if (t_end == t0) return out;

  auto error_norm = [&](const State<Real, N>& err, const State<Real, N>& ya,
                        const State<Real, N>& yb) {
    Real acc = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const Real sc = ctl.abs_tol + ctl.rel_tol * max(abs(ya[i]), abs(yb[i]));
      const Real r = err[i] / sc;
      acc += r * r;
    }
    return sqrt(acc / Real(N));
  };

  Real t = t0;
  State<Real, N> y = y0;
  State<Real, N> k1 = rhs(t, y);

  Real h = abs(ctl.initial_step);
  if (h == 0) {
    // Hairer's starting-step heuristic.
    Real d0 = 0, d1 = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const Real sc = ctl.abs_tol + ctl.rel_tol * abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = sqrt(d0 / Real(N));
    d1 = sqrt(d1 / Real(N));
    Real h0 = (d0 < Real(1e-5) || d1 < Real(1e-5)) ? Real(1e-6) : Real(0.01) * d0 / d1;
    h0 = min(h0, abs(t_end - t0));
    State<Real, N> y1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + dir * h0 * k1[i];
    const State<Real, N> f1 = rhs(t + dir * h0, y1);
    Real d2 = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const Real sc = ctl.abs_tol + ctl.rel_tol * abs(y[i]);
      d2 += ((f1[i] - k1[i]) / sc) * ((f1[i] - k1[i]) / sc);
    }
    d2 = sqrt(d2 / Real(N)) / h0;
    const Real dm = max(d1, d2);
    const Real h1 = dm <= Real(1e-15) ? max(Real(1e-6), h0 * Real(1e-3))
                                      : pow(Real(0.01) / dm, Real(1) / 5);
    h = min(Real(100) * h0, h1);
  }
  h = min(h, ctl.max_step);

  constexpr Real safety = Real(0.9);
  constexpr Real beta = Real(0.04);
  constexpr Real expo1 = Real(0.2) - beta * Real(0.75);
  Real err_old = Real(1e-4);
  bool last_rejected = false;

  while (out.accepted + out.rejected < ctl.max_steps) {
    const Real remaining = abs(t_end - t);
    bool final_step = false;
    if (h >= remaining) {
      h = remaining;
      final_step = true;
    }
    const Real h_min = ctl.min_step * (abs(t) + Real(1));
    if (h < h_min && !final_step) {
      out.status = Status::StepUnderflow;
      out.t = t;
      out.y = y;
      return out;
    }
    const Real hs = dir * h;

    State<Real, N> yt, k2, k3, k4, k5, k6, k7, y_new, err;
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + hs * T::a21 * k1[i];
    k2 = rhs(t + T::c2 * hs, yt);
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + hs * (T::a31 * k1[i] + T::a32 * k2[i]);
    k3 = rhs(t + T::c3 * hs, yt);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + hs * (T::a41 * k1[i] + T::a42 * k2[i] + T::a43 * k3[i]);
    k4 = rhs(t + T::c4 * hs, yt);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + hs * (T::a51 * k1[i] + T::a52 * k2[i] + T::a53 * k3[i] + T::a54 * k4[i]);
    k5 = rhs(t + T::c5 * hs, yt);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + hs * (T::a61 * k1[i] + T::a62 * k2[i] + T::a63 * k3[i] + T::a64 * k4[i] +
                           T::a65 * k5[i]);
    const Real t_new = final_step ? t_end : t + hs;
    k6 = rhs(t + hs, yt);
    for (std::size_t i = 0; i < N; ++i)
      y_new[i] = y[i] + hs * (T::a71 * k1[i] + T::a73 * k3[i] + T::a74 * k4[i] +
                              T::a75 * k5[i] + T::a76 * k6[i]);
    k7 = rhs(t + hs, y_new);
    for (std::size_t i = 0; i < N; ++i)
      err[i] = hs * (T::e1 * k1[i] + T::e3 * k3[i] + T::e4 * k4[i] + T::e5 * k5[i] +
                     T::e6 * k6[i] + T::e7 * k7[i]);

    Real e = error_norm(err, y, y_new);
    if (!std::isfinite(e)) e = Real(1e10);

    if (e <= Real(1)) {
      DenseStep<Real, N> step;
      step.t0 = t;
      step.h = hs;
      step.y0 = y;
      step.y1 = y_new;
      step.f0 = k1;
      step.f1 = k7;
      for (std::size_t i = 0; i < N; ++i) {
        const Real ydiff = y_new[i] - y[i];
        const Real bspl = hs * k1[i] - ydiff;
        step.rcont[0][i] = y[i];
        step.rcont[1][i] = ydiff;
        step.rcont[2][i] = bspl;
        step.rcont[3][i] = ydiff - hs * k7[i] - bspl;
        step.rcont[4][i] = hs * (T::d1 * k1[i] + T::d3 * k3[i] + T::d4 * k4[i] +
                                 T::d5 * k5[i] + T::d6 * k6[i] + T::d7 * k7[i]);
      }
      ++out.accepted;
      t = t_new;
      y = y_new;
      k1 = k7;
      out.t = t;
      out.y = y;

      Real fac = pow(max(e, Real(1e-10)), expo1) / pow(err_old, beta);
      fac = min(Real(5), max(Real(0.2), fac / safety));
      err_old = max(e, Real(1e-4));
      Real h_next = h / fac;
      if (last_rejected) h_next = min(h_next, h);
      last_rejected = false;

      if (!observer(static_cast<const DenseStep<Real, N>&>(step))) {
        out.status = Status::Stopped;
        return out;
      }
      if (final_step) {
        out.status = Status::Completed;
        return out;
      }
      h = min(h_next, ctl.max_step);
    } else {
      ++out.rejected;
      const Real fac = min(Real(5), pow(e, expo1) / safety);
      h = h / max(Real(1), fac);
      last_rejected = true;
    }
  }
  out.status = Status::TooManySteps;
  return out;
}

}  // namespace polytrope::ode
