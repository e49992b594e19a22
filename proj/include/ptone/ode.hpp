#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta pair with adaptive steps and
// zero-crossing location for one state component.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "ptone/errors.hpp"

namespace ptone::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-10;
  double h_init = 0.0;  // 0: pick from h_max
  double h_max = 0.0;   // 0: (t_end - t0) / 64
  double h_min_rel = 1e-14;
  std::size_t max_steps = 2'000'000;
};

template <std::size_t N>
struct Knot {
  double t;
  State<N> y;
};

template <std::size_t N>
struct Result {
  std::vector<Knot<N>> knots;
  /// Location of the first downward zero of the watched component, if any.
  std::optional<double> first_zero;
  std::size_t steps = 0;
};

/// One Dormand-Prince step; returns the 5th order solution and writes the
/// embedded error estimate.
template <std::size_t N, class Rhs>
State<N> dopri_step(const Rhs& rhs, double t, const State<N>& y, double h, State<N>* err) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  auto axpy = [&](std::initializer_list<std::pair<double, const State<N>*>> terms) {
    State<N> out = y;
    for (const auto& [a, k] : terms) {
      for (std::size_t i = 0; i < N; ++i) out[i] += h * a * (*k)[i];
    }
    return out;
  };
  const State<N> k1 = rhs(t, y);
  const State<N> k2 = rhs(t + c2 * h, axpy({{a21, &k1}}));
  const State<N> k3 = rhs(t + c3 * h, axpy({{a31, &k1}, {a32, &k2}}));
  const State<N> k4 = rhs(t + c4 * h, axpy({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
  const State<N> k5 = rhs(t + c5 * h, axpy({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
  const State<N> k6 =
      rhs(t + h, axpy({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
  const State<N> y5 = axpy({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
  if (err != nullptr) {
    const State<N> k7 = rhs(t + h, y5);
    for (std::size_t i = 0; i < N; ++i) {
      (*err)[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
  }
  return y5;
}

/// Integrates y' = rhs(t, y) from t0 to t_end. If `watch` is a valid index,
/// integration stops at the first downward zero of y[watch] (strictly after
/// t0), located by secant iteration on the step length to `zero_tol`.
template <std::size_t N, class Rhs>
Result<N> integrate(const Rhs& rhs, double t0, State<N> y0, double t_end, const Options& opt,
                    std::optional<std::size_t> watch = std::nullopt, double zero_tol = 1e-12) {
  Result<N> res;
  res.knots.push_back({t0, y0});
  const double span = t_end - t0;
  if (!(span > 0.0)) return res;
  const double h_max = opt.h_max > 0.0 ? opt.h_max : span / 64.0;
  const double h_min = opt.h_min_rel * std::max(std::abs(t0), std::abs(t_end));
  double h = opt.h_init > 0.0 ? std::min(opt.h_init, h_max) : h_max * 1e-3;
  double t = t0;
  State<N> y = y0;

  while (t < t_end) {
    if (res.steps++ > opt.max_steps) throw ConvergenceError("ODE step budget exhausted");
    h = std::min(h, t_end - t);
    State<N> err{};
    const State<N> y_new = dopri_step<N>(rhs, t, y, h, &err);
    double enorm = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < N; ++i) {
      if (!std::isfinite(y_new[i])) finite = false;
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      enorm = std::max(enorm, std::abs(err[i]) / sc);
    }
    if (!finite || !std::isfinite(enorm)) {
      if (h <= h_min) throw ConvergenceError("ODE integration produced NaN/Inf");
      h *= 0.25;
      continue;
    }
    if (enorm > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(enorm, -0.2));
      if (h < h_min) throw ConvergenceError("ODE step size underflow");
      continue;
    }

    if (watch && y[*watch] > 0.0 && y_new[*watch] <= 0.0) {
      // Secant (Illinois) on the step length: y[watch](t + s) = 0.
      const std::size_t w = *watch;
      double s_lo = 0.0, g_lo = y[w];
      double s_hi = h, g_hi = y_new[w];
      State<N> y_root = y_new;
      double s_root = h;
      int side = 0;
      for (int it = 0; it < 200; ++it) {
        double s = (s_lo * g_hi - s_hi * g_lo) / (g_hi - g_lo);
        if (!(s > s_lo && s < s_hi)) s = 0.5 * (s_lo + s_hi);
        const State<N> ys = dopri_step<N>(rhs, t, y, s, nullptr);
        const double g = ys[w];
        y_root = ys;
        s_root = s;
        if (g > 0.0) {
          s_lo = s;
          g_lo = g;
          if (side == -1) g_hi *= 0.5;
          side = -1;
        } else {
          s_hi = s;
          g_hi = g;
          if (side == 1) g_lo *= 0.5;
          side = 1;
        }
        if (s_hi - s_lo <= zero_tol || g == 0.0) break;
      }
      res.knots.push_back({t + s_root, y_root});
      res.first_zero = t + s_root;
      return res;
    }

    t = (t_end - (t + h) <= h_min) ? t_end : t + h;
    y = y_new;
    res.knots.push_back({t, y});
    const double grow = enorm > 0.0 ? 0.9 * std::pow(enorm, -0.2) : 5.0;
    h = std::min(h_max, h * std::clamp(grow, 0.2, 5.0));
  }
  return res;
}

}  // namespace ptone::ode
