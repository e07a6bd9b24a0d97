#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include "enaqt/types.hpp"

namespace enaqt {

struct StepControl {
  double rtol = 1e-8;
  double atol = 1e-10;
  double initial_step = 1e-3;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 100'000'000;
};

/// Step size underflow or step budget exhaustion. Carries the time reached.
class IntegrationError : public SolverError {
 public:
  IntegrationError(const std::string& what, double time_reached)
      : SolverError(what + " (t = " + std::to_string(time_reached) + ")"),
        time_reached_(time_reached) {}
  double time_reached() const { return time_reached_; }

 private:
  double time_reached_;
};

struct IntegrationStats {
  double t_end = 0.0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
  bool stopped_by_observer = false;
};

/// Scaled RMS of an error estimate for complex matrices/vectors (Hairer's norm).
template <class Derived>
double scaled_rms(const Eigen::MatrixBase<Derived>& y0, const Eigen::MatrixBase<Derived>& y1,
                  const Eigen::MatrixBase<Derived>& err, double rtol, double atol) {
  const auto scale =
      (atol + rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array()).eval();
  const double sum = (err.cwiseAbs().array() / scale).square().sum();
  return std::sqrt(sum / static_cast<double>(std::max<Eigen::Index>(1, err.size())));
}

/// Dormand-Prince 5(4) with FSAL and a standard step-size controller.
///
/// `rhs(t, y)` returns dy/dt. `error_norm(y0, y1, err)` returns the scaled
/// error (accept when <= 1). After every accepted step `observer(t, y, grid)`
/// is called, with `grid` set when the step landed on `grid_times[*grid]`;
/// returning false stops the integration. Steps are shortened so that every
/// grid time is hit exactly.
template <class State, class Rhs, class ErrorNorm, class Observer>
IntegrationStats integrate_dopri5(Rhs&& rhs, State& y, double t0, double t1,
                                  const StepControl& control, ErrorNorm&& error_norm,
                                  Observer&& observer,
                                  std::span<const double> grid_times = {}) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  IntegrationStats stats;
  double t = t0;
  std::size_t next_grid = 0;
  while (next_grid < grid_times.size() && grid_times[next_grid] <= t0) {
    if (grid_times[next_grid] == t0 && !observer(t, static_cast<const State&>(y),
                                                 std::optional<std::size_t>(next_grid))) {
      stats.t_end = t;
      stats.stopped_by_observer = true;
      return stats;
    }
    ++next_grid;
  }

  double h = std::min(control.initial_step, control.max_step);
  State k1 = rhs(t, y);
  ++stats.rhs_evaluations;

  while (t < t1) {
    if (stats.accepted + stats.rejected >= control.max_steps) {
      throw IntegrationError("step budget exhausted", t);
    }
    double target = t1;
    bool target_is_grid = false;
    if (next_grid < grid_times.size() && grid_times[next_grid] <= t1) {
      target = grid_times[next_grid];
      target_is_grid = true;
    }
    double h_step = h;
    bool clamped = false;
    if (t + h_step >= target || target - (t + h_step) < 1e-12 * std::max(1.0, std::abs(target))) {
      h_step = target - t;
      clamped = true;
    }
    if (h_step <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      throw IntegrationError("step size underflow", t);
    }

    const State y2 = y + h_step * (a21 * k1);
    const State k2 = rhs(t + c2 * h_step, y2);
    const State y3 = y + h_step * (a31 * k1 + a32 * k2);
    const State k3 = rhs(t + c3 * h_step, y3);
    const State y4 = y + h_step * (a41 * k1 + a42 * k2 + a43 * k3);
    const State k4 = rhs(t + c4 * h_step, y4);
    const State y5 = y + h_step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    const State k5 = rhs(t + c5 * h_step, y5);
    const State y6 = y + h_step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    const State k6 = rhs(t + h_step, y6);
    State y_new = y + h_step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    State k7 = rhs(t + h_step, y_new);
    stats.rhs_evaluations += 6;
    const State err =
        h_step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double err_norm = error_norm(y, y_new, err);

    if (!std::isfinite(err_norm)) {
      ++stats.rejected;
      h = 0.1 * h_step;
      continue;
    }
    if (err_norm <= 1.0) {
      t = clamped ? target : t + h_step;
      y = std::move(y_new);
      k1 = std::move(k7);
      ++stats.accepted;
      std::optional<std::size_t> grid_hit;
      if (clamped && target_is_grid) grid_hit = next_grid++;
      if (!observer(t, static_cast<const State&>(y), grid_hit)) {
        stats.t_end = t;
        stats.stopped_by_observer = true;
        return stats;
      }
      const double factor =
          err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
      // A step cut short to land on a grid time says nothing about the
      // admissible step; keep the previous proposal in that case.
      h = std::min(clamped ? std::max(h, h_step * factor) : h_step * factor, control.max_step);
    } else {
      ++stats.rejected;
      h = h_step * std::clamp(0.9 * std::pow(err_norm, -0.2), 0.1, 1.0);
    }
  }
  stats.t_end = t;
  return stats;
}

}  // namespace enaqt
