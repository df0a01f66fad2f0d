#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace edsim {

using Vec2 = Eigen::Vector2d;

/// Kinematic state of a unicycle agent plus its remaining maneuvering energy.
/// Heading is kept unwrapped; only geometric formulas wrap angle differences.
struct AgentState {
  Vec2 position = Vec2::Zero();
  double speed = 0.0;
  double heading = 0.0;
  double energy = 0.0;
};

/// Longitudinal acceleration and turn rate, held constant over an interval.
struct Control {
  double accel = 0.0;
  double turn_rate = 0.0;

  bool operator==(const Control&) const = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
  [[nodiscard]] bool contains(double x) const { return x >= lo && x <= hi; }
  [[nodiscard]] bool empty() const { return !(lo <= hi); }
};

struct ControlBox {
  Interval accel;
  Interval turn_rate;

  [[nodiscard]] Control project(const Control& u) const {
    return {accel.clamp(u.accel), turn_rate.clamp(u.turn_rate)};
  }
};

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::remainder(a, two_pi);
  if (w <= -std::numbers::pi) w += two_pi;
  return w;
}

inline Vec2 unit_vector(double heading) { return {std::cos(heading), std::sin(heading)}; }

}  // namespace edsim
