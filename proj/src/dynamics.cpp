#include "edsim/dynamics.hpp"

#include <cmath>

namespace edsim {

AgentState unicycle_step_free(const AgentState& state, const Control& u, double step) {
  AgentState next = state;
  next.position.x() += step * state.speed * std::cos(state.heading);
  next.position.y() += step * state.speed * std::sin(state.heading);
  next.speed = state.speed + step * u.accel;
  next.heading = state.heading + step * u.turn_rate;
  return next;
}

AgentState unicycle_step(const AgentState& state, const Control& u, double step, const Interval& speed_box) {
  AgentState next = unicycle_step_free(state, u, step);
  next.speed = speed_box.clamp(next.speed);
  return next;
}

EnergyUpdate energy_step(double energy, const Control& u, double turn_penalty, double step) {
  const double raw = energy - step * effort_rate(u, turn_penalty);
  if (raw < 0.0) return {0.0, true};
  return {raw, false};
}

}  // namespace edsim
