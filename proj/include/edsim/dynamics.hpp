#pragma once

#include "edsim/types.hpp"

namespace edsim {

/// One forward-Euler step of the unicycle model. Position and heading advance
/// with the pre-step speed and heading; the new speed is clamped to
/// `speed_box`. Energy is carried through unchanged.
AgentState unicycle_step(const AgentState& state, const Control& u, double step, const Interval& speed_box);

/// Same update without speed saturation. Planner rollouts use this so that
/// bound violations surface as slack rather than disappearing into a clamp.
AgentState unicycle_step_free(const AgentState& state, const Control& u, double step);

struct EnergyUpdate {
  double energy = 0.0;
  bool depleted = false;  // pre-clamp value went negative
};

/// Control effort rate a^2 + penalty * w^2.
inline double effort_rate(const Control& u, double turn_penalty) {
  return u.accel * u.accel + turn_penalty * u.turn_rate * u.turn_rate;
}

/// e' = max(0, e - step * (a^2 + penalty * w^2)).
EnergyUpdate energy_step(double energy, const Control& u, double turn_penalty, double step);

}  // namespace edsim
