#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "edsim/scenario.hpp"

namespace edsim::test {

inline constexpr double kPi = std::numbers::pi;

inline std::string example_path() { return std::string(EDSIM_SOURCE_DIR) + "/docs/scenario_example.json"; }

inline ScenarioConfig example_scenario() { return load_scenario_file(example_path()); }

// Valid scenario with one threat heading west toward the HVA at the origin,
// no interceptors and no static defenses.
inline ScenarioConfig bare_scenario() {
  ScenarioConfig c;
  c.hva = {0.0, 0.0};

  ITParams& it = c.it;
  it.speed = {30.0, 60.0};
  it.accel = {-6.0, 6.0};
  it.turn_rate = {-0.6, 0.6};
  it.turn_penalty = 20.0;
  it.energy0 = 400.0;
  it.w_energy = 1.0;
  it.w_risk = 20.0;
  it.w_terminal = 1e-3;
  it.slack_weight = 100.0;
  it.step = 0.1;
  it.horizon = 15;
  it.attack_speed = 45.0;
  it.initial.position = {1000.0, 0.0};
  it.initial.speed = 45.0;
  it.initial.heading = kPi;
  it.initial.energy = it.energy0;

  EIParams& ei = c.ei;
  ei.speed = {20.0, 80.0};
  ei.accel = {-10.0, 10.0};
  ei.turn_rate = {-1.0, 1.0};
  ei.turn_penalty = 2.0;
  ei.energy0 = 1500.0;
  ei.w_energy = 1.0;
  ei.w_barrier = 1.0;
  ei.w_proximity = 1e-3;
  ei.slack_weight = 100.0;
  ei.step = 0.2;
  ei.horizon = 15;
  ei.intercept_speed = 75.0;

  FieldParams& f = c.fields;
  f.w_sd = 5.0;
  f.sigma_sd = 120.0;
  f.w_ei = 10.0;
  f.sigma_ei = 60.0;
  f.w_pac = 1.0;
  f.r_pac = 250.0;
  f.w_htc = 0.5;
  f.r_htc = 1200.0;
  f.psi = 0.3;

  EngagementParams& e = c.engagement;
  e.r_dz = 60.0;
  e.r_iz = 15.0;
  e.r_pz = 400.0;
  e.master_step = 0.01;
  e.max_time = 60.0;
  e.seed = 1;
  return c;
}

inline EIAgent make_ei(Vec2 patrol, Vec2 position, double speed, double heading) {
  EIAgent a;
  a.patrol_center = patrol;
  a.initial.position = position;
  a.initial.speed = speed;
  a.initial.heading = heading;
  return a;
}

}  // namespace edsim::test
