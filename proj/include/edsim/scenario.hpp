#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "edsim/types.hpp"

namespace edsim {

/// Inbound threat limits, mission weights and planner grid.
struct ITParams {
  Interval speed{1.0, 1.0};
  Interval accel{0.0, 0.0};
  Interval turn_rate{0.0, 0.0};
  double turn_penalty = 1.0;  // lambda
  double energy0 = 0.0;
  double w_energy = 1.0;    // m1
  double w_risk = 1.0;      // m2
  double w_terminal = 1.0;  // m3
  double slack_weight = 1.0;  // nu
  double step = 0.1;          // planner step, seconds
  int horizon = 10;
  double attack_speed = 1.0;  // v_atk
  AgentState initial;          // initial.energy mirrors energy0
};

/// Limits shared by every interceptor of the team. The command node runs one
/// synchronized grid, so step and horizon live here rather than per agent.
struct EIParams {
  Interval speed{1.0, 1.0};
  Interval accel{0.0, 0.0};
  Interval turn_rate{0.0, 0.0};
  double turn_penalty = 1.0;  // kappa
  double energy0 = 0.0;
  double w_energy = 1.0;     // mu1
  double w_barrier = 1.0;    // mu2
  double w_proximity = 1.0;  // mu3
  double slack_weight = 1.0;  // eta
  double step = 0.1;
  int horizon = 10;
  double intercept_speed = 1.0;  // v_itc
};

/// Per-interceptor data: patrol center and initial state.
struct EIAgent {
  Vec2 patrol_center = Vec2::Zero();
  AgentState initial;
};

struct FieldParams {
  double w_sd = 1.0;
  double sigma_sd = 1.0;
  double w_ei = 1.0;
  double sigma_ei = 1.0;
  double w_pac = 1.0;
  double r_pac = 1.0;
  double w_htc = 1.0;
  double r_htc = 1.0;
  double psi = 0.0;  // attack (0) versus evasion (1) blend
};

struct EngagementParams {
  double r_dz = 1.0;
  double r_iz = 1.0;
  double r_pz = 2.0;
  double master_step = 0.01;
  double max_time = 60.0;
  std::uint64_t seed = 0;
  bool ballistic_depletion = false;
};

struct ScenarioConfig {
  Vec2 hva = Vec2::Zero();
  std::vector<Vec2> static_defenses;
  ITParams it;
  EIParams ei;
  std::vector<EIAgent> eis;
  FieldParams fields;
  EngagementParams engagement;
};

inline constexpr double kDefaultMaxTime = 60.0;

struct Violation {
  std::string code;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

/// Checks every scenario invariant. Violations are reported with stable codes;
/// an empty report means the configuration is valid.
ValidationReport validate(const ScenarioConfig& cfg);

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Thrown by load_scenario when the document parses but fails validation.
class ScenarioInvalid : public std::runtime_error {
 public:
  explicit ScenarioInvalid(ValidationReport report);

  [[nodiscard]] const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Parses a JSON scenario document without validating it. Throws
/// ScenarioError (carrying the field path) on syntax, missing-field, unknown
/// field and type errors.
ScenarioConfig parse_scenario(std::string_view text);

/// parse_scenario followed by validate; throws ScenarioInvalid on violations.
ScenarioConfig load_scenario(std::string_view text);
ScenarioConfig load_scenario_file(const std::string& path);

/// Serializes to the same schema load_scenario accepts.
std::string write_scenario(const ScenarioConfig& cfg);

/// Integer ratio of step to the master step, or -1 when the grids do not align.
long grid_ratio(double step, double master_step);

}  // namespace edsim
