#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "edsim/types.hpp"

namespace edsim {

struct TerminalBall {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
};

/// Horizon-length control problem transcribed by single shooting.
///
/// The objective is
///
///   sum_j (stage(j, s_j, u_j) + W |sigma_j|^2) * step
///     + terminal(s_h) + W |sigma_h|^2 + W_e * max(0, -e_h)^2
///
/// where sigma_j is the speed-box violation of the predicted state s_j and
/// sigma_h collects the terminal speed and terminal-ball violations. Controls
/// are kept inside their box by projection, so control slack is always zero.
struct OcpProblem {
  AgentState initial;
  int horizon = 1;
  double step = 0.1;
  ControlBox controls;
  Interval speed;
  double turn_penalty = 1.0;
  double slack_weight = 1.0;
  std::function<double(int, const AgentState&, const Control&)> stage_cost;
  std::function<double(const AgentState&)> terminal_cost;  // optional
  std::optional<TerminalBall> terminal_ball;
  bool require_terminal_energy = true;
};

struct SolverOptions {
  int max_iterations = 500;
  double gradient_tol = 1e-6;  // scaled by (1 + |J|)
  double armijo_c = 1e-4;
  double shrink = 0.5;
  int max_backtracks = 60;
  /// Armijo reference is the largest of the last `nonmonotone_window`
  /// objective values; 1 gives the classic monotone test.
  int nonmonotone_window = 10;
  double fd_rel_step = 1e-6;  // h_fd = fd_rel_step * (1 + |u|_inf)
  double slack_tol = 1e-6;
  double energy_penalty_factor = 1e6;  // W_e = factor * slack_weight
  /// Penalties act on bounds tightened by this fraction of their width (speed
  /// box) or initial energy, and the terminal ball by its own fraction of the
  /// radius, so that a penalized optimum lands strictly inside the true
  /// constraint set.
  double constraint_margin = 1e-3;
  double terminal_ball_margin = 3e-2;
};

enum class SolveStatus { kConverged, kStalled, kIterationLimit };

std::string_view to_string(SolveStatus status);

struct OcpSolution {
  std::vector<Control> controls;
  std::vector<AgentState> states;   // exact rollout, horizon + 1 entries
  std::vector<double> stage_slack;  // speed-box violation of s_0 .. s_{h-1}
  double terminal_speed_slack = 0.0;
  double terminal_ball_slack = 0.0;
  double terminal_energy = 0.0;
  double objective = 0.0;
  double initial_objective = 0.0;  // objective of the projected starting guess
  bool feasible = false;
  int iterations = 0;
  SolveStatus status = SolveStatus::kConverged;

  [[nodiscard]] Control first() const { return controls.front(); }
  [[nodiscard]] double max_slack() const;
};

/// Forward-Euler prediction without speed clamping. Energy may go negative.
std::vector<AgentState> rollout(const AgentState& initial, std::span<const Control> controls, double step,
                                double turn_penalty);

/// Central differences, one coordinate at a time.
Eigen::VectorXd finite_diff_gradient(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                                     double h_fd);

/// Penalized objective of `controls` (no projection applied).
double evaluate_objective(const OcpProblem& problem, std::span<const Control> controls,
                          const SolverOptions& options = {});

/// Projected-gradient minimization with a Barzilai-Borwein trial step and
/// Armijo backtracking along the projection arc. Deterministic. Throws
/// std::invalid_argument for malformed problems or warm starts of the wrong
/// length; hitting the iteration cap is reported through `status`.
OcpSolution solve(const OcpProblem& problem, std::optional<std::span<const Control>> warm_start = std::nullopt,
                  const SolverOptions& options = {});

/// Receding-horizon warm start: drop the first control, repeat the last.
std::vector<Control> shift_controls(std::span<const Control> controls);

Eigen::VectorXd pack(std::span<const Control> controls);
std::vector<Control> unpack(const Eigen::VectorXd& x);

}  // namespace edsim
