#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "edsim/intercept.hpp"
#include "edsim/optimizer.hpp"
#include "edsim/scenario.hpp"

namespace edsim {

/// An interceptor the command node can still steer, tagged with its team index.
struct EiSnapshot {
  std::size_t index = 0;
  AgentState state;
};

/// Indices of interceptors inside the closed proximity ball around the threat.
std::vector<std::size_t> candidate_set(const Vec2& threat, std::span<const EiSnapshot> eis, double r_pz);

/// The command node's straight-line model of the threat on the EI grid,
/// flown at the nominal attack speed along the attack/evasion blend.
AnticipatedTrack cn_anticipate_it(const Vec2& threat, const Vec2& hva, std::span<const Vec2> candidate_positions,
                                  double psi, double attack_speed, double step, int horizon);

/// Weight standing in for the slack-free hard constraints of the terminal
/// intercept problem (speed box and terminal ball).
inline constexpr double kHardConstraintWeight = 1e2;

OcpProblem build_terminal_problem(const AgentState& ei, const AnticipatedTrack& track, const EIParams& params,
                                  double r_iz);

/// Minimizes sum_j |p_j - track_j|^2 * step subject to reaching the ball of
/// radius r_iz around the track's final sample with nonnegative energy.
OcpSolution solve_terminal_intercept(const AgentState& ei, const AnticipatedTrack& track, const EIParams& params,
                                     double r_iz, std::optional<std::span<const Control>> warm_start = std::nullopt,
                                     const SolverOptions& options = {});

/// True when the terminal solution is good enough to commit the interceptor.
bool commits_to_intercept(const OcpSolution& terminal);

OcpProblem build_pursuit_problem(const AgentState& ei, const Vec2& patrol_center, const AnticipatedTrack& track,
                                 const ScenarioConfig& cfg);

using WarmStartCache = std::map<std::size_t, std::vector<Control>>;

struct CnAssignment {
  std::size_t ei = 0;
  OcpSolution solution;
  bool warm_started = false;
};

/// The pursuit cost has no cross terms between interceptors, so the joint
/// problem is solved as independent per-EI problems in index order.
std::vector<CnAssignment> solve_pursuit(std::span<const EiSnapshot> pursuers, const AnticipatedTrack& track,
                                        const ScenarioConfig& cfg, const WarmStartCache& warm,
                                        const SolverOptions& options = {});

struct CnDecision {
  std::vector<std::size_t> candidates;  // proximity set before the feasibility test
  std::vector<CnAssignment> intercept;  // committed interceptors
  std::vector<CnAssignment> pursuit;    // every other alive interceptor
  std::vector<CnAssignment> rejected;   // terminal solves that failed, for diagnostics
  AnticipatedTrack track;
  double terminal_heading = 0.0;

  /// First control for interceptor `ei`, if it was planned this cycle.
  [[nodiscard]] std::optional<Control> control_for(std::size_t ei) const;
  [[nodiscard]] bool is_intercepting(std::size_t ei) const;
};

/// One command-node cycle: proximity set, per-candidate terminal solves,
/// pursuit for the rest, first controls for everyone.
CnDecision cn_decide(const AgentState& threat, std::span<const EiSnapshot> eis, const ScenarioConfig& cfg,
                     const WarmStartCache& warm, const SolverOptions& options = {});

}  // namespace edsim
