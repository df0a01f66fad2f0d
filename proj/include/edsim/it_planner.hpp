#pragma once

#include <optional>
#include <span>
#include <vector>

#include "edsim/intercept.hpp"
#include "edsim/optimizer.hpp"
#include "edsim/scenario.hpp"

namespace edsim {

/// The threat's model of the interceptors around it: every EI within `r_pz`
/// is assumed to fly a straight intercept line at `intercept_speed` against
/// the threat's nominal attack line. EIs failing the intercept test are
/// pruned. Tracks are sampled on the threat's planner grid.
std::vector<AnticipatedTrack> it_candidate_eis(const Vec2& threat, double attack_heading, double attack_speed,
                                               std::span<const AgentState> eis, double r_pz, double intercept_speed,
                                               double step, int horizon);

struct ItPlan {
  OcpSolution solution;
  std::vector<AnticipatedTrack> ei_tracks;
};

/// Problem assembled by plan_it; exposed for baseline comparisons.
OcpProblem build_it_problem(const AgentState& threat, std::span<const AgentState> eis, const ScenarioConfig& cfg,
                            std::vector<AnticipatedTrack>* tracks_out = nullptr);

/// One receding-horizon solve for the threat. Stage cost is
/// m1 (a^2 + lambda w^2) + m2 rho with rho sampled at the same step index on
/// the anticipated EI tracks; terminal cost is m3 |p_h - p_hva|^2.
ItPlan plan_it(const AgentState& threat, std::span<const AgentState> eis, const ScenarioConfig& cfg,
               std::optional<std::span<const Control>> warm_start = std::nullopt, const SolverOptions& options = {});

}  // namespace edsim
