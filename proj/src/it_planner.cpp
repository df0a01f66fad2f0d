#include "edsim/it_planner.hpp"

#include <memory>

#include "edsim/dynamics.hpp"
#include "edsim/fields.hpp"

namespace edsim {

std::vector<AnticipatedTrack> it_candidate_eis(const Vec2& threat, double attack_heading, double attack_speed,
                                               std::span<const AgentState> eis, double r_pz, double intercept_speed,
                                               double step, int horizon) {
  std::vector<AnticipatedTrack> tracks;
  for (const AgentState& ei : eis) {
    if ((ei.position - threat).norm() > r_pz) continue;
    if (ei.position == threat) continue;
    const InterceptResult r = solve_intercept(threat, ei.position, attack_heading, attack_speed, intercept_speed);
    if (!r.feasible()) continue;
    tracks.push_back(anticipate_line(ei.position, r.solution->heading, intercept_speed, step, horizon));
  }
  return tracks;
}

OcpProblem build_it_problem(const AgentState& threat, std::span<const AgentState> eis, const ScenarioConfig& cfg,
                            std::vector<AnticipatedTrack>* tracks_out) {
  const ITParams& it = cfg.it;
  const double attack_heading = los_angle(threat.position, cfg.hva);
  auto tracks = it_candidate_eis(threat.position, attack_heading, it.attack_speed, eis, cfg.engagement.r_pz,
                                 cfg.ei.intercept_speed, it.step, it.horizon);

  // points[j] holds every anticipated EI position at prediction step j.
  auto points = std::make_shared<std::vector<std::vector<Vec2>>>(static_cast<std::size_t>(it.horizon) + 1);
  for (const auto& t : tracks)
    for (std::size_t j = 0; j < t.positions.size(); ++j) (*points)[j].push_back(t.positions[j]);
  if (tracks_out) *tracks_out = std::move(tracks);

  auto defenses = std::make_shared<const std::vector<Vec2>>(cfg.static_defenses);
  const FieldParams fields = cfg.fields;
  const double m1 = it.w_energy;
  const double m2 = it.w_risk;
  const double m3 = it.w_terminal;
  const double lambda = it.turn_penalty;
  const Vec2 hva = cfg.hva;

  OcpProblem p;
  p.initial = threat;
  p.horizon = it.horizon;
  p.step = it.step;
  p.controls = {it.accel, it.turn_rate};
  p.speed = it.speed;
  p.turn_penalty = lambda;
  p.slack_weight = it.slack_weight;
  p.stage_cost = [=](int j, const AgentState& s, const Control& u) {
    const double rho = risk_density(s.position, *defenses, (*points)[static_cast<std::size_t>(j)], fields).total;
    return m1 * effort_rate(u, lambda) + m2 * rho;
  };
  p.terminal_cost = [=](const AgentState& s) { return m3 * (s.position - hva).squaredNorm(); };
  p.require_terminal_energy = true;
  return p;
}

ItPlan plan_it(const AgentState& threat, std::span<const AgentState> eis, const ScenarioConfig& cfg,
               std::optional<std::span<const Control>> warm_start, const SolverOptions& options) {
  ItPlan plan;
  const OcpProblem problem = build_it_problem(threat, eis, cfg, &plan.ei_tracks);
  plan.solution = solve(problem, warm_start, options);
  return plan;
}

}  // namespace edsim
