#include "edsim/cn_planner.hpp"

#include <algorithm>
#include <memory>

#include "edsim/dynamics.hpp"
#include "edsim/fields.hpp"

namespace edsim {

namespace {

std::optional<std::span<const Control>> lookup(const WarmStartCache& warm, std::size_t ei, int horizon) {
  auto it = warm.find(ei);
  if (it == warm.end() || it->second.size() != static_cast<std::size_t>(horizon)) return std::nullopt;
  return std::span<const Control>(it->second);
}

const CnAssignment* find(const std::vector<CnAssignment>& list, std::size_t ei) {
  auto it = std::find_if(list.begin(), list.end(), [&](const CnAssignment& a) { return a.ei == ei; });
  return it == list.end() ? nullptr : &*it;
}

}  // namespace

std::vector<std::size_t> candidate_set(const Vec2& threat, std::span<const EiSnapshot> eis, double r_pz) {
  std::vector<std::size_t> out;
  for (const EiSnapshot& e : eis)
    if ((e.state.position - threat).norm() <= r_pz) out.push_back(e.index);
  return out;
}

AnticipatedTrack cn_anticipate_it(const Vec2& threat, const Vec2& hva, std::span<const Vec2> candidate_positions,
                                  double psi, double attack_speed, double step, int horizon) {
  const double heading = terminal_heading(threat, hva, candidate_positions, psi);
  return anticipate_line(threat, heading, attack_speed, step, horizon);
}

OcpProblem build_terminal_problem(const AgentState& ei, const AnticipatedTrack& track, const EIParams& params,
                                  double r_iz) {
  auto points = std::make_shared<const std::vector<Vec2>>(track.positions);
  OcpProblem p;
  p.initial = ei;
  p.horizon = params.horizon;
  p.step = params.step;
  p.controls = {params.accel, params.turn_rate};
  p.speed = params.speed;
  p.turn_penalty = params.turn_penalty;
  p.slack_weight = kHardConstraintWeight;
  // Measured in units of the intercept radius.
  const double inv_r2 = 1.0 / (r_iz * r_iz);
  p.stage_cost = [points, inv_r2](int j, const AgentState& s, const Control&) {
    return (s.position - (*points)[static_cast<std::size_t>(j)]).squaredNorm() * inv_r2;
  };
  p.terminal_ball = TerminalBall{track.positions.back(), r_iz};
  p.require_terminal_energy = true;
  return p;
}

OcpSolution solve_terminal_intercept(const AgentState& ei, const AnticipatedTrack& track, const EIParams& params,
                                     double r_iz, std::optional<std::span<const Control>> warm_start,
                                     const SolverOptions& options) {
  return solve(build_terminal_problem(ei, track, params, r_iz), warm_start, options);
}

bool commits_to_intercept(const OcpSolution& terminal) {
  return terminal.feasible && terminal.status != SolveStatus::kIterationLimit;
}

OcpProblem build_pursuit_problem(const AgentState& ei, const Vec2& patrol_center, const AnticipatedTrack& track,
                                 const ScenarioConfig& cfg) {
  const EIParams& params = cfg.ei;
  auto points = std::make_shared<const std::vector<Vec2>>(track.positions);
  const FieldParams fields = cfg.fields;
  const Vec2 hva = cfg.hva;
  const double mu1 = params.w_energy;
  const double mu2 = params.w_barrier;
  const double mu3 = params.w_proximity;
  const double kappa = params.turn_penalty;

  OcpProblem p;
  p.initial = ei;
  p.horizon = params.horizon;
  p.step = params.step;
  p.controls = {params.accel, params.turn_rate};
  p.speed = params.speed;
  p.turn_penalty = kappa;
  p.slack_weight = params.slack_weight;
  p.stage_cost = [=](int j, const AgentState& s, const Control& u) {
    const double delta2 = (s.position - (*points)[static_cast<std::size_t>(j)]).squaredNorm();
    return mu1 * effort_rate(u, kappa) + mu2 * barrier_cost(s.position, patrol_center, hva, fields).total +
           mu3 * delta2;
  };
  p.require_terminal_energy = true;
  return p;
}

std::vector<CnAssignment> solve_pursuit(std::span<const EiSnapshot> pursuers, const AnticipatedTrack& track,
                                        const ScenarioConfig& cfg, const WarmStartCache& warm,
                                        const SolverOptions& options) {
  std::vector<CnAssignment> out;
  out.reserve(pursuers.size());
  for (const EiSnapshot& e : pursuers) {
    const OcpProblem problem = build_pursuit_problem(e.state, cfg.eis.at(e.index).patrol_center, track, cfg);
    const auto start = lookup(warm, e.index, problem.horizon);
    out.push_back({e.index, solve(problem, start, options), start.has_value()});
  }
  return out;
}

std::optional<Control> CnDecision::control_for(std::size_t ei) const {
  if (const CnAssignment* a = find(intercept, ei)) return a->solution.first();
  if (const CnAssignment* a = find(pursuit, ei)) return a->solution.first();
  return std::nullopt;
}

bool CnDecision::is_intercepting(std::size_t ei) const { return find(intercept, ei) != nullptr; }

CnDecision cn_decide(const AgentState& threat, std::span<const EiSnapshot> eis, const ScenarioConfig& cfg,
                     const WarmStartCache& warm, const SolverOptions& options) {
  std::vector<EiSnapshot> ordered(eis.begin(), eis.end());
  std::sort(ordered.begin(), ordered.end(), [](const EiSnapshot& a, const EiSnapshot& b) { return a.index < b.index; });

  CnDecision d;
  d.candidates = candidate_set(threat.position, ordered, cfg.engagement.r_pz);

  std::vector<Vec2> candidate_positions;
  for (const EiSnapshot& e : ordered)
    if (std::binary_search(d.candidates.begin(), d.candidates.end(), e.index))
      candidate_positions.push_back(e.state.position);
  const double psi = d.candidates.empty() ? 0.0 : cfg.fields.psi;
  d.track = cn_anticipate_it(threat.position, cfg.hva, candidate_positions, psi, cfg.it.attack_speed, cfg.ei.step,
                             cfg.ei.horizon);
  d.terminal_heading = d.track.heading;

  std::vector<EiSnapshot> pursuers;
  for (const EiSnapshot& e : ordered) {
    if (!std::binary_search(d.candidates.begin(), d.candidates.end(), e.index)) {
      pursuers.push_back(e);
      continue;
    }
    const auto start = lookup(warm, e.index, cfg.ei.horizon);
    CnAssignment a{e.index,
                   solve_terminal_intercept(e.state, d.track, cfg.ei, cfg.engagement.r_iz, start, options),
                   start.has_value()};
    if (commits_to_intercept(a.solution)) {
      d.intercept.push_back(std::move(a));
    } else {
      d.rejected.push_back(std::move(a));
      pursuers.push_back(e);
    }
  }
  std::sort(pursuers.begin(), pursuers.end(), [](const EiSnapshot& a, const EiSnapshot& b) { return a.index < b.index; });
  d.pursuit = solve_pursuit(pursuers, d.track, cfg, warm, options);
  return d;
}

}  // namespace edsim
