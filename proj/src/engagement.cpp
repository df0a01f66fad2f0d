#include "edsim/engagement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "edsim/cn_planner.hpp"
#include "edsim/dynamics.hpp"
#include "edsim/it_planner.hpp"

namespace edsim {

std::string agent_name(int agent) { return agent == kThreat ? "it" : "ei" + std::to_string(agent); }

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kIzEntry: return "iz_entry";
    case EventKind::kDzEntry: return "dz_entry";
    case EventKind::kItDepleted: return "it_depleted";
    case EventKind::kEiDepleted: return "ei_depleted";
    case EventKind::kPlanningFailure: return "planning_failure";
    case EventKind::kTimeout: return "timeout";
  }
  return "unknown";
}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kIt: return "it";
    case Mode::kEiPursuit: return "ei_pursuit";
    case Mode::kEiIntercept: return "ei_intercept";
    case Mode::kCoast: return "coast";
  }
  return "unknown";
}

std::string_view to_string(AgentOutcome outcome) {
  switch (outcome) {
    case AgentOutcome::kSuccess: return "success";
    case AgentOutcome::kFailure: return "failure";
    case AgentOutcome::kUndecided: return "undecided";
  }
  return "unknown";
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::kIntercepted: return "intercepted";
    case Termination::kDiveZone: return "dive_zone";
    case Termination::kItDepleted: return "it_depleted";
    case Termination::kTimeout: return "timeout";
  }
  return "unknown";
}

std::string_view to_string(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::kThreat: return "threat";
    case PlannerKind::kTerminal: return "terminal";
    case PlannerKind::kPursuit: return "pursuit";
  }
  return "unknown";
}

Outcome classify(std::span<const EngagementEvent> events) {
  auto it = std::find_if(events.begin(), events.end(), [](const EngagementEvent& e) { return e.terminal; });
  if (it == events.end()) throw std::logic_error("event log has no terminal event");
  Outcome o;
  o.time = it->time;
  switch (it->kind) {
    case EventKind::kIzEntry:
      o = {Termination::kIntercepted, it->time, it->agent, AgentOutcome::kFailure, AgentOutcome::kSuccess, true};
      break;
    case EventKind::kDzEntry:
      o = {Termination::kDiveZone, it->time, kThreat, AgentOutcome::kSuccess, AgentOutcome::kFailure, false};
      break;
    case EventKind::kItDepleted:
      o = {Termination::kItDepleted, it->time, kThreat, AgentOutcome::kFailure, AgentOutcome::kSuccess, true};
      break;
    case EventKind::kTimeout:
      o = {Termination::kTimeout, it->time, kThreat, AgentOutcome::kFailure, AgentOutcome::kUndecided, true};
      break;
    default:
      throw std::logic_error("event kind cannot be terminal");
  }
  return o;
}

namespace {

// Fraction in (0, 1] where a linear function going from g0 > 0 to g1 <= 0 hits zero.
double crossing_fraction(double g0, double g1) { return g0 / (g0 - g1); }

Vec2 lerp(const Vec2& a, const Vec2& b, double f) { return a + f * (b - a); }

Control ei_control(const World& w, std::size_t i) { return i < w.ei_controls.size() ? w.ei_controls[i] : Control{}; }

}  // namespace

std::vector<EngagementEvent> detect_events(const World& prev, const World& next, const ScenarioConfig& cfg) {
  std::vector<EngagementEvent> out;
  const double dt = next.time - prev.time;
  const auto& eng = cfg.engagement;
  const Vec2& p0 = prev.threat.position;
  const Vec2& p1 = next.threat.position;

  for (std::size_t i = 0; i < prev.eis.size() && i < next.eis.size(); ++i) {
    const double g0 = (p0 - prev.eis[i].position).norm() - eng.r_iz;
    const double g1 = (p1 - next.eis[i].position).norm() - eng.r_iz;
    if (g0 > 0.0 && g1 <= 0.0) {
      const double f = crossing_fraction(g0, g1);
      out.push_back({EventKind::kIzEntry, prev.time + f * dt, static_cast<int>(i), lerp(p0, p1, f), true});
    }
  }

  const double d0 = (p0 - cfg.hva).norm() - eng.r_dz;
  const double d1 = (p1 - cfg.hva).norm() - eng.r_dz;
  if (d0 > 0.0 && d1 <= 0.0) {
    const double f = crossing_fraction(d0, d1);
    out.push_back({EventKind::kDzEntry, prev.time + f * dt, kThreat, lerp(p0, p1, f), true});
  }

  if (prev.threat.energy > 0.0 && next.threat.energy <= 0.0) {
    const double rate = effort_rate(prev.threat_control, cfg.it.turn_penalty);
    const double f = rate > 0.0 ? std::min(1.0, prev.threat.energy / (rate * dt)) : 1.0;
    out.push_back({EventKind::kItDepleted, prev.time + f * dt, kThreat, lerp(p0, p1, f),
                   !eng.ballistic_depletion});
  }
  for (std::size_t i = 0; i < prev.eis.size() && i < next.eis.size(); ++i) {
    if (!(prev.eis[i].energy > 0.0 && next.eis[i].energy <= 0.0)) continue;
    const double rate = effort_rate(ei_control(prev, i), cfg.ei.turn_penalty);
    const double f = rate > 0.0 ? std::min(1.0, prev.eis[i].energy / (rate * dt)) : 1.0;
    out.push_back({EventKind::kEiDepleted, prev.time + f * dt, static_cast<int>(i),
                   lerp(prev.eis[i].position, next.eis[i].position, f), false});
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const EngagementEvent& a, const EngagementEvent& b) { return a.time < b.time; });
  return out;
}

std::vector<EngagementEvent> initial_events(const World& world, const ScenarioConfig& cfg) {
  std::vector<EngagementEvent> out;
  const Vec2& p = world.threat.position;
  for (std::size_t i = 0; i < world.eis.size(); ++i)
    if ((p - world.eis[i].position).norm() <= cfg.engagement.r_iz)
      out.push_back({EventKind::kIzEntry, world.time, static_cast<int>(i), p, true});
  if ((p - cfg.hva).norm() <= cfg.engagement.r_dz)
    out.push_back({EventKind::kDzEntry, world.time, kThreat, p, true});
  return out;
}

namespace {

class Engine {
 public:
  Engine(const ScenarioConfig& cfg, const SolverOptions& options) : cfg_(cfg), options_(options) {
    const double dt = cfg.engagement.master_step;
    it_every_ = grid_ratio(cfg.it.step, dt);
    cn_every_ = grid_ratio(cfg.ei.step, dt);
    if (it_every_ <= 0 || cn_every_ <= 0) throw std::invalid_argument("planner steps are not multiples of the master step");
    total_steps_ = static_cast<long>(std::ceil(cfg.engagement.max_time / dt - 1e-9));

    world_.threat = cfg.it.initial;
    world_.threat.energy = cfg.it.energy0;
    for (const EIAgent& a : cfg.eis) {
      AgentState s = a.initial;
      s.energy = cfg.ei.energy0;
      world_.eis.push_back(s);
    }
    const std::size_t n = cfg.eis.size();
    world_.ei_controls.assign(n, Control{});
    ei_mode_.assign(n, Mode::kEiPursuit);
  }

  EngagementResult run() {
    const double dt = cfg_.engagement.master_step;
    result_.events = initial_events(world_, cfg_);
    bool done = !result_.events.empty();
    for (long n = 0;; ++n) {
      world_.time = static_cast<double>(n) * dt;
      if (done) {
        world_.threat_control = {};
        std::fill(world_.ei_controls.begin(), world_.ei_controls.end(), Control{});
        log_samples();
        break;
      }
      if (n % it_every_ == 0 && threat_mode_ != Mode::kCoast) plan_threat();
      if (n % cn_every_ == 0) plan_interceptors();
      enforce_energy_floor();
      log_samples();
      if (n >= total_steps_) {
        result_.events.push_back({EventKind::kTimeout, world_.time, kThreat, world_.threat.position, true});
        break;
      }

      World next = advance(dt);
      next.time = static_cast<double>(n + 1) * dt;
      auto events = detect_events(world_, next, cfg_);
      for (const auto& e : events) {
        if (e.kind == EventKind::kEiDepleted) ei_mode_[static_cast<std::size_t>(e.agent)] = Mode::kCoast;
        if (e.kind == EventKind::kItDepleted) threat_mode_ = Mode::kCoast;
        if (e.terminal) done = true;
      }
      result_.events.insert(result_.events.end(), events.begin(), events.end());
      world_.threat = next.threat;
      world_.eis = next.eis;
    }

    result_.outcome = classify(result_.events);
    result_.final_threat = world_.threat;
    result_.final_eis = world_.eis;
    result_.it_energy_spent = cfg_.it.energy0 - world_.threat.energy;
    return std::move(result_);
  }

 private:
  void plan_threat() {
    std::optional<std::span<const Control>> warm;
    if (!threat_warm_.empty()) warm = std::span<const Control>(threat_warm_);
    const ItPlan plan = plan_it(world_.threat, world_.eis, cfg_, warm, options_);
    const OcpSolution& sol = plan.solution;
    record(kThreat, PlannerKind::kThreat, sol, warm.has_value());
    if (!sol.feasible) failure(kThreat, world_.threat.position);
    if (sol.feasible || sol.status != SolveStatus::kIterationLimit)
      world_.threat_control = ControlBox{cfg_.it.accel, cfg_.it.turn_rate}.project(sol.first());
    threat_warm_ = shift_controls(sol.controls);
  }

  void plan_interceptors() {
    std::vector<EiSnapshot> alive;
    for (std::size_t i = 0; i < world_.eis.size(); ++i)
      if (ei_mode_[i] != Mode::kCoast) alive.push_back({i, world_.eis[i]});
    if (alive.empty()) return;

    const CnDecision d = cn_decide(world_.threat, alive, cfg_, ei_warm_, options_);
    CycleRecord cycle;
    cycle.time = world_.time;
    for (const auto& e : alive) cycle.alive.push_back(e.index);
    cycle.candidates = d.candidates;

    for (const CnAssignment& a : d.rejected)
      record(static_cast<int>(a.ei), PlannerKind::kTerminal, a.solution, a.warm_started);
    const ControlBox box{cfg_.ei.accel, cfg_.ei.turn_rate};
    for (const CnAssignment& a : d.intercept) {
      record(static_cast<int>(a.ei), PlannerKind::kTerminal, a.solution, a.warm_started);
      ei_mode_[a.ei] = Mode::kEiIntercept;
      world_.ei_controls[a.ei] = box.project(a.solution.first());
      ei_warm_[a.ei] = shift_controls(a.solution.controls);
      cycle.intercept.push_back(a.ei);
    }
    for (const CnAssignment& a : d.pursuit) {
      const OcpSolution& sol = a.solution;
      record(static_cast<int>(a.ei), PlannerKind::kPursuit, sol, a.warm_started);
      ei_mode_[a.ei] = Mode::kEiPursuit;
      if (!sol.feasible) failure(static_cast<int>(a.ei), world_.eis[a.ei].position);
      if (sol.feasible || sol.status != SolveStatus::kIterationLimit) world_.ei_controls[a.ei] = box.project(sol.first());
      ei_warm_[a.ei] = shift_controls(sol.controls);
      cycle.pursuit.push_back(a.ei);
    }
    result_.cycles.push_back(std::move(cycle));
  }

  // Agents that are coasting or out of energy fly with zero control.
  void enforce_energy_floor() {
    if (threat_mode_ == Mode::kCoast || world_.threat.energy <= 0.0) world_.threat_control = {};
    for (std::size_t i = 0; i < world_.eis.size(); ++i)
      if (ei_mode_[i] == Mode::kCoast || world_.eis[i].energy <= 0.0) world_.ei_controls[i] = {};
  }

  World advance(double dt) const {
    World next;
    next.threat = unicycle_step(world_.threat, world_.threat_control, dt, cfg_.it.speed);
    next.threat.energy = energy_step(world_.threat.energy, world_.threat_control, cfg_.it.turn_penalty, dt).energy;
    for (std::size_t i = 0; i < world_.eis.size(); ++i) {
      AgentState s = unicycle_step(world_.eis[i], world_.ei_controls[i], dt, cfg_.ei.speed);
      s.energy = energy_step(world_.eis[i].energy, world_.ei_controls[i], cfg_.ei.turn_penalty, dt).energy;
      next.eis.push_back(s);
    }
    return next;
  }

  void log_samples() {
    result_.trajectory.push_back({world_.time, kThreat, world_.threat, threat_mode_, world_.threat_control});
    for (std::size_t i = 0; i < world_.eis.size(); ++i)
      result_.trajectory.push_back(
          {world_.time, static_cast<int>(i), world_.eis[i], ei_mode_[i], world_.ei_controls[i]});
  }

  void record(int agent, PlannerKind kind, const OcpSolution& sol, bool warm) {
    result_.solves.push_back({world_.time, agent, kind, warm, sol.initial_objective, sol.objective, sol.iterations,
                              sol.status, sol.feasible, sol.max_slack()});
  }

  void failure(int agent, const Vec2& position) {
    result_.events.push_back({EventKind::kPlanningFailure, world_.time, agent, position, false});
  }

  const ScenarioConfig& cfg_;
  SolverOptions options_;
  long it_every_ = 1;
  long cn_every_ = 1;
  long total_steps_ = 0;
  World world_;
  Mode threat_mode_ = Mode::kIt;
  std::vector<Mode> ei_mode_;
  std::vector<Control> threat_warm_;
  WarmStartCache ei_warm_;
  EngagementResult result_;
};

}  // namespace

EngagementResult run(const ScenarioConfig& cfg, const SolverOptions& options) { return Engine(cfg, options).run(); }

}  // namespace edsim
