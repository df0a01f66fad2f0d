#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edsim/optimizer.hpp"
#include "edsim/scenario.hpp"

namespace edsim {

/// Agent identifier in logs: -1 is the threat, 0.. are interceptors.
inline constexpr int kThreat = -1;

std::string agent_name(int agent);

enum class EventKind { kIzEntry, kDzEntry, kItDepleted, kEiDepleted, kPlanningFailure, kTimeout };

std::string_view to_string(EventKind kind);

struct EngagementEvent {
  EventKind kind = EventKind::kTimeout;
  double time = 0.0;
  int agent = kThreat;  // interceptor for IZ entry / EI depletion, planner for failures
  Vec2 position = Vec2::Zero();  // threat position, or the interceptor's for EI depletion
  bool terminal = false;
};

enum class Mode { kIt, kEiPursuit, kEiIntercept, kCoast };

std::string_view to_string(Mode mode);

struct TrajectorySample {
  double time = 0.0;
  int agent = kThreat;
  AgentState state;
  Mode mode = Mode::kIt;
  Control control;  // applied over [time, time + master_step)
};

enum class AgentOutcome { kSuccess, kFailure, kUndecided };

std::string_view to_string(AgentOutcome outcome);

enum class Termination { kIntercepted, kDiveZone, kItDepleted, kTimeout };

std::string_view to_string(Termination t);

struct Outcome {
  Termination termination = Termination::kTimeout;
  double time = 0.0;
  int interceptor = kThreat;  // the detonating EI when intercepted
  AgentOutcome it = AgentOutcome::kFailure;
  AgentOutcome ei = AgentOutcome::kUndecided;
  bool hva_held = true;
};

/// The first terminal event decides the outcome. Throws std::logic_error when
/// no terminal event is present.
Outcome classify(std::span<const EngagementEvent> events);

enum class PlannerKind { kThreat, kTerminal, kPursuit };

std::string_view to_string(PlannerKind kind);

struct SolveRecord {
  double time = 0.0;
  int agent = kThreat;
  PlannerKind kind = PlannerKind::kThreat;
  bool warm_started = false;
  double initial_objective = 0.0;
  double objective = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::kConverged;
  bool feasible = false;
  double max_slack = 0.0;
};

struct CycleRecord {
  double time = 0.0;
  std::vector<std::size_t> alive;  // interceptors the command node steered
  std::vector<std::size_t> candidates;
  std::vector<std::size_t> intercept;
  std::vector<std::size_t> pursuit;
};

struct EngagementResult {
  Outcome outcome;
  std::vector<EngagementEvent> events;
  std::vector<TrajectorySample> trajectory;
  std::vector<SolveRecord> solves;
  std::vector<CycleRecord> cycles;
  AgentState final_threat;
  std::vector<AgentState> final_eis;
  double it_energy_spent = 0.0;
};

/// Snapshot of the world on the master grid, with the controls applied over
/// the step that starts here.
struct World {
  double time = 0.0;
  AgentState threat;
  std::vector<AgentState> eis;
  Control threat_control;
  std::vector<Control> ei_controls;  // empty means all zero
};

/// Sign changes of the IZ and DZ distance functions and of the energies
/// between two worlds one master step apart. Crossing times are refined by
/// linear interpolation and the result is sorted by time.
std::vector<EngagementEvent> detect_events(const World& prev, const World& next, const ScenarioConfig& cfg);

/// Containment checks for the initial world (events at t = 0).
std::vector<EngagementEvent> initial_events(const World& world, const ScenarioConfig& cfg);

/// Runs the engagement to the first terminal event or the time limit.
/// Expects a valid configuration.
EngagementResult run(const ScenarioConfig& cfg, const SolverOptions& options = {});

}  // namespace edsim
