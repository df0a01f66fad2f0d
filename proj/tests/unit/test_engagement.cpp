#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "edsim/dynamics.hpp"
#include "edsim/engagement.hpp"
#include "support.hpp"

using namespace edsim;
using doctest::Approx;
using edsim::test::bare_scenario;
using edsim::test::kPi;
using edsim::test::make_ei;

namespace {

EngagementEvent ev(EventKind kind, double t, int agent, bool terminal) {
  return {kind, t, agent, Vec2::Zero(), terminal};
}

// Every agent flies straight: the control boxes collapse to zero.
ScenarioConfig straight_scenario() {
  ScenarioConfig c = bare_scenario();
  c.it.accel = {0.0, 0.0};
  c.it.turn_rate = {0.0, 0.0};
  c.ei.accel = {0.0, 0.0};
  c.ei.turn_rate = {0.0, 0.0};
  return c;
}

std::size_t count(const EngagementResult& r, EventKind kind) {
  return static_cast<std::size_t>(
      std::count_if(r.events.begin(), r.events.end(), [&](const EngagementEvent& e) { return e.kind == kind; }));
}

}  // namespace

TEST_CASE("classification follows the first terminal event") {
  const std::vector<EngagementEvent> iz{ev(EventKind::kPlanningFailure, 1, 0, false), ev(EventKind::kIzEntry, 3, 2, true)};
  Outcome o = classify(iz);
  CHECK(o.termination == Termination::kIntercepted);
  CHECK(o.it == AgentOutcome::kFailure);
  CHECK(o.ei == AgentOutcome::kSuccess);
  CHECK(o.interceptor == 2);
  CHECK(o.hva_held);
  CHECK(o.time == 3.0);

  o = classify(std::vector<EngagementEvent>{ev(EventKind::kDzEntry, 7, kThreat, true)});
  CHECK(o.termination == Termination::kDiveZone);
  CHECK(o.it == AgentOutcome::kSuccess);
  CHECK_FALSE(o.hva_held);

  o = classify(std::vector<EngagementEvent>{ev(EventKind::kItDepleted, 5, kThreat, true),
                                            ev(EventKind::kDzEntry, 7, kThreat, true)});
  CHECK(o.termination == Termination::kItDepleted);
  CHECK(o.ei == AgentOutcome::kSuccess);

  o = classify(std::vector<EngagementEvent>{ev(EventKind::kTimeout, 60, kThreat, true)});
  CHECK(o.termination == Termination::kTimeout);
  CHECK(o.hva_held);
  CHECK(o.ei == AgentOutcome::kUndecided);

  CHECK_THROWS_AS(classify(std::vector<EngagementEvent>{ev(EventKind::kEiDepleted, 1, 0, false)}), std::logic_error);
}

TEST_CASE("event detection") {
  ScenarioConfig c = bare_scenario();
  c.engagement.r_dz = 1.0;
  World a;
  a.threat.position = {1.005, 0.0};
  a.threat.energy = 10.0;
  World b = a;
  b.time = 0.01;
  b.threat.position = {0.995, 0.0};

  SUBCASE("no boundary crossed") {
    World far = a;
    far.threat.position = {5.0, 0.0};
    World farther = far;
    farther.threat.position = {4.99, 0.0};
    CHECK(detect_events(far, farther, c).empty());
  }
  SUBCASE("dive zone entry at the step midpoint") {
    const auto events = detect_events(a, b, c);
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == EventKind::kDzEntry);
    CHECK(std::abs(events[0].time - 0.005) <= 1e-4);
    CHECK(events[0].terminal);
  }
  SUBCASE("simultaneous entries are ordered by refined time") {
    // IZ gap 0.002 -> -0.008 crosses at a fifth of the step, DZ at half.
    c.engagement.r_iz = 0.503;
    AgentState ei;
    ei.position = {0.5, 0.0};
    ei.energy = 1.0;
    a.eis = {ei};
    b.eis = {ei};
    const auto events = detect_events(a, b, c);
    REQUIRE(events.size() == 2);
    CHECK(events[0].kind == EventKind::kIzEntry);
    CHECK(events[0].time == Approx(0.002));
    CHECK(events[1].kind == EventKind::kDzEntry);
    CHECK(events[1].time == Approx(0.005));
    CHECK(classify(events).termination == Termination::kIntercepted);
  }
  SUBCASE("energy depletion time uses the applied effort rate") {
    a.threat.energy = 0.5;
    a.threat_control = {10.0, 0.0};  // rate 100, lasts 0.005 s
    b.threat.energy = 0.0;
    b.threat.position = a.threat.position + Vec2(1.0, 0.0);
    const auto events = detect_events(a, b, c);
    REQUIRE(events.size() == 1);
    CHECK(events[0].kind == EventKind::kItDepleted);
    CHECK(events[0].time == Approx(0.005));
    CHECK(events[0].terminal);
    c.engagement.ballistic_depletion = true;
    CHECK_FALSE(detect_events(a, b, c)[0].terminal);
  }
}

TEST_CASE("initial containment") {
  ScenarioConfig c = bare_scenario();
  c.it.initial.position = {10.0, 0.0};
  const EngagementResult r = run(c);
  CHECK(r.outcome.termination == Termination::kDiveZone);
  CHECK(r.outcome.time == 0.0);
}

TEST_CASE("unopposed attack reaches the dive zone") {
  ScenarioConfig c = bare_scenario();
  c.it.initial.position = {400.0, 0.0};
  const EngagementResult r = run(c);
  CHECK(r.outcome.termination == Termination::kDiveZone);
  CHECK(r.outcome.it == AgentOutcome::kSuccess);
  CHECK_FALSE(r.outcome.hva_held);
  CHECK(r.outcome.time > 0.0);
  CHECK(r.outcome.time < (400.0 - 60.0) / 30.0);
}

TEST_CASE("threat without energy coasts past the HVA") {
  ScenarioConfig c = bare_scenario();
  c.it.energy0 = 0.0;
  c.it.initial.energy = 0.0;
  c.it.initial.position = {0.0, -300.0};
  c.it.initial.heading = 0.0;
  c.engagement.max_time = 4.0;
  const EngagementResult r = run(c);
  CHECK(r.outcome.termination == Termination::kTimeout);
  CHECK(r.outcome.hva_held);
  for (const TrajectorySample& s : r.trajectory) {
    CHECK(s.control == Control{});
    CHECK(s.state.position.y() == Approx(-300.0));
  }
  CHECK(r.final_threat.position.x() == Approx(45.0 * 4.0));
}

TEST_CASE("threat depletion ends the engagement unless ballistic") {
  ScenarioConfig c = bare_scenario();
  c.it.energy0 = 3.0;
  c.it.initial.energy = 3.0;
  c.it.initial.heading = kPi / 2;  // must turn to attack
  c.engagement.max_time = 6.0;
  const EngagementResult r = run(c);
  REQUIRE(count(r, EventKind::kItDepleted) == 1);
  CHECK(r.outcome.termination == Termination::kItDepleted);
  CHECK(r.outcome.hva_held);
  CHECK(r.it_energy_spent == Approx(3.0));

  c.engagement.ballistic_depletion = true;
  const EngagementResult b = run(c);
  CHECK(count(b, EventKind::kItDepleted) == 1);
  CHECK(b.outcome.termination == Termination::kTimeout);
  const auto after = std::find_if(b.trajectory.begin(), b.trajectory.end(), [](const TrajectorySample& s) {
    return s.agent == kThreat && s.mode == Mode::kCoast;
  });
  REQUIRE(after != b.trajectory.end());
  for (auto it = after; it != b.trajectory.end(); ++it)
    if (it->agent == kThreat) CHECK(it->control == Control{});
}

TEST_CASE("interceptor depletion is reported but does not end the run") {
  ScenarioConfig c = bare_scenario();
  World a;
  a.threat = c.it.initial;
  AgentState ei;
  ei.position = {0.0, 500.0};
  ei.speed = 30.0;
  ei.energy = 0.2;
  a.eis = {ei};
  a.ei_controls = {Control{0.0, 1.0}};  // rate turn_penalty = 2, lasts 0.1 s
  World b = a;
  b.time = 1.0;
  b.eis[0].energy = 0.0;
  const auto events = detect_events(a, b, c);
  REQUIRE(events.size() == 1);
  CHECK(events[0].kind == EventKind::kEiDepleted);
  CHECK(events[0].agent == 0);
  CHECK(events[0].time == Approx(0.1));
  CHECK_FALSE(events[0].terminal);
}

TEST_CASE("straight-line intercept between command node decisions") {
  ScenarioConfig c = straight_scenario();
  c.eis.push_back(make_ei({500, 10}, {500, 10}, 40.0, 0.0));
  // Relative offset (500 - 85 t, -10) reaches norm 15 at the earlier root.
  const double t_exact = (500.0 - std::sqrt(125.0)) / 85.0;
  REQUIRE(std::fmod(t_exact, c.ei.step) > 1e-3);
  const EngagementResult r = run(c);
  CHECK(r.outcome.termination == Termination::kIntercepted);
  CHECK(r.outcome.interceptor == 0);
  CHECK(std::abs(r.outcome.time - t_exact) <= c.engagement.master_step);
}

TEST_CASE("trajectory log layout") {
  ScenarioConfig c = bare_scenario();
  c.eis.push_back(make_ei({500, 300}, {500, 300}, 30.0, 0.0));
  c.engagement.max_time = 0.5;
  const EngagementResult r = run(c);
  CHECK(r.outcome.termination == Termination::kTimeout);
  // one threat and one interceptor row per master step, timeout row included
  CHECK(r.trajectory.size() == 2 * 51);
  for (std::size_t k = 0; k < r.trajectory.size(); ++k) {
    const TrajectorySample& s = r.trajectory[k];
    CHECK(s.agent == (k % 2 == 0 ? kThreat : 0));
    CHECK(s.time == Approx(0.01 * static_cast<double>(k / 2)));
  }
}

TEST_CASE("energy bookkeeping on the master grid") {
  ScenarioConfig c = edsim::test::example_scenario();
  c.engagement.max_time = 3.0;
  const EngagementResult r = run(c);
  const double dt = c.engagement.master_step;
  std::vector<const TrajectorySample*> last(c.eis.size() + 1, nullptr);
  for (const TrajectorySample& s : r.trajectory) {
    const std::size_t slot = static_cast<std::size_t>(s.agent + 1);
    if (const TrajectorySample* prev = last[slot]) {
      const double penalty = s.agent == kThreat ? c.it.turn_penalty : c.ei.turn_penalty;
      CHECK(s.state.energy == energy_step(prev->state.energy, prev->control, penalty, dt).energy);
      CHECK(s.state.energy <= prev->state.energy);
    }
    last[slot] = &s;
  }
}
