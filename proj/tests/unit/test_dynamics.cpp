#include <doctest.h>

#include "edsim/dynamics.hpp"
#include "support.hpp"

using namespace edsim;
using doctest::Approx;
using edsim::test::kPi;

TEST_CASE("straight line step") {
  AgentState s;
  s.speed = 1.0;
  const AgentState n = unicycle_step(s, {}, 0.1, {0.5, 2.0});
  CHECK(n.position.x() == Approx(0.1));
  CHECK(n.position.y() == Approx(0.0));
  CHECK(n.speed == 1.0);
  CHECK(n.heading == 0.0);
}

TEST_CASE("north heading step") {
  AgentState s;
  s.speed = 1.0;
  s.heading = kPi / 2;
  const AgentState n = unicycle_step(s, {}, 0.1, {0.5, 2.0});
  CHECK(std::abs(n.position.x()) < 1e-15);
  CHECK(n.position.y() == Approx(0.1));
  CHECK(n.heading == kPi / 2);
}

TEST_CASE("speed is clamped after the step") {
  AgentState s;
  s.speed = 1.0;
  const AgentState n = unicycle_step(s, {1.0, 1.0}, 0.5, {0.1, 1.2});
  CHECK(n.speed == Approx(1.2));
  CHECK(n.heading == Approx(0.5));
  CHECK(n.position.x() == Approx(0.5));
  CHECK(n.position.y() == Approx(0.0));

  const AgentState free = unicycle_step_free(s, {1.0, 1.0}, 0.5);
  CHECK(free.speed == Approx(1.5));
}

TEST_CASE("energy accounting") {
  CHECK(energy_step(1.0, {}, 2.0, 0.1).energy == 1.0);
  CHECK(energy_step(1.0, {0.3, 0.1}, 2.0, 0.1).energy == Approx(0.989).epsilon(1e-14));

  const EnergyUpdate u = energy_step(0.0005, {1.0, 0.0}, 2.0, 0.1);
  CHECK(u.energy == 0.0);
  CHECK(u.depleted);
  CHECK_FALSE(energy_step(1.0, {0.3, 0.1}, 2.0, 0.1).depleted);
}

TEST_CASE("effort rate") { CHECK(effort_rate({2.0, 0.5}, 4.0) == Approx(5.0)); }

TEST_CASE("angle wrapping") {
  CHECK(wrap_angle(kPi) == Approx(kPi));
  CHECK(wrap_angle(-kPi) == Approx(kPi));
  CHECK(wrap_angle(3 * kPi / 2) == Approx(-kPi / 2));
  CHECK(wrap_angle(0.25) == 0.25);
}
