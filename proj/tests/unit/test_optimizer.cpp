#include <doctest.h>

#include <random>
#include <vector>

#include "edsim/dynamics.hpp"
#include "edsim/optimizer.hpp"
#include "support.hpp"

using namespace edsim;
using doctest::Approx;

namespace {

OcpProblem base_problem(int horizon) {
  OcpProblem p;
  p.initial.speed = 10.0;
  p.initial.energy = 1e6;
  p.horizon = horizon;
  p.step = 0.1;
  p.controls = {{-5.0, 5.0}, {-1.0, 1.0}};
  p.speed = {1.0, 100.0};
  p.turn_penalty = 2.0;
  p.slack_weight = 100.0;
  p.stage_cost = [](int, const AgentState&, const Control& u) { return 1e-3 * (u.accel * u.accel + u.turn_rate * u.turn_rate); };
  return p;
}

// One-step problem whose terminal cost pulls speed and heading to targets.
OcpProblem one_step_problem(double v_target, double th_target) {
  OcpProblem p = base_problem(1);
  p.stage_cost = [](int, const AgentState&, const Control&) { return 0.0; };
  p.terminal_cost = [=](const AgentState& s) {
    return (s.speed - v_target) * (s.speed - v_target) + (s.heading - th_target) * (s.heading - th_target);
  };
  return p;
}

}  // namespace

TEST_CASE("rollout straight line") {
  AgentState s;
  s.speed = 1.0;
  s.energy = 5.0;
  const std::vector<Control> u(2);
  const auto states = rollout(s, u, 1.0, 1.0);
  REQUIRE(states.size() == 3);
  CHECK(states[1].position.x() == Approx(1.0));
  CHECK(states[2].position.x() == Approx(2.0));
  CHECK(states[2].energy == 5.0);
}

TEST_CASE("rollout energy matches independent accumulation") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  AgentState s;
  s.speed = 5.0;
  s.energy = 3.0;
  std::vector<Control> u(25);
  for (auto& c : u) c = {d(rng), d(rng)};
  const double step = 0.2;
  const double lambda = 3.0;
  const auto states = rollout(s, u, step, lambda);
  REQUIRE(states.size() == u.size() + 1);
  double spent = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    spent += step * (u[j].accel * u[j].accel + lambda * u[j].turn_rate * u[j].turn_rate);
    CHECK(states[j + 1].energy == Approx(3.0 - spent).epsilon(1e-12));
  }
  CHECK(states.back().energy < 0.0);
}

TEST_CASE("finite difference gradient") {
  auto sq = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
  const Eigen::VectorXd g = finite_diff_gradient(sq, Eigen::Vector2d(1.0, 2.0), 1e-6);
  CHECK(g[0] == Approx(2.0).epsilon(1e-6));
  CHECK(g[1] == Approx(4.0).epsilon(1e-6));

  auto flat = [](const Eigen::VectorXd&) { return 7.0; };
  CHECK(finite_diff_gradient(flat, Eigen::Vector3d(1, 2, 3), 1e-6).norm() == 0.0);
}

TEST_CASE("gradient of a rollout cost agrees with a secant") {
  OcpProblem p = base_problem(3);
  p.stage_cost = [](int, const AgentState& s, const Control& u) {
    return (s.position - Vec2(3.0, 1.0)).squaredNorm() + u.accel * u.accel;
  };
  const std::vector<Control> u{{0.3, 0.2}, {-0.1, 0.4}, {0.5, -0.3}};
  auto f = [&](const Eigen::VectorXd& x) { return evaluate_objective(p, unpack(x)); };
  const Eigen::VectorXd x = pack(u);
  const Eigen::VectorXd g = finite_diff_gradient(f, x, 1e-6 * (1.0 + x.lpNorm<Eigen::Infinity>()));
  Eigen::VectorXd dir(6);
  dir << 0.3, -0.7, 0.2, 0.5, -0.1, 0.4;
  const double eps = 1e-4;
  const double secant = (f(x + eps * dir) - f(x - eps * dir)) / (2 * eps);
  CHECK(g.dot(dir) == Approx(secant).epsilon(1e-4));
}

TEST_CASE("one-step problem recovers the closed-form control") {
  const OcpSolution s = solve(one_step_problem(10.3, 0.05));
  CHECK(s.status == SolveStatus::kConverged);
  // v1 = v0 + a * step and heading1 = heading0 + w * step hit the targets
  CHECK(std::abs(s.first().accel - 3.0) <= 1e-4);
  CHECK(std::abs(s.first().turn_rate - 0.5) <= 1e-4);
}

TEST_CASE("warm start at the optimum is a fixed point") {
  const OcpProblem p = one_step_problem(10.3, 0.05);
  const OcpSolution first = solve(p);
  const OcpSolution again = solve(p, std::span<const Control>(first.controls));
  CHECK(again.iterations <= 2);
  CHECK(std::abs(again.objective - first.objective) <= 1e-10);
}

TEST_CASE("unreachable terminal ball is reported infeasible") {
  OcpProblem p = base_problem(10);
  p.terminal_ball = TerminalBall{{500.0, 0.0}, 1.0};
  const OcpSolution s = solve(p);
  CHECK_FALSE(s.feasible);
  // Reachability: at most h * step * v_max, plus what acceleration can add
  // above the initial speed is still bounded by v_max.
  const double reach = p.horizon * p.step * p.speed.hi;
  CHECK(s.terminal_ball_slack >= 500.0 - reach - 1.0);
  CHECK(s.terminal_ball_slack > 0.0);
}

TEST_CASE("reachable terminal ball is feasible") {
  OcpProblem p = base_problem(10);
  p.terminal_ball = TerminalBall{{10.0, 1.0}, 1.0};
  const OcpSolution s = solve(p);
  CHECK(s.feasible);
  CHECK((s.states.back().position - Vec2(10.0, 1.0)).norm() <= 1.0);
}

TEST_CASE("recovered slack equals the violation") {
  OcpProblem p = base_problem(8);
  p.speed = {1.0, 10.5};
  p.stage_cost = [](int, const AgentState& s, const Control&) { return -s.position.x(); };
  const OcpSolution s = solve(p);
  REQUIRE(s.states.size() == 9);
  for (std::size_t j = 0; j < s.stage_slack.size(); ++j) {
    const double v = s.states[j].speed;
    CHECK(std::abs(s.stage_slack[j] - std::max({0.0, p.speed.lo - v, v - p.speed.hi})) <= 1e-10);
  }
  const double vh = s.states.back().speed;
  CHECK(std::abs(s.terminal_speed_slack - std::max({0.0, p.speed.lo - vh, vh - p.speed.hi})) <= 1e-10);
}

TEST_CASE("terminal energy is respected") {
  OcpProblem p = base_problem(10);
  p.initial.energy = 2.0;
  p.stage_cost = [](int, const AgentState& s, const Control&) { return -s.position.x(); };
  const OcpSolution s = solve(p);
  CHECK(s.terminal_energy >= 0.0);
  CHECK(s.feasible);
}

TEST_CASE("descent, determinism and shift admissibility") {
  OcpProblem p = base_problem(12);
  p.terminal_cost = [](const AgentState& s) { return (s.position - Vec2(8.0, 4.0)).squaredNorm(); };
  std::vector<Control> warm(12, Control{0.5, 0.1});
  const double f_warm = evaluate_objective(p, warm);
  const OcpSolution a = solve(p, std::span<const Control>(warm));
  const OcpSolution b = solve(p, std::span<const Control>(warm));
  CHECK(a.objective <= f_warm + 1e-12);
  CHECK(a.controls == b.controls);
  CHECK(a.objective == b.objective);

  const std::vector<Control> shifted = shift_controls(a.controls);
  REQUIRE(shifted.size() == a.controls.size());
  CHECK(shifted.front() == a.controls[1]);
  CHECK(shifted.back() == a.controls.back());
  for (const Control& u : shifted) CHECK(p.controls.project(u) == u);
  CHECK_NOTHROW(solve(p, std::span<const Control>(shifted)));
}

TEST_CASE("malformed problems are rejected") {
  OcpProblem p = base_problem(0);
  CHECK_THROWS_AS(solve(p), std::invalid_argument);
  p = base_problem(3);
  p.step = 0.0;
  CHECK_THROWS_AS(solve(p), std::invalid_argument);
  p = base_problem(3);
  p.stage_cost = nullptr;
  CHECK_THROWS_AS(solve(p), std::invalid_argument);
  p = base_problem(3);
  const std::vector<Control> wrong(2);
  CHECK_THROWS_AS(solve(p, std::span<const Control>(wrong)), std::invalid_argument);
}
