#include "edsim/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "edsim/dynamics.hpp"

namespace edsim {

namespace {

double box_violation(double x, const Interval& box) { return std::max({0.0, box.lo - x, x - box.hi}); }

// Bounds the penalties act on, tightened by the configured margin.
struct PenaltyBounds {
  Interval speed;
  double ball_radius = 0.0;
  double energy_floor = 0.0;
};

PenaltyBounds penalty_bounds(const OcpProblem& p, const SolverOptions& o) {
  const double m = o.constraint_margin;
  const double dv = m * (p.speed.hi - p.speed.lo);
  PenaltyBounds b;
  b.speed = {p.speed.lo + dv, p.speed.hi - dv};
  if (p.terminal_ball) b.ball_radius = p.terminal_ball->radius * (1.0 - o.terminal_ball_margin);
  b.energy_floor = m * std::max(0.0, p.initial.energy);
  return b;
}

// Single pass over the horizon. When `out` is non-null the rollout and the
// recovered slacks (against the untightened bounds) are stored there.
double evaluate(const OcpProblem& p, std::span<const Control> u, const PenaltyBounds& pen,
                const SolverOptions& o, OcpSolution* out) {
  const double w = p.slack_weight;
  AgentState s = p.initial;
  double cost = 0.0;
  if (out) {
    out->states.assign(1, s);
    out->stage_slack.clear();
  }
  for (int j = 0; j < p.horizon; ++j) {
    const Control& uj = u[static_cast<std::size_t>(j)];
    const double sig = box_violation(s.speed, pen.speed);
    cost += (p.stage_cost(j, s, uj) + w * sig * sig) * p.step;
    if (out) out->stage_slack.push_back(box_violation(s.speed, p.speed));
    const double e = s.energy - p.step * effort_rate(uj, p.turn_penalty);
    s = unicycle_step_free(s, uj, p.step);
    s.energy = e;
    if (out) out->states.push_back(s);
  }
  if (p.terminal_cost) cost += p.terminal_cost(s);
  const double sig_v = box_violation(s.speed, pen.speed);
  cost += w * sig_v * sig_v;
  double dist = 0.0;
  if (p.terminal_ball) {
    dist = (s.position - p.terminal_ball->center).norm();
    const double sig_b = std::max(0.0, dist - pen.ball_radius);
    cost += w * sig_b * sig_b;
  }
  if (p.require_terminal_energy) {
    const double sig_e = std::max(0.0, pen.energy_floor - s.energy);
    cost += o.energy_penalty_factor * w * sig_e * sig_e;
  }
  if (out) {
    out->terminal_speed_slack = box_violation(s.speed, p.speed);
    out->terminal_ball_slack = p.terminal_ball ? std::max(0.0, dist - p.terminal_ball->radius) : 0.0;
    out->terminal_energy = s.energy;
    out->objective = cost;
  }
  return cost;
}

void check_problem(const OcpProblem& p) {
  if (p.horizon < 1) throw std::invalid_argument("OCP horizon must be >= 1");
  if (!(p.step > 0.0)) throw std::invalid_argument("OCP step must be > 0");
  if (p.controls.accel.empty() || p.controls.turn_rate.empty() || p.speed.empty())
    throw std::invalid_argument("OCP boxes must be nonempty");
  if (!p.stage_cost) throw std::invalid_argument("OCP needs a stage cost");
  if (p.terminal_ball && !(p.terminal_ball->radius > 0.0))
    throw std::invalid_argument("terminal ball radius must be > 0");
}

// Gradient with the components that point out of an active bound removed.
double projected_gradient_norm(const Eigen::VectorXd& x, const Eigen::VectorXd& g, const ControlBox& box) {
  double sq = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Interval& b = i % 2 == 0 ? box.accel : box.turn_rate;
    const bool blocked = (x[i] <= b.lo && g[i] > 0.0) || (x[i] >= b.hi && g[i] < 0.0);
    if (!blocked) sq += g[i] * g[i];
  }
  return std::sqrt(sq);
}

void project(Eigen::VectorXd& x, const ControlBox& box) {
  for (Eigen::Index i = 0; i < x.size(); i += 2) {
    x[i] = box.accel.clamp(x[i]);
    x[i + 1] = box.turn_rate.clamp(x[i + 1]);
  }
}

}  // namespace

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kStalled: return "stalled";
    case SolveStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

double OcpSolution::max_slack() const {
  double m = std::max(terminal_speed_slack, terminal_ball_slack);
  for (double s : stage_slack) m = std::max(m, s);
  return m;
}

std::vector<AgentState> rollout(const AgentState& initial, std::span<const Control> controls, double step,
                                double turn_penalty) {
  std::vector<AgentState> states;
  states.reserve(controls.size() + 1);
  states.push_back(initial);
  for (const Control& u : controls) {
    const AgentState& s = states.back();
    AgentState next = unicycle_step_free(s, u, step);
    next.energy = s.energy - step * effort_rate(u, turn_penalty);
    states.push_back(next);
  }
  return states;
}

Eigen::VectorXd finite_diff_gradient(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                                     double h_fd) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h_fd;
    const double fp = f(probe);
    probe[i] = x[i] - h_fd;
    const double fm = f(probe);
    probe[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h_fd);
  }
  return g;
}

Eigen::VectorXd pack(std::span<const Control> controls) {
  Eigen::VectorXd x(2 * static_cast<Eigen::Index>(controls.size()));
  for (std::size_t j = 0; j < controls.size(); ++j) {
    x[2 * static_cast<Eigen::Index>(j)] = controls[j].accel;
    x[2 * static_cast<Eigen::Index>(j) + 1] = controls[j].turn_rate;
  }
  return x;
}

std::vector<Control> unpack(const Eigen::VectorXd& x) {
  std::vector<Control> u(static_cast<std::size_t>(x.size() / 2));
  for (std::size_t j = 0; j < u.size(); ++j)
    u[j] = {x[2 * static_cast<Eigen::Index>(j)], x[2 * static_cast<Eigen::Index>(j) + 1]};
  return u;
}

std::vector<Control> shift_controls(std::span<const Control> controls) {
  if (controls.empty()) return {};
  std::vector<Control> out(controls.begin() + 1, controls.end());
  out.push_back(controls.back());
  return out;
}

double evaluate_objective(const OcpProblem& problem, std::span<const Control> controls, const SolverOptions& options) {
  check_problem(problem);
  if (controls.size() != static_cast<std::size_t>(problem.horizon))
    throw std::invalid_argument("control sequence length does not match horizon");
  return evaluate(problem, controls, penalty_bounds(problem, options), options, nullptr);
}

OcpSolution solve(const OcpProblem& problem, std::optional<std::span<const Control>> warm_start,
                  const SolverOptions& options) {
  check_problem(problem);
  const auto h = static_cast<std::size_t>(problem.horizon);
  if (warm_start && warm_start->size() != h) throw std::invalid_argument("warm start length does not match horizon");

  const PenaltyBounds pen = penalty_bounds(problem, options);
  std::vector<Control> scratch(h);
  auto objective = [&](const Eigen::VectorXd& x) {
    for (std::size_t j = 0; j < h; ++j)
      scratch[j] = {x[2 * static_cast<Eigen::Index>(j)], x[2 * static_cast<Eigen::Index>(j) + 1]};
    return evaluate(problem, scratch, pen, options, nullptr);
  };
  auto gradient = [&](const Eigen::VectorXd& x) {
    const double h_fd = options.fd_rel_step * (1.0 + x.lpNorm<Eigen::Infinity>());
    return finite_diff_gradient(objective, x, h_fd);
  };

  Eigen::VectorXd x = warm_start ? pack(*warm_start) : Eigen::VectorXd::Zero(2 * problem.horizon);
  project(x, problem.controls);
  double f = objective(x);
  const double f0 = f;
  Eigen::VectorXd g = gradient(x);

  // Steps are taken in box-normalized coordinates.
  auto width = [](const Interval& b) { return b.hi > b.lo ? b.hi - b.lo : 1.0; };
  Eigen::VectorXd scale2(x.size());
  for (Eigen::Index i = 0; i < x.size(); i += 2) {
    scale2[i] = std::pow(width(problem.controls.accel), 2);
    scale2[i + 1] = std::pow(width(problem.controls.turn_rate), 2);
  }
  double alpha = 1.0 / std::max(scale2.cwiseSqrt().cwiseProduct(g).lpNorm<Eigen::Infinity>(), 1e-300);

  std::deque<double> history{f};
  Eigen::VectorXd best = x;
  double f_best = f;
  SolveStatus status = SolveStatus::kIterationLimit;
  int iterations = 0;
  Eigen::VectorXd trial(x.size());
  for (;;) {
    if (projected_gradient_norm(x, g, problem.controls) <= options.gradient_tol * (1.0 + std::abs(f))) {
      status = SolveStatus::kConverged;
      break;
    }
    if (iterations >= options.max_iterations) break;

    const double f_ref = *std::max_element(history.begin(), history.end());
    bool accepted = false;
    double f_trial = f;
    for (int k = 0; k < options.max_backtracks; ++k) {
      trial = x - alpha * scale2.cwiseProduct(g);
      project(trial, problem.controls);
      f_trial = objective(trial);
      if (f_trial <= f_ref + options.armijo_c * g.dot(trial - x)) {
        accepted = true;
        break;
      }
      alpha *= options.shrink;
    }
    if (!accepted) {
      status = SolveStatus::kStalled;
      break;
    }

    const Eigen::VectorXd s = trial - x;
    const Eigen::VectorXd g_new = gradient(trial);
    const double sy = s.dot(g_new - g);
    alpha = sy > 0.0 ? s.cwiseQuotient(scale2).dot(s) / sy : 2.0 * alpha;
    alpha = std::clamp(alpha, 1e-20, 1e20);
    x = trial;
    f = f_trial;
    g = g_new;
    ++iterations;
    history.push_back(f);
    if (static_cast<int>(history.size()) > std::max(1, options.nonmonotone_window)) history.pop_front();
    if (f < f_best) {
      f_best = f;
      best = x;
    }
  }

  OcpSolution sol;
  sol.controls = unpack(f <= f_best ? x : best);
  evaluate(problem, sol.controls, pen, options, &sol);
  sol.initial_objective = f0;
  sol.iterations = iterations;
  sol.status = status;
  sol.feasible = sol.max_slack() <= options.slack_tol &&
                 (!problem.require_terminal_energy || sol.terminal_energy >= 0.0);
  return sol;
}

}  // namespace edsim
