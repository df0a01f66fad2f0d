#include <sstream>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "edsim/dynamics.hpp"
#include "edsim/engagement.hpp"
#include "edsim/intercept.hpp"
#include "edsim/io.hpp"
#include "edsim/scenario.hpp"

namespace py = pybind11;
using namespace edsim;

namespace {

AgentState to_state(const py::dict& d) {
  AgentState s;
  s.position = {d["x"].cast<double>(), d["y"].cast<double>()};
  s.speed = d["v"].cast<double>();
  s.heading = d["theta"].cast<double>();
  s.energy = d.contains("e") ? d["e"].cast<double>() : 0.0;
  return s;
}

py::dict from_state(const AgentState& s) {
  py::dict d;
  d["x"] = s.position.x();
  d["y"] = s.position.y();
  d["v"] = s.speed;
  d["theta"] = s.heading;
  d["e"] = s.energy;
  return d;
}

struct Run {
  ScenarioConfig cfg;
  EngagementResult result;
};

Run simulate(const std::string& scenario_json, std::optional<double> master_step, std::optional<double> max_time,
             bool ballistic_depletion) {
  ScenarioConfig cfg = parse_scenario(scenario_json);
  if (master_step) cfg.engagement.master_step = *master_step;
  if (max_time) cfg.engagement.max_time = *max_time;
  if (ballistic_depletion) cfg.engagement.ballistic_depletion = true;
  if (auto report = validate(cfg); !report.empty()) throw ScenarioInvalid(std::move(report));
  Run r{cfg, {}};
  {
    py::gil_scoped_release release;
    r.result = run(r.cfg);
  }
  return r;
}

py::dict outcome_dict(const EngagementResult& r) {
  const Outcome& o = r.outcome;
  py::dict d;
  d["termination"] = std::string(to_string(o.termination));
  d["time"] = o.time;
  d["interceptor"] = o.interceptor == kThreat ? py::object(py::none()) : py::object(py::int_(o.interceptor));
  d["it"] = std::string(to_string(o.it));
  d["ei"] = std::string(to_string(o.ei));
  d["hva_held"] = o.hva_held;
  d["it_energy_spent"] = r.it_energy_spent;
  return d;
}

py::list events_list(const EngagementResult& r) {
  py::list out;
  for (const EngagementEvent& e : r.events) {
    py::dict d;
    d["t"] = e.time;
    d["kind"] = std::string(to_string(e.kind));
    d["agent"] = agent_name(e.agent);
    d["x"] = e.position.x();
    d["y"] = e.position.y();
    d["terminal"] = e.terminal;
    out.append(d);
  }
  return out;
}

// Columns t, agent, x, y, v, theta, e; agent -1 is the threat.
py::array_t<double> trajectory_array(const EngagementResult& r) {
  py::array_t<double> a({static_cast<py::ssize_t>(r.trajectory.size()), py::ssize_t{7}});
  auto m = a.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < m.shape(0); ++i) {
    const TrajectorySample& s = r.trajectory[static_cast<std::size_t>(i)];
    m(i, 0) = s.time;
    m(i, 1) = s.agent;
    m(i, 2) = s.state.position.x();
    m(i, 3) = s.state.position.y();
    m(i, 4) = s.state.speed;
    m(i, 5) = s.state.heading;
    m(i, 6) = s.state.energy;
  }
  return a;
}

template <typename F>
std::string render(F&& f) {
  std::ostringstream out;
  f(out);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Energy-depletion engagement simulator";

  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
  static py::exception<ScenarioInvalid> invalid(m, "ScenarioInvalid", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ScenarioInvalid& e) {
      std::string msg = e.what();
      for (const Violation& v : e.report()) msg += "\n" + v.code + ": " + v.message;
      py::set_error(invalid, msg.c_str());
    }
  });

  m.def(
      "validate",
      [](const std::string& text) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const Violation& v : validate(parse_scenario(text))) out.emplace_back(v.code, v.message);
        return out;
      },
      py::arg("scenario_json"), "Violations as (code, message) pairs; empty when valid.");

  m.def(
      "normalize_scenario", [](const std::string& text) { return write_scenario(load_scenario(text)); },
      py::arg("scenario_json"), "Parses, validates and re-serializes a scenario.");

  py::class_<Run>(m, "Engagement")
      .def_property_readonly("outcome", [](const Run& r) { return outcome_dict(r.result); })
      .def_property_readonly("events", [](const Run& r) { return events_list(r.result); })
      .def_property_readonly("trajectory", [](const Run& r) { return trajectory_array(r.result); })
      .def_property_readonly("modes",
                             [](const Run& r) {
                               std::vector<std::string> out;
                               out.reserve(r.result.trajectory.size());
                               for (const auto& s : r.result.trajectory) out.emplace_back(to_string(s.mode));
                               return out;
                             })
      .def_property_readonly("final_threat", [](const Run& r) { return from_state(r.result.final_threat); })
      .def_property_readonly("final_interceptors",
                             [](const Run& r) {
                               py::list out;
                               for (const auto& s : r.result.final_eis) out.append(from_state(s));
                               return out;
                             })
      .def("trajectories_csv", [](const Run& r) { return render([&](std::ostream& o) { write_trajectories_csv(o, r.result); }); })
      .def("events_jsonl", [](const Run& r) { return render([&](std::ostream& o) { write_events_jsonl(o, r.result); }); })
      .def("summary_json", [](const Run& r) { return render([&](std::ostream& o) { write_summary_json(o, r.result, r.cfg); }); })
      .def("svg", [](const Run& r) { return render_svg(r.result, r.cfg); });

  m.def("simulate", &simulate, py::arg("scenario_json"), py::arg("master_step") = py::none(),
        py::arg("max_time") = py::none(), py::arg("ballistic_depletion") = false);

  m.def(
      "solve_intercept",
      [](std::pair<double, double> threat, std::pair<double, double> interceptor, double attack_heading,
         double attack_speed, double intercept_speed) {
        const InterceptResult r = solve_intercept({threat.first, threat.second}, {interceptor.first, interceptor.second},
                                                  attack_heading, attack_speed, intercept_speed);
        py::dict d;
        d["gamma"] = r.gamma;
        d["feasible"] = r.feasible();
        if (r.feasible()) {
          d["heading"] = r.solution->heading;
          d["time_to_intercept"] = r.solution->time_to_intercept;
          d["closing_speed"] = r.solution->closing_speed;
        } else {
          d["reason"] = std::string(to_string(r.reason));
        }
        return d;
      },
      py::arg("threat"), py::arg("interceptor"), py::arg("attack_heading"), py::arg("attack_speed"),
      py::arg("intercept_speed"));

  m.def(
      "terminal_heading",
      [](std::pair<double, double> threat, std::pair<double, double> hva,
         const std::vector<std::pair<double, double>>& proximal, double psi) {
        std::vector<Vec2> pts;
        for (const auto& [x, y] : proximal) pts.emplace_back(x, y);
        return terminal_heading({threat.first, threat.second}, {hva.first, hva.second}, pts, psi);
      },
      py::arg("threat"), py::arg("hva"), py::arg("proximal_interceptors"), py::arg("psi"));

  m.def(
      "unicycle_step",
      [](const py::dict& state, std::pair<double, double> control, double step, std::pair<double, double> speed_box) {
        return from_state(unicycle_step(to_state(state), {control.first, control.second}, step,
                                        {speed_box.first, speed_box.second}));
      },
      py::arg("state"), py::arg("control"), py::arg("step"), py::arg("speed_box"));

  m.def(
      "energy_step",
      [](double energy, std::pair<double, double> control, double turn_penalty, double step) {
        const EnergyUpdate u = energy_step(energy, {control.first, control.second}, turn_penalty, step);
        return std::make_pair(u.energy, u.depleted);
      },
      py::arg("energy"), py::arg("control"), py::arg("turn_penalty"), py::arg("step"));
}
