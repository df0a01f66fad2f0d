#include "edsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace edsim {

using json = nlohmann::ordered_json;

namespace {

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

const json& require(const json& obj, std::string_view key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ScenarioError(join(path, key), "missing required field");
  return *it;
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ScenarioError(path, "expected an object");
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ScenarioError(join(path, key), "unknown field");
  }
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ScenarioError(path, "type mismatch: expected a number");
  return j.get<double>();
}

double number(const json& obj, std::string_view key, const std::string& path) {
  return as_number(require(obj, key, path), join(path, key));
}

int integer(const json& obj, std::string_view key, const std::string& path) {
  const json& j = require(obj, key, path);
  if (!j.is_number_integer()) throw ScenarioError(join(path, key), "type mismatch: expected an integer");
  return j.get<int>();
}

Vec2 vec2(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ScenarioError(path, "type mismatch: expected [x, y]");
  return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]")};
}

Interval interval(const json& obj, std::string_view key, const std::string& path) {
  const json& j = require(obj, key, path);
  const std::string p = join(path, key);
  if (!j.is_array() || j.size() != 2) throw ScenarioError(p, "type mismatch: expected [min, max]");
  return {as_number(j[0], p + "[0]"), as_number(j[1], p + "[1]")};
}

AgentState initial_state(const json& j, const std::string& path, double energy) {
  expect_object(j, path);
  reject_unknown(j, path, {"position", "speed", "heading"});
  AgentState s;
  s.position = vec2(require(j, "position", path), join(path, "position"));
  s.speed = number(j, "speed", path);
  s.heading = number(j, "heading", path);
  s.energy = energy;
  return s;
}

json to_json(const Vec2& v) { return json::array({v.x(), v.y()}); }
json to_json(const Interval& i) { return json::array({i.lo, i.hi}); }
json to_json(const AgentState& s) {
  return json{{"position", to_json(s.position)}, {"speed", s.speed}, {"heading", s.heading}};
}

ITParams parse_threat(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path,
                 {"speed", "accel", "turn_rate", "turn_penalty", "energy", "weights", "step", "horizon",
                  "attack_speed", "initial"});
  ITParams it;
  it.speed = interval(j, "speed", path);
  it.accel = interval(j, "accel", path);
  it.turn_rate = interval(j, "turn_rate", path);
  it.turn_penalty = number(j, "turn_penalty", path);
  it.energy0 = number(j, "energy", path);
  const std::string wp = join(path, "weights");
  const json& w = require(j, "weights", path);
  expect_object(w, wp);
  reject_unknown(w, wp, {"energy", "risk", "terminal", "slack"});
  it.w_energy = number(w, "energy", wp);
  it.w_risk = number(w, "risk", wp);
  it.w_terminal = number(w, "terminal", wp);
  it.slack_weight = number(w, "slack", wp);
  it.step = number(j, "step", path);
  it.horizon = integer(j, "horizon", path);
  it.attack_speed = number(j, "attack_speed", path);
  it.initial = initial_state(require(j, "initial", path), join(path, "initial"), it.energy0);
  return it;
}

void parse_interceptors(const json& j, const std::string& path, ScenarioConfig& cfg) {
  expect_object(j, path);
  reject_unknown(j, path,
                 {"speed", "accel", "turn_rate", "turn_penalty", "energy", "weights", "step", "horizon",
                  "intercept_speed", "team"});
  EIParams& ei = cfg.ei;
  ei.speed = interval(j, "speed", path);
  ei.accel = interval(j, "accel", path);
  ei.turn_rate = interval(j, "turn_rate", path);
  ei.turn_penalty = number(j, "turn_penalty", path);
  ei.energy0 = number(j, "energy", path);
  const std::string wp = join(path, "weights");
  const json& w = require(j, "weights", path);
  expect_object(w, wp);
  reject_unknown(w, wp, {"energy", "barrier", "proximity", "slack"});
  ei.w_energy = number(w, "energy", wp);
  ei.w_barrier = number(w, "barrier", wp);
  ei.w_proximity = number(w, "proximity", wp);
  ei.slack_weight = number(w, "slack", wp);
  ei.step = number(j, "step", path);
  ei.horizon = integer(j, "horizon", path);
  ei.intercept_speed = number(j, "intercept_speed", path);

  const std::string tp = join(path, "team");
  const json& team = require(j, "team", path);
  if (!team.is_array()) throw ScenarioError(tp, "type mismatch: expected an array");
  for (std::size_t i = 0; i < team.size(); ++i) {
    const std::string ap = tp + "[" + std::to_string(i) + "]";
    const json& a = team[i];
    expect_object(a, ap);
    reject_unknown(a, ap, {"patrol_center", "initial"});
    EIAgent agent;
    agent.patrol_center = vec2(require(a, "patrol_center", ap), join(ap, "patrol_center"));
    agent.initial = initial_state(require(a, "initial", ap), join(ap, "initial"), ei.energy0);
    cfg.eis.push_back(agent);
  }
}

FieldParams parse_fields(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"w_sd", "sigma_sd", "w_ei", "sigma_ei", "w_pac", "r_pac", "w_htc", "r_htc", "psi"});
  FieldParams f;
  f.w_sd = number(j, "w_sd", path);
  f.sigma_sd = number(j, "sigma_sd", path);
  f.w_ei = number(j, "w_ei", path);
  f.sigma_ei = number(j, "sigma_ei", path);
  f.w_pac = number(j, "w_pac", path);
  f.r_pac = number(j, "r_pac", path);
  f.w_htc = number(j, "w_htc", path);
  f.r_htc = number(j, "r_htc", path);
  f.psi = number(j, "psi", path);
  return f;
}

EngagementParams parse_engagement(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"r_dz", "r_iz", "r_pz", "master_step", "max_time", "seed", "ballistic_depletion"});
  EngagementParams e;
  e.r_dz = number(j, "r_dz", path);
  e.r_iz = number(j, "r_iz", path);
  e.r_pz = number(j, "r_pz", path);
  e.master_step = number(j, "master_step", path);
  e.max_time = j.contains("max_time") ? number(j, "max_time", path) : kDefaultMaxTime;
  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_unsigned()) throw ScenarioError(join(path, "seed"), "type mismatch: expected an unsigned integer");
    e.seed = s.get<std::uint64_t>();
  }
  if (j.contains("ballistic_depletion")) {
    const json& b = j.at("ballistic_depletion");
    if (!b.is_boolean()) throw ScenarioError(join(path, "ballistic_depletion"), "type mismatch: expected a boolean");
    e.ballistic_depletion = b.get<bool>();
  }
  return e;
}

// Collects violations with stable codes.
class Checker {
 public:
  void require(bool ok, std::string code, std::string message) {
    if (!ok) report_.push_back({std::move(code), std::move(message)});
  }
  ValidationReport take() { return std::move(report_); }

 private:
  ValidationReport report_;
};

bool finite(const Vec2& v) { return std::isfinite(v.x()) && std::isfinite(v.y()); }
bool finite_state(const AgentState& s) {
  return finite(s.position) && std::isfinite(s.speed) && std::isfinite(s.heading);
}

std::string describe(const ValidationReport& report) {
  std::ostringstream os;
  os << "invalid scenario:";
  for (const auto& v : report) os << "\n  " << v.code << ": " << v.message;
  return os.str();
}

}  // namespace

ScenarioInvalid::ScenarioInvalid(ValidationReport report)
    : std::runtime_error(describe(report)), report_(std::move(report)) {}

long grid_ratio(double step, double master_step) {
  if (!(step > 0.0) || !(master_step > 0.0)) return -1;
  const double q = step / master_step;
  const double n = std::round(q);
  if (n < 1.0 || std::abs(q - n) > 1e-9 * std::max(1.0, q)) return -1;
  return static_cast<long>(n);
}

ValidationReport validate(const ScenarioConfig& cfg) {
  Checker c;
  c.require(finite(cfg.hva), "hva_position", "HVA position must be finite");
  for (std::size_t l = 0; l < cfg.static_defenses.size(); ++l)
    c.require(finite(cfg.static_defenses[l]), "static_defense",
              "static defense " + std::to_string(l) + " position must be finite");

  const ITParams& it = cfg.it;
  c.require(it.speed.lo > 0.0, "it_forward_motion", "IT forward motion violated: v_min must be > 0");
  c.require(!it.speed.empty(), "it_speed_box", "IT speed box requires v_min <= v_max");
  c.require(!it.accel.empty(), "it_accel_box", "IT acceleration box requires a_min <= a_max");
  c.require(!it.turn_rate.empty(), "it_turn_box", "IT turn-rate box requires w_min <= w_max");
  c.require(it.turn_penalty > 0.0, "it_turn_penalty", "IT turn penalty lambda must be > 0");
  c.require(it.energy0 >= 0.0 && std::isfinite(it.energy0), "it_energy", "IT initial energy must be >= 0");
  c.require(it.w_energy > 0.0, "it_w_energy", "IT weight m1 must be > 0");
  c.require(it.w_risk > 0.0, "it_w_risk", "IT weight m2 must be > 0");
  c.require(it.w_terminal > 0.0, "it_w_terminal", "IT weight m3 must be > 0");
  c.require(it.slack_weight > 0.0, "it_slack_weight", "IT slack weight nu must be > 0");
  c.require(it.step > 0.0, "it_step", "IT planner step must be > 0");
  c.require(it.horizon >= 1, "it_horizon", "IT horizon must be >= 1");
  c.require(it.attack_speed > 0.0, "it_attack_speed", "IT nominal attack speed must be > 0");
  c.require(finite_state(it.initial), "it_initial_state", "IT initial state must be finite");
  if (it.speed.lo > 0.0 && !it.speed.empty())
    c.require(it.speed.contains(it.initial.speed), "it_initial_speed", "IT initial speed outside [v_min, v_max]");

  const EIParams& ei = cfg.ei;
  c.require(ei.speed.lo > 0.0, "ei_forward_motion", "EI forward motion violated: v_min must be > 0");
  c.require(!ei.speed.empty(), "ei_speed_box", "EI speed box requires v_min <= v_max");
  c.require(!ei.accel.empty(), "ei_accel_box", "EI acceleration box requires a_min <= a_max");
  c.require(!ei.turn_rate.empty(), "ei_turn_box", "EI turn-rate box requires w_min <= w_max");
  c.require(ei.turn_penalty > 0.0, "ei_turn_penalty", "EI turn penalty kappa must be > 0");
  c.require(ei.energy0 >= 0.0 && std::isfinite(ei.energy0), "ei_energy", "EI initial energy must be >= 0");
  c.require(ei.w_energy > 0.0, "ei_w_energy", "EI weight mu1 must be > 0");
  c.require(ei.w_barrier > 0.0, "ei_w_barrier", "EI weight mu2 must be > 0");
  c.require(ei.w_proximity > 0.0, "ei_w_proximity", "EI weight mu3 must be > 0");
  c.require(ei.slack_weight > 0.0, "ei_slack_weight", "EI slack weight eta must be > 0");
  c.require(ei.step > 0.0, "ei_step", "EI planner step must be > 0");
  c.require(ei.horizon >= 1, "ei_horizon", "EI horizon must be >= 1");
  c.require(ei.intercept_speed > 0.0, "ei_intercept_speed", "EI terminal intercept speed must be > 0");
  const bool ei_box_ok = ei.speed.lo > 0.0 && !ei.speed.empty();
  for (std::size_t i = 0; i < cfg.eis.size(); ++i) {
    const EIAgent& a = cfg.eis[i];
    const std::string tag = "EI " + std::to_string(i);
    c.require(finite_state(a.initial), "ei_initial_state", tag + " initial state must be finite");
    c.require(finite(a.patrol_center), "ei_patrol_center", tag + " patrol center must be finite");
    if (ei_box_ok)
      c.require(ei.speed.contains(a.initial.speed), "ei_initial_speed", tag + " initial speed outside [v_min, v_max]");
  }

  const FieldParams& f = cfg.fields;
  c.require(f.sigma_sd != 0.0 && std::isfinite(f.sigma_sd), "sigma_sd_zero", "sigma_sd must be nonzero");
  c.require(f.sigma_ei != 0.0 && std::isfinite(f.sigma_ei), "sigma_ei_zero", "sigma_ei must be nonzero");
  c.require(f.w_sd > 0.0, "w_sd", "static defense weight must be > 0");
  c.require(f.w_ei > 0.0, "w_ei", "EI threat weight must be > 0");
  c.require(f.w_pac > 0.0, "w_pac", "PAC weight must be > 0");
  c.require(f.r_pac > 0.0, "r_pac", "patrol radius must be > 0");
  c.require(f.w_htc > 0.0, "w_htc", "HTC weight must be > 0");
  c.require(f.r_htc > 0.0, "r_htc", "HVA tether radius must be > 0");
  c.require(f.psi >= 0.0 && f.psi <= 1.0, "psi_range", "psi must lie in [0, 1]");

  const EngagementParams& e = cfg.engagement;
  c.require(e.r_dz > 0.0, "r_dz", "dive zone radius must be > 0");
  c.require(e.r_iz > 0.0, "r_iz", "intercept zone radius must be > 0");
  c.require(e.r_pz > 0.0, "r_pz", "proximity zone radius must be > 0");
  if (e.r_iz > 0.0 && e.r_pz > 0.0)
    c.require(e.r_iz < e.r_pz, "iz_exceeds_pz", "intercept radius must be smaller than proximity radius");
  c.require(e.master_step > 0.0, "master_step", "master step must be > 0");
  c.require(e.max_time > 0.0, "max_time", "max simulation time must be > 0");
  if (e.master_step > 0.0 && it.step > 0.0 && ei.step > 0.0)
    c.require(grid_ratio(it.step, e.master_step) > 0 && grid_ratio(ei.step, e.master_step) > 0, "grid_alignment",
              "master step must divide both planner steps exactly");
  return c.take();
}

ScenarioConfig parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& err) {
    throw ScenarioError("", err.what());
  }
  expect_object(doc, "<root>");
  reject_unknown(doc, "", {"hva", "static_defenses", "threat", "interceptors", "fields", "engagement"});

  ScenarioConfig cfg;
  cfg.hva = vec2(require(doc, "hva", ""), "hva");
  if (doc.contains("static_defenses")) {
    const json& sd = doc.at("static_defenses");
    if (!sd.is_array()) throw ScenarioError("static_defenses", "type mismatch: expected an array");
    for (std::size_t l = 0; l < sd.size(); ++l)
      cfg.static_defenses.push_back(vec2(sd[l], "static_defenses[" + std::to_string(l) + "]"));
  }
  cfg.it = parse_threat(require(doc, "threat", ""), "threat");
  parse_interceptors(require(doc, "interceptors", ""), "interceptors", cfg);
  cfg.fields = parse_fields(require(doc, "fields", ""), "fields");
  cfg.engagement = parse_engagement(require(doc, "engagement", ""), "engagement");
  return cfg;
}

ScenarioConfig load_scenario(std::string_view text) {
  ScenarioConfig cfg = parse_scenario(text);
  if (auto report = validate(cfg); !report.empty()) throw ScenarioInvalid(std::move(report));
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("", "cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

std::string write_scenario(const ScenarioConfig& cfg) {
  json doc;
  doc["hva"] = to_json(cfg.hva);
  json sd = json::array();
  for (const auto& p : cfg.static_defenses) sd.push_back(to_json(p));
  doc["static_defenses"] = sd;

  const ITParams& it = cfg.it;
  doc["threat"] = json{{"speed", to_json(it.speed)},
                       {"accel", to_json(it.accel)},
                       {"turn_rate", to_json(it.turn_rate)},
                       {"turn_penalty", it.turn_penalty},
                       {"energy", it.energy0},
                       {"weights",
                        {{"energy", it.w_energy},
                         {"risk", it.w_risk},
                         {"terminal", it.w_terminal},
                         {"slack", it.slack_weight}}},
                       {"step", it.step},
                       {"horizon", it.horizon},
                       {"attack_speed", it.attack_speed},
                       {"initial", to_json(it.initial)}};

  const EIParams& ei = cfg.ei;
  json team = json::array();
  for (const auto& a : cfg.eis)
    team.push_back(json{{"patrol_center", to_json(a.patrol_center)}, {"initial", to_json(a.initial)}});
  doc["interceptors"] = json{{"speed", to_json(ei.speed)},
                             {"accel", to_json(ei.accel)},
                             {"turn_rate", to_json(ei.turn_rate)},
                             {"turn_penalty", ei.turn_penalty},
                             {"energy", ei.energy0},
                             {"weights",
                              {{"energy", ei.w_energy},
                               {"barrier", ei.w_barrier},
                               {"proximity", ei.w_proximity},
                               {"slack", ei.slack_weight}}},
                             {"step", ei.step},
                             {"horizon", ei.horizon},
                             {"intercept_speed", ei.intercept_speed},
                             {"team", team}};

  const FieldParams& f = cfg.fields;
  doc["fields"] = json{{"w_sd", f.w_sd},   {"sigma_sd", f.sigma_sd}, {"w_ei", f.w_ei},
                       {"sigma_ei", f.sigma_ei}, {"w_pac", f.w_pac},   {"r_pac", f.r_pac},
                       {"w_htc", f.w_htc}, {"r_htc", f.r_htc},       {"psi", f.psi}};

  const EngagementParams& e = cfg.engagement;
  doc["engagement"] = json{{"r_dz", e.r_dz},
                           {"r_iz", e.r_iz},
                           {"r_pz", e.r_pz},
                           {"master_step", e.master_step},
                           {"max_time", e.max_time},
                           {"seed", e.seed},
                           {"ballistic_depletion", e.ballistic_depletion}};
  return doc.dump(2) + "\n";
}

}  // namespace edsim
