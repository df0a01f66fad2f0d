#include "edsim/io.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace edsim {

using json = nlohmann::ordered_json;

std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

void write_trajectories_csv(std::ostream& out, const EngagementResult& result) {
  out << "t,agent,x,y,v,theta,e,mode\n";
  for (const TrajectorySample& s : result.trajectory) {
    out << format_number(s.time) << ',' << agent_name(s.agent) << ',' << format_number(s.state.position.x()) << ','
        << format_number(s.state.position.y()) << ',' << format_number(s.state.speed) << ','
        << format_number(s.state.heading) << ',' << format_number(s.state.energy) << ',' << to_string(s.mode)
        << '\n';
  }
}

void write_events_jsonl(std::ostream& out, const EngagementResult& result) {
  for (const EngagementEvent& e : result.events) {
    json j;
    j["t"] = e.time;
    j["kind"] = to_string(e.kind);
    j["agent"] = agent_name(e.agent);
    j["x"] = e.position.x();
    j["y"] = e.position.y();
    out << j.dump() << '\n';
  }
}

void write_summary_json(std::ostream& out, const EngagementResult& result, const ScenarioConfig& cfg) {
  const Outcome& o = result.outcome;
  json summary;
  json outcome;
  outcome["termination"] = to_string(o.termination);
  outcome["time"] = o.time;
  outcome["interceptor"] = o.termination == Termination::kIntercepted ? json(agent_name(o.interceptor)) : json(nullptr);
  outcome["it"] = to_string(o.it);
  outcome["ei"] = to_string(o.ei);
  outcome["hva"] = o.hva_held ? "held" : "lost";
  summary["outcome"] = outcome;

  json energy;
  energy["it"] = result.final_threat.energy;
  for (std::size_t i = 0; i < result.final_eis.size(); ++i)
    energy[agent_name(static_cast<int>(i))] = result.final_eis[i].energy;
  summary["terminal_energy"] = energy;
  summary["it_energy_spent"] = result.it_energy_spent;

  // Every kind appears, zero counts included.
  json counts;
  for (EventKind k : {EventKind::kIzEntry, EventKind::kDzEntry, EventKind::kItDepleted, EventKind::kEiDepleted,
                      EventKind::kPlanningFailure, EventKind::kTimeout}) {
    counts[std::string(to_string(k))] =
        std::count_if(result.events.begin(), result.events.end(), [k](const EngagementEvent& e) { return e.kind == k; });
  }
  summary["event_counts"] = counts;
  summary["events_total"] = result.events.size();
  summary["master_step"] = cfg.engagement.master_step;
  summary["seed"] = cfg.engagement.seed;
  summary["ballistic_depletion"] = cfg.engagement.ballistic_depletion;
  out << summary.dump(2) << '\n';
}

namespace {

struct Bounds {
  double xmin = std::numeric_limits<double>::infinity();
  double ymin = std::numeric_limits<double>::infinity();
  double xmax = -std::numeric_limits<double>::infinity();
  double ymax = -std::numeric_limits<double>::infinity();

  void add(const Vec2& p, double r = 0.0) {
    xmin = std::min(xmin, p.x() - r);
    ymin = std::min(ymin, p.y() - r);
    xmax = std::max(xmax, p.x() + r);
    ymax = std::max(ymax, p.y() + r);
  }
};

std::string circle(const Vec2& c, double r, std::string_view cls, std::string_view style) {
  std::ostringstream os;
  os << "<circle class=\"" << cls << "\" cx=\"" << format_number(c.x()) << "\" cy=\"" << format_number(c.y())
     << "\" r=\"" << format_number(r) << "\" " << style << "/>\n";
  return os.str();
}

}  // namespace

std::string render_svg(const EngagementResult& result, const ScenarioConfig& cfg) {
  const auto& eng = cfg.engagement;
  const double sigma = std::abs(cfg.fields.sigma_sd);

  std::map<int, std::vector<Vec2>> paths;
  Bounds b;
  for (const TrajectorySample& s : result.trajectory) {
    paths[s.agent].push_back(s.state.position);
    b.add(s.state.position);
  }
  b.add(cfg.hva, eng.r_dz);
  for (const Vec2& d : cfg.static_defenses) b.add(d, sigma);
  for (const EIAgent& a : cfg.eis) b.add(a.patrol_center, cfg.fields.r_pac);
  const double pad = 0.05 * std::max({b.xmax - b.xmin, b.ymax - b.ymin, 1.0});
  b.xmin -= pad;
  b.ymin -= pad;
  b.xmax += pad;
  b.ymax += pad;
  const double width = b.xmax - b.xmin;
  const double height = b.ymax - b.ymin;

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\""
     << format_number(std::max(1.0, 800.0 * height / width)) << "\" viewBox=\"" << format_number(b.xmin) << ' '
     << format_number(-b.ymax) << ' ' << format_number(width) << ' ' << format_number(height) << "\">\n";
  os << "<rect class=\"background\" x=\"" << format_number(b.xmin) << "\" y=\"" << format_number(-b.ymax)
     << "\" width=\"" << format_number(width) << "\" height=\"" << format_number(height) << "\" fill=\"white\"/>\n";
  os << "<g transform=\"scale(1,-1)\">\n";

  const std::string thin = "vector-effect=\"non-scaling-stroke\" stroke-width=\"1\"";
  for (const Vec2& d : cfg.static_defenses)
    os << circle(d, sigma, "defense", "fill=\"red\" fill-opacity=\"0.15\" stroke=\"none\"");
  os << circle(cfg.hva, cfg.fields.r_htc, "htc", "fill=\"none\" stroke=\"gray\" stroke-dasharray=\"4 4\" " + thin);
  for (const EIAgent& a : cfg.eis)
    os << circle(a.patrol_center, cfg.fields.r_pac, "patrol",
                 "fill=\"none\" stroke=\"steelblue\" stroke-dasharray=\"2 3\" " + thin);
  os << circle(cfg.hva, eng.r_dz, "dz", "fill=\"orange\" fill-opacity=\"0.3\" stroke=\"darkorange\" " + thin);
  os << circle(cfg.hva, 0.005 * std::max(width, height), "hva", "fill=\"black\"");
  for (const AgentState& s : result.final_eis)
    os << circle(s.position, eng.r_iz, "iz", "fill=\"none\" stroke=\"navy\" " + thin);

  for (const auto& [agent, pts] : paths) {
    os << "<path class=\"agent\" id=\"" << agent_name(agent) << "\" fill=\"none\" stroke=\""
       << (agent == kThreat ? "crimson" : "royalblue") << "\" " << thin << " d=\"";
    for (std::size_t k = 0; k < pts.size(); ++k)
      os << (k == 0 ? "M" : " L") << format_number(pts[k].x()) << ' ' << format_number(pts[k].y());
    os << "\"/>\n";
  }
  for (const EngagementEvent& e : result.events) {
    if (e.kind == EventKind::kPlanningFailure) continue;
    os << circle(e.position, 0.004 * std::max(width, height), "event", "fill=\"black\" fill-opacity=\"0.7\"");
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

std::vector<CsvRow> parse_trajectories_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;
    if (header) {
      if (line != "t,agent,x,y,v,theta,e,mode") throw std::runtime_error("unexpected trajectories.csv header");
      header = false;
      continue;
    }
    std::vector<std::string_view> f;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (f.size() != 8) throw std::runtime_error("malformed trajectories.csv row");
    auto num = [](std::string_view s) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size()) throw std::runtime_error("bad number in trajectories.csv");
      return v;
    };
    rows.push_back({num(f[0]), std::string(f[1]), num(f[2]), num(f[3]), num(f[4]), num(f[5]), num(f[6]),
                    std::string(f[7])});
  }
  return rows;
}

}  // namespace edsim
