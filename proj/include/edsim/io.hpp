#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "edsim/engagement.hpp"
#include "edsim/scenario.hpp"

namespace edsim {

/// Shortest decimal representation that parses back to the same double.
std::string format_number(double x);

/// `t,agent,x,y,v,theta,e,mode`, one row per agent per master step.
void write_trajectories_csv(std::ostream& out, const EngagementResult& result);

/// One `{"t","kind","agent","x","y"}` object per line.
void write_events_jsonl(std::ostream& out, const EngagementResult& result);

/// Outcome, terminal energies and event counts as a single JSON object.
void write_summary_json(std::ostream& out, const EngagementResult& result, const ScenarioConfig& cfg);

/// Static plot: agent paths, zones, patrol circles, defenses at one sigma,
/// event markers. Drawn in world coordinates through a y-flipping transform.
std::string render_svg(const EngagementResult& result, const ScenarioConfig& cfg);

struct CsvRow {
  double t = 0.0;
  std::string agent;
  double x = 0.0, y = 0.0, v = 0.0, theta = 0.0, e = 0.0;
  std::string mode;
};

/// Reads back a trajectories.csv document.
std::vector<CsvRow> parse_trajectories_csv(std::string_view text);

}  // namespace edsim
