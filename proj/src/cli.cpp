#include "edsim/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "edsim/engagement.hpp"
#include "edsim/intercept.hpp"
#include "edsim/io.hpp"
#include "edsim/scenario.hpp"

namespace edsim {

namespace {

constexpr int kConfigError = 2;

struct SimulateArgs {
  std::string scenario;
  std::string out_dir;
  std::optional<double> master_step;
  std::optional<double> max_time;
  bool ballistic = false;
  bool no_plot = false;
};

struct InterceptArgs {
  double it_x = 0, it_y = 0, ei_x = 0, ei_y = 0;
  double attack_heading = 0, attack_speed = 0, intercept_speed = 0;
};

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_report(std::ostream& err, const ValidationReport& report) {
  for (const Violation& v : report) err << v.code << ": " << v.message << '\n';
}

std::optional<ScenarioConfig> load_or_report(const std::string& path, std::ostream& err) {
  const auto text = read_file(path);
  if (!text) {
    err << "error: cannot read scenario file '" << path << "'\n";
    return std::nullopt;
  }
  try {
    return parse_scenario(*text);
  } catch (const ScenarioError& e) {
    err << "error: " << e.what() << '\n';
    return std::nullopt;
  }
}

int simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  auto cfg = load_or_report(args.scenario, err);
  if (!cfg) return kConfigError;
  if (args.master_step) cfg->engagement.master_step = *args.master_step;
  if (args.max_time) cfg->engagement.max_time = *args.max_time;
  if (args.ballistic) cfg->engagement.ballistic_depletion = true;
  if (auto report = validate(*cfg); !report.empty()) {
    err << "error: invalid scenario\n";
    print_report(err, report);
    return kConfigError;
  }

  const EngagementResult result = run(*cfg);

  namespace fs = std::filesystem;
  const fs::path dir(args.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    err << "error: cannot create output directory '" << args.out_dir << "': " << ec.message() << '\n';
    return kConfigError;
  }
  auto write = [&](const char* name, auto&& body) {
    std::ofstream f(dir / name, std::ios::binary);
    body(f);
    return static_cast<bool>(f);
  };
  bool ok = write("trajectories.csv", [&](std::ostream& f) { write_trajectories_csv(f, result); });
  ok = ok && write("events.jsonl", [&](std::ostream& f) { write_events_jsonl(f, result); });
  ok = ok && write("summary.json", [&](std::ostream& f) { write_summary_json(f, result, *cfg); });
  if (!args.no_plot) ok = ok && write("plot.svg", [&](std::ostream& f) { f << render_svg(result, *cfg); });
  if (!ok) {
    err << "error: failed writing outputs to '" << args.out_dir << "'\n";
    return kConfigError;
  }

  const Outcome& o = result.outcome;
  out << "outcome=" << to_string(o.termination) << " t=" << format_number(o.time) << " it=" << to_string(o.it)
      << " ei=" << to_string(o.ei) << " hva=" << (o.hva_held ? "held" : "lost")
      << " it_energy_spent=" << format_number(result.it_energy_spent) << '\n';
  return 0;
}

int check_intercept(const InterceptArgs& a, std::ostream& out, std::ostream& err) {
  try {
    const InterceptResult r = solve_intercept({a.it_x, a.it_y}, {a.ei_x, a.ei_y}, a.attack_heading, a.attack_speed,
                                              a.intercept_speed);
    if (r.feasible()) {
      const InterceptSolution& s = *r.solution;
      out << "feasible gamma=" << format_number(r.gamma) << " heading=" << format_number(s.heading)
          << " t_itc=" << format_number(s.time_to_intercept) << " closing_speed=" << format_number(s.closing_speed)
          << '\n';
    } else {
      out << "infeasible " << to_string(r.reason) << " gamma=" << format_number(r.gamma) << '\n';
    }
    return 0;
  } catch (const GeometryError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

int validate_cmd(const std::string& path, std::ostream& out, std::ostream& err) {
  auto cfg = load_or_report(path, err);
  if (!cfg) return kConfigError;
  const ValidationReport report = validate(*cfg);
  if (report.empty()) {
    out << "valid\n";
    return 0;
  }
  print_report(err, report);
  return kConfigError;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy-depletion engagement simulator", "edsim"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run an engagement and write logs");
  simulate_cmd->add_option("--scenario", sim.scenario, "Scenario JSON file")->required();
  simulate_cmd->add_option("--out", sim.out_dir, "Output directory")->required();
  simulate_cmd->add_option("--master-step", sim.master_step, "Override the master integration step [s]");
  simulate_cmd->add_option("--max-time", sim.max_time, "Override the simulation time limit [s]");
  simulate_cmd->add_flag("--toggle-ballistic-depletion", sim.ballistic,
                         "Let a depleted threat coast instead of failing immediately");
  simulate_cmd->add_flag("--no-plot", sim.no_plot, "Skip plot.svg");

  InterceptArgs ic;
  auto* intercept_cmd = app.add_subcommand("check-intercept", "Constant-velocity intercept feasibility");
  intercept_cmd->add_option("--it-x", ic.it_x)->required();
  intercept_cmd->add_option("--it-y", ic.it_y)->required();
  intercept_cmd->add_option("--ei-x", ic.ei_x)->required();
  intercept_cmd->add_option("--ei-y", ic.ei_y)->required();
  intercept_cmd->add_option("--attack-heading", ic.attack_heading, "Threat heading [rad]")->required();
  intercept_cmd->add_option("--attack-speed", ic.attack_speed, "Threat speed [m/s]")->required();
  intercept_cmd->add_option("--intercept-speed", ic.intercept_speed, "Interceptor speed [m/s]")->required();

  std::string validate_path;
  auto* validate_sub = app.add_subcommand("validate", "Check a scenario file against every invariant");
  validate_sub->add_option("--scenario", validate_path, "Scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  if (*simulate_cmd) return simulate(sim, out, err);
  if (*intercept_cmd) return check_intercept(ic, out, err);
  return validate_cmd(validate_path, out, err);
}

}  // namespace edsim
