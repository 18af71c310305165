// bench: run the make-span experiment, replay or validate a recorded trace.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "whpath/experiment.hpp"
#include "whpath/replay.hpp"

using namespace whpath;

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// "key=value" lines become "--key=value" arguments placed ahead of the real
// ones, so anything given on the command line wins.
std::vector<std::string> config_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config " + path);
  std::vector<std::string> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(path + ":" + std::to_string(n) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value == "true")
      out.push_back("--" + key);
    else if (value != "false")
      out.push_back("--" + key + "=" + value);
  }
  return out;
}

std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> rest;
  std::vector<std::string> from_file;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) {
      auto more = config_args(argv[++i]);
      from_file.insert(from_file.end(), more.begin(), more.end());
    } else if (a.rfind("--config=", 0) == 0) {
      auto more = config_args(a.substr(9));
      from_file.insert(from_file.end(), more.begin(), more.end());
    } else {
      rest.push_back(a);
    }
  }
  if (from_file.empty() || rest.empty()) return rest;
  // Subcommand name first, then file values, then the command line.
  std::vector<std::string> out{rest.front()};
  out.insert(out.end(), from_file.begin(), from_file.end());
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

void parse_grid(const std::string& text, int& w, int& h) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw CLI::ValidationError("--gen", "expected WxH, got " + text);
  w = std::stoi(text.substr(0, x));
  h = std::stoi(text.substr(x + 1));
}

int cmd_run(ExperimentConfig cfg, const std::string& gen, const std::string& algos,
            const std::string& regimes, const std::string& layout, const std::string& granularity,
            const std::string& out_dir, bool wall_clock, bool quiet) {
  if (!gen.empty()) parse_grid(gen, cfg.width, cfg.height);
  cfg.layout = parse_layout(layout);
  cfg.algorithms.clear();
  for (const auto& a : split_list(algos)) {
    if (a == "all") {
      cfg.algorithms = all_algorithms();
      break;
    }
    cfg.algorithms.push_back(parse_algorithm(a));
  }
  cfg.regimes.clear();
  for (const auto& r : split_list(regimes)) {
    if (r == "all") {
      cfg.regimes = standard_regimes();
      break;
    }
    cfg.regimes.push_back(SpeedRegime::parse(r));
  }
  for (auto& r : cfg.regimes)
    r.granularity = granularity == "edge" ? SpeedGranularity::PerEdge : SpeedGranularity::PerTick;

  Progress progress;
  if (!quiet)
    progress = [](const RunRow& r) {
      std::fprintf(stderr, "%-6s %-7s run %2d  makespan %s\n", to_string(r.algo).c_str(), r.regime.c_str(),
                   r.run, r.makespan ? std::to_string(*r.makespan).c_str() : "timeout");
    };
  const ResultTable table = run_experiment(cfg, progress);
  emit_results(table, out_dir, wall_clock);
  std::cout << format_summary_csv(table.summary);
  return 0;
}

int cmd_replay(const std::string& path) {
  const TraceFile trace = load_trace(path);
  const ReplayReport report = replay_trace(trace);
  std::cout << "recorded " << report.recorded_hash << "\nreplayed " << report.replayed_hash << '\n';
  if (report.outcome.makespan) std::cout << "makespan " << *report.outcome.makespan << '\n';
  if (!report.identical()) {
    std::cout << "MISMATCH at record " << report.first_mismatch << '\n';
    return 1;
  }
  std::cout << "identical\n";
  return 0;
}

int cmd_validate(const std::string& path) {
  const TraceFile trace = load_trace(path);
  const auto problems = validate_trace(trace);
  for (const auto& p : problems) std::cout << p << '\n';
  std::cout << trace.records.size() << " records, " << problems.size() << " problems\n";
  return problems.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-robot warehouse path planning benchmark"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  ExperimentConfig cfg;
  std::string gen = "30x30", algos = "all", regimes = "all", layout = "open", granularity = "tick";
  std::string out_dir = "results";
  bool no_wall_clock = false, quiet = false;
  auto* run = app.add_subcommand("run", "Run algorithms x speed regimes x seeds and write CSVs");
  run->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  run->add_option("--map", cfg.map_path, "Map file (\"W H\" header, '.' free, '@' blocked)");
  run->add_option("--gen", gen, "Generate a WxH grid instead of loading a map")->capture_default_str();
  run->add_option("--robots", cfg.robots, "Robot count")->capture_default_str();
  run->add_option("--density", cfg.density, "Random obstacle density for --gen")->capture_default_str();
  run->add_option("--layout", layout, "open or shelves")->capture_default_str();
  run->add_option("--algo", algos, "Comma list of pa,adcc,castar,pbs or all")->capture_default_str();
  run->add_option("--regime", regimes, "Comma list like 1,0.5-1,0-1,0.5,0-0.5 or all")->capture_default_str();
  run->add_option("--speed-granularity", granularity, "tick or edge")->capture_default_str();
  run->add_option("--runs", cfg.runs, "Runs per algorithm and regime")->capture_default_str();
  run->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  run->add_option("--jobs", cfg.jobs, "Parallel runs")->capture_default_str();
  run->add_flag("--per-run-scenarios", cfg.per_run_scenarios, "Fresh scenario per run index");
  run->add_option("--max-ticks", cfg.sim.max_ticks, "Horizon after which a run is a timeout")->capture_default_str();
  run->add_option("--replan-period", cfg.sim.replan_period, "Conflict manager cadence in ticks")->capture_default_str();
  run->add_option("--stall-ticks", cfg.sim.stall_ticks, "Blocked ticks before a detour re-plan")->capture_default_str();
  run->add_option("--pbs-node-cap", cfg.sim.pbs_node_cap, "PBS high-level node cap")->capture_default_str();
  run->add_option("--turn-wait", cfg.sim.planner.turn_wait, "Ticks spent turning (W)")->capture_default_str();
  run->add_option("--horizon", cfg.sim.planner.horizon, "Conflict horizon tau")->capture_default_str();
  run->add_option("--phi", cfg.sim.planner.phi, "Weighted conflict threshold")->capture_default_str();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--traces", cfg.trace_dir, "Write one trace file per run here");
  run->add_flag("--no-wall-clock", no_wall_clock, "Write wall_s as 0 for reproducible CSVs");
  run->add_flag("--quiet", quiet, "No per-run progress on stderr");
  run->add_option("--config", "key=value file mirroring these flags; flags win");

  std::string trace_path;
  auto* replay = app.add_subcommand("replay", "Re-run a recorded trace and compare");
  replay->add_option("--trace", trace_path, "Trace file")->required()->check(CLI::ExistingFile);
  auto* validate = app.add_subcommand("validate", "Check a recorded trace against the queue constraints");
  validate->add_option("--trace", trace_path, "Trace file")->required()->check(CLI::ExistingFile);

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*run)
      return cmd_run(cfg, cfg.map_path.empty() ? gen : std::string(), algos, regimes, layout, granularity,
                     out_dir, !no_wall_clock, quiet);
    if (*replay) return cmd_replay(trace_path);
    if (*validate) return cmd_validate(trace_path);
  } catch (const SafetyError& e) {
    std::cerr << "safety violation: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
