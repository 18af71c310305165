#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "whpath/errors.hpp"
#include "whpath/scenario.hpp"
#include "whpath/simulation.hpp"

namespace whpath {

struct ExperimentConfig {
  std::string map_path;  // empty: generate width x height
  int width = 30;
  int height = 30;
  int robots = 80;
  double density = 0.0;
  Layout layout = Layout::Open;
  std::vector<Algorithm> algorithms = all_algorithms();
  std::vector<SpeedRegime> regimes = standard_regimes();
  int runs = 15;
  std::uint64_t seed = 1;
  int jobs = 1;
  // One scenario shared by all runs (false) or a fresh scenario per run index.
  bool per_run_scenarios = false;
  SimOptions sim;
  // When set, each run's trace is written there as <algo>_<regime>_<run>.trace.
  std::string trace_dir;

  void validate() const;
};

struct RunRow {
  Algorithm algo = Algorithm::PA;
  std::string regime;
  int run = 0;
  std::uint64_t seed = 0;
  std::optional<int> makespan;
  bool timeout = false;
  double wall_s = 0.0;
  std::string trace_hash;
  int violations = 0;
  SimStats stats;
};

struct SummaryRow {
  Algorithm algo = Algorithm::PA;
  std::string regime;
  int runs = 0;
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
  double fail_rate = 0.0;
};

struct ResultTable {
  std::vector<RunRow> runs;
  std::vector<SummaryRow> summary;
};

// A run ended with a constraint violation. The experiment stops and, when an
// output directory is known, the offending trace is dumped there.
class SafetyError : public Error {
 public:
  using Error::Error;
};

// Counter-based seed split: the same (master, stream, a, b) always yields the
// same seed, independent of any other streams drawn.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stream, std::uint64_t a,
                          std::uint64_t b = 0);

// Scenario used for run index `run`.
Scenario experiment_scenario(const ExperimentConfig& cfg, int run);
// Seed of the speed/tie-break stream of one run. Independent of the algorithm
// so every planner sees the same draws.
std::uint64_t run_seed(const ExperimentConfig& cfg, const SpeedRegime& regime, int run);

// Linear-interpolation quantile of sorted data (q in [0, 1]).
double quantile(std::vector<double> values, double q);

std::vector<SummaryRow> summarize(const std::vector<RunRow>& runs,
                                  const std::vector<Algorithm>& algorithms,
                                  const std::vector<std::string>& regimes);

using Progress = std::function<void(const RunRow&)>;

// Every algorithm x regime x run; rows come back sorted by (algorithm order,
// regime order, run). Throws SafetyError on any constraint violation.
ResultTable run_experiment(const ExperimentConfig& cfg, const Progress& progress = {});

// Writes runs.csv, summary.csv and hashes.csv under `dir`. With
// wall_clock false the wall_s column is written as 0 so the file depends on
// the configuration only.
void emit_results(const ResultTable& table, const std::string& dir, bool wall_clock = true);

std::string format_runs_csv(const std::vector<RunRow>& runs, bool wall_clock = true);
std::string format_summary_csv(const std::vector<SummaryRow>& rows);
std::string format_hashes_csv(const std::vector<RunRow>& runs);
std::vector<RunRow> parse_runs_csv(const std::string& text);
std::vector<SummaryRow> parse_summary_csv(const std::string& text);

}  // namespace whpath
