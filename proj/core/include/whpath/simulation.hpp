#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "whpath/baselines.hpp"
#include "whpath/plan.hpp"
#include "whpath/replan.hpp"
#include "whpath/scenario.hpp"
#include "whpath/sim.hpp"
#include "whpath/trace.hpp"

namespace whpath {

enum class Algorithm { PA, ADCC, CAStar, PBS };

std::string to_string(Algorithm algo);
Algorithm parse_algorithm(const std::string& text);
std::vector<Algorithm> all_algorithms();

struct SimOptions {
  PlannerConfig planner;
  SpeedRegime regime;
  int max_ticks = 10000;
  // Conflict-manager cadence (and the drift check for the space-time
  // baselines), in ticks.
  int replan_period = 1;
  // Ticks a robot may sit unable to extend its queue before it re-plans
  // around the cells other robots hold.
  int stall_ticks = 3;
  int pbs_node_cap = 10000;
  bool validate_inline = true;
};

struct SimStats {
  int replan_rounds = 0;
  int soft_failures = 0;
  int round_replans = 0;
  int stall_replans = 0;
  int full_replans = 0;  // space-time baselines
  int baseline_failed_robots = 0;
  int pbs_nodes = 0;
};

struct RunOutcome {
  std::optional<int> makespan;
  bool timeout = false;
  int ticks = 0;
  int violations = 0;
  std::string trace_hash;
  std::string failure;
  SimStats stats;
};

// Snapshots of every robot at t = 0, 1, ..., plus the run seed and make-span.
struct SimTrace {
  std::vector<std::vector<RobotState>> snapshots;
  std::uint64_t seed = 0;
  std::optional<int> makespan;
};

// One run of one algorithm on one scenario. Each tick: plan (per algorithm),
// fill queues, validate the joint action, advance the world.
class Simulation {
 public:
  Simulation(const Scenario& scenario, Algorithm algo, const SimOptions& options, std::uint64_t seed);

  const std::vector<RobotState>& states() const noexcept { return states_; }
  const std::vector<Plan>& plans() const noexcept { return plans_; }
  int tick() const noexcept { return tick_; }
  bool finished() const noexcept;
  const SimStats& stats() const noexcept { return stats_; }
  bool aborted() const noexcept { return !abort_reason_.empty(); }
  const std::string& abort_reason() const noexcept { return abort_reason_; }

  // Advances one timestep. Returns the inline validator's findings; when
  // non-empty the world is left unchanged.
  std::vector<Violation> step();

  RunOutcome run(TraceWriter* writer = nullptr, SimTrace* trace = nullptr);

 private:
  void plan_primary();
  void plan_baseline();
  std::vector<Cell> frozen_cells() const;
  std::vector<Cell> held_by_others(int robot) const;
  bool plan_valid(const RobotState& s, const Plan& p) const;
  std::optional<Plan> plan_one(const RobotState& s, const std::vector<Plan>& active_plans,
                               bool avoid_held, bool strict) const;
  std::vector<Plan> active_plans() const;

  const Scenario* scenario_;
  Algorithm algo_;
  SimOptions opt_;
  Rng rng_;
  int tick_ = 0;
  std::vector<RobotState> states_;
  std::vector<Plan> plans_;
  std::vector<TimedPath> timed_;
  int timed_tick_ = 0;
  std::vector<int> stalled_;
  SimStats stats_;
  std::string abort_reason_;
};

RunOutcome simulate(const Scenario& scenario, Algorithm algo, const SimOptions& options,
                    std::uint64_t seed, TraceWriter* writer = nullptr, SimTrace* trace = nullptr);

}  // namespace whpath
