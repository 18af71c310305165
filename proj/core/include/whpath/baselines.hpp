#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "whpath/plan.hpp"
#include "whpath/robot.hpp"
#include "whpath/sim.hpp"

namespace whpath {

// Cell occupied at each time index 0, 1, ...; index 0 is the queue head.
// After its last entry a route is parked on its final cell.
struct TimedPath {
  int robot = -1;
  std::vector<Cell> cells;

  Cell at(int t) const { return t < static_cast<int>(cells.size()) ? cells[t] : cells.back(); }
  int arrival() const { return static_cast<int>(cells.size()) - 1; }
  // Route with waits collapsed.
  Plan to_plan(Direction heading) const;
};

// Space-time occupancy of higher-priority robots inside the horizon.
class ReservationTable {
 public:
  explicit ReservationTable(int horizon) : horizon_(horizon) {}

  int horizon() const noexcept { return horizon_; }

  // Reserves every (cell, t) and traversed edge of `path` for t <= horizon,
  // including the parked tail. Entries already owned keep their owner.
  void reserve(const TimedPath& path);
  // Reserves cells[k] at time k only: a committed queue, nothing after it.
  void reserve_prefix(int robot, std::span<const Cell> cells);

  std::optional<int> owner(Cell c, int t) const;
  bool vertex_free(Cell c, int t) const { return !owner(c, t).has_value(); }
  // False when another robot moves to -> from arriving at time t.
  bool edge_free(Cell from, Cell to, int t) const;
  // No reservation of c at any t' in [t, horizon].
  bool free_from(Cell c, int t) const;
  std::size_t size() const noexcept { return vertex_.size(); }

 private:
  std::int64_t key(Cell c, int t) const;
  std::int64_t edge_key(Cell from, Cell to, int t) const;

  int horizon_;
  std::unordered_map<std::int64_t, int> vertex_;
  std::unordered_map<std::int64_t, int> edge_;
};

struct SpaceTimeOptions {
  int horizon = 12;
  std::span<const Cell> frozen;
};

// Shortest space-time route (unit time per move or wait) from the robot's
// queue tail to its goal that avoids `table` within the horizon. The queue
// occupies times 0..n-1. Beyond the horizon the search continues in space
// only. Returns nullopt when no route exists.
std::optional<TimedPath> space_time_astar(const GridGraph& graph, const RobotState& robot,
                                          const ReservationTable& table, const SpaceTimeOptions& opt);

// Two timed paths that meet at a vertex or swap along an edge at some time
// within the horizon.
struct Collision {
  int robot_a = -1;
  int robot_b = -1;
  int t = 0;
  Cell cell;
};
std::optional<Collision> first_collision(const TimedPath& a, const TimedPath& b, int horizon);

// "i has priority over j" relation; kept acyclic.
class PriorityOrdering {
 public:
  explicit PriorityOrdering(int robots = 0) : n_(robots), adj_(static_cast<std::size_t>(robots) * robots, 0) {}

  int size() const noexcept { return n_; }
  bool has(int hi, int lo) const { return adj_[static_cast<std::size_t>(hi) * n_ + lo] != 0; }
  // Transitive closure query.
  bool precedes(int hi, int lo) const;
  // Adds hi > lo unless it would close a cycle; returns false in that case.
  bool add(int hi, int lo);
  // Every robot that transitively precedes r.
  std::vector<int> ancestors(int r) const;
  std::vector<int> descendants(int r) const;
  bool acyclic() const;

 private:
  int n_;
  std::vector<std::uint8_t> adj_;
};

struct BaselineResult {
  std::vector<TimedPath> paths;  // indexed by robot id
  std::vector<Plan> plans;       // indexed by robot id
  int failed_robots = 0;         // robots left with a wait-in-place route
  int high_level_nodes = 0;
  bool exhausted = false;        // PBS gave up (node cap or empty stack)
  std::string diagnostic;
};

// Cooperative A*: random priority order from `rng`, each robot planned in
// space-time around the reservations of the robots before it.
BaselineResult ca_star_plan_all(const GridGraph& graph, const std::vector<RobotState>& states,
                                std::span<const Cell> frozen, const PlannerConfig& cfg, Rng& rng);

// Priority-based search: depth-first over priority orderings, branching on
// the first collision; the low level is the space-time A* above.
BaselineResult pbs_plan_all(const GridGraph& graph, const std::vector<RobotState>& states,
                            std::span<const Cell> frozen, const PlannerConfig& cfg,
                            int node_cap = 10000);

}  // namespace whpath
