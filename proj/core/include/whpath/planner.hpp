#pragma once

#include <array>
#include <span>
#include <vector>

#include "whpath/conflict.hpp"
#include "whpath/plan.hpp"
#include "whpath/robot.hpp"

namespace whpath {

// Per-kind distance lists d_j (other robots' path indices at the node),
// indexed by ConflictKind.
using ConflictDistances = std::array<std::vector<double>, 3>;

// t_traf at a node reached at path index s:
//   sum_i sum_j zeta_i exp(-(s-d_j)^2 / (2 sigma^2)) c1^(-(s+d_j)/2) c2^min(m_i, m_cap)
//   + c3 * turned
double traffic_cost(double s, const ConflictDistances& conflicts, bool turned,
                    const PlannerConfig& cfg);
double traffic_cost(double s, std::span<const double> opposite, std::span<const double> following,
                    std::span<const double> crossing, bool turned, const PlannerConfig& cfg);

// Fewest heading changes for a route that starts facing `from`, covers
// displacement (dx, dy) and ends facing `goal_dir` (the final in-place turn
// counts).
int turn_lower_bound(Direction from, int dx, int dy, Direction goal_dir);

// Manhattan distance plus turn_wait times turn_lower_bound. Admissible and
// consistent for the move/turn cost of plan_path.
double heuristic(Cell node, Direction node_dir, Cell goal, Direction goal_dir, int turn_wait);

// Extra cost charged for entering a node during the search.
class NodeCost {
 public:
  virtual ~NodeCost() = default;
  // `s` is the path index of `cell` on the candidate route, `prev` the cell
  // it is entered from and `turned` whether the move changes heading.
  virtual double enter(Cell cell, int s, Direction heading, Cell prev, bool turned) const = 0;
};

class ZeroCost final : public NodeCost {
 public:
  double enter(Cell, int, Direction, Cell, bool) const override { return 0.0; }
};

// Traffic cost against other robots' plans truncated to the horizon.
// Built once for a set of plans; `exclude` names the robot being planned.
class TrafficField final : public NodeCost {
 public:
  TrafficField(const GridGraph& graph, const std::vector<Plan>& plans, const PlannerConfig& cfg,
               int exclude = -1);

  void set_exclude(int robot) noexcept { exclude_ = robot; }
  // Re-indexes one robot's plan after it changed.
  void update(const Plan& plan);

  double enter(Cell cell, int s, Direction heading, Cell prev, bool turned) const override;

  // Conflict distances at `cell` for an arrival at index s.
  ConflictDistances distances_at(Cell cell, int s, Direction heading, Cell prev) const;

  // Moving prev -> cell to arrive at index s would meet an indexed plan at
  // the same index or swap with it along that edge.
  bool opposite_at(Cell cell, int s, Direction heading, Cell prev) const;

 private:
  struct Entry {
    int robot;
    Visit visit;
  };
  void rebuild();

  const GridGraph* graph_;
  PlannerConfig cfg_;
  int exclude_;
  std::vector<Plan> plans_;
  std::vector<int> offsets_;
  std::vector<Entry> entries_;
};

// Node-visit congestion cost c1 * n / n_max, with n counted over the given
// plans (the alternate-cost comparison planner).
// Makes every opposite-conflict transition against `index` impassable and
// charges `base` for the rest.
class OppositeGuard final : public NodeCost {
 public:
  OppositeGuard(const TrafficField& index, const NodeCost& base) : index_(&index), base_(&base) {}
  double enter(Cell cell, int s, Direction heading, Cell prev, bool turned) const override;

 private:
  const TrafficField* index_;
  const NodeCost* base_;
};

class VisitCountCost final : public NodeCost {
 public:
  VisitCountCost(const GridGraph& graph, const std::vector<Plan>& plans, double c1, int exclude = -1);
  double enter(Cell cell, int s, Direction heading, Cell prev, bool turned) const override;
  int visits(Cell cell) const;
  int max_visits() const noexcept { return n_max_; }

 private:
  const GridGraph* graph_;
  double c1_;
  std::vector<int> count_;
  int n_max_ = 0;
};

// f_cost = c1 * n / n_max; 0 when n_max is 0.
double adcc_cost(int n, int n_max, double c1);

struct PlanStats {
  int expansions = 0;
  bool retried_through_queue = false;
};

// A* over (cell, heading) states from the robot's queue tail to its goal.
// The committed queue is kept as the plan prefix. Path cost is one per move
// plus turn_wait per heading change (including the final in-place turn) plus
// the node cost summed along the route. Frozen cells are impassable. Throws
// UnreachableError when no route exists.
Plan plan_path(const GridGraph& graph, const RobotState& robot, const NodeCost& cost,
               std::span<const Cell> frozen, const PlannerConfig& cfg, PlanStats* stats = nullptr);

// Convenience overload using the traffic cost against `others`.
Plan plan_path(const GridGraph& graph, const RobotState& robot, const std::vector<Plan>& others,
               std::span<const Cell> frozen, const PlannerConfig& cfg);

struct PathConflicts {
  std::array<int, 3> m{0, 0, 0};
  // Candidate path index of each conflict cell, per kind.
  ConflictDistances d;
};

PathConflicts count_path_conflicts(const Plan& candidate, const std::vector<Plan>& others,
                                   int horizon);

}  // namespace whpath
