#pragma once

#include <array>
#include <vector>

#include "whpath/grid.hpp"

namespace whpath {

// Tunables shared by the planner, the conflict manager and the scheduler.
// Defaults are the parameter set of the make-span benchmark.
struct PlannerConfig {
  // Base cost per conflict kind: opposite, following, crossing.
  std::array<double, 3> zeta{4.0, 1.0, 2.0};
  double sigma = 4.0;
  double c1 = 1.05;
  double c2 = 1.5;
  double c3 = 2.0;
  int turn_wait = 2;       // W
  int queue_capacity = 4;  // N
  double delta_fol = 1.0;
  double delta_cross = 2.0;
  int horizon = 12;  // tau, in path-index units
  double phi = 3.0;
  // Exponent cap on c2^m.
  int m_cap = 10;

  void validate() const;
};

// A robot's intended route. cells[0] is its queue head; index k doubles as
// the estimated arrival time at cells[k]. headings[k] is the direction the
// robot faces on entering cells[k]; headings[0] is its current heading.
struct Plan {
  int robot = -1;
  std::vector<Cell> cells;
  std::vector<Direction> headings;
  // Objective value of the search that produced the plan (0 when unknown).
  double cost = 0.0;

  int size() const noexcept { return static_cast<int>(cells.size()); }
  bool empty() const noexcept { return cells.empty(); }
  Cell goal() const { return cells.back(); }
  int arrival(int k) const noexcept { return k; }

  // Builds headings from consecutive cells.
  static Plan from_cells(int robot, std::vector<Cell> cells, Direction initial_heading);
  // Drops the first cell (after the robot completes a move).
  void pop_front();
};

// Moves plus turns along the plan, each turn weighted by turn_wait, plus a
// final in-place turn when the last heading differs from goal_dir.
double move_turn_cost(const Plan& plan, Direction goal_dir, int turn_wait);

}  // namespace whpath
