#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "whpath/grid.hpp"
#include "whpath/robot.hpp"

namespace whpath {

struct RobotSpec {
  int id = 0;
  Pose start;
  Pose goal;
};

// A map plus one start/goal pose per robot. Starts are pairwise distinct,
// goals are pairwise distinct and every pose is on a free cell.
struct Scenario {
  GridGraph map{1, 1};
  std::vector<RobotSpec> robots;
  std::uint64_t seed = 0;

  // Throws DomainError describing the first broken invariant.
  void validate() const;
  std::vector<RobotState> initial_states(int queue_capacity) const;
};

enum class Layout { Open, Shelves };

Layout parse_layout(const std::string& text);

// Blocks 2x4 shelves in a regular lattice separated by single-cell aisles,
// leaving a one-cell border free.
void add_shelves(GridGraph& map);

// Seeded placement of robot_count distinct starts and goals on `map`. Each
// robot's goal is reachable from its start even with every other robot's
// goal cell blocked. Retries up to `retries` draws, then throws
// GenerationError.
Scenario place_robots(const GridGraph& map, int robot_count, std::uint64_t seed, int retries = 200);

// Map of width x height with `obstacle_density` of the free cells blocked
// at random (Open) or a shelf lattice (Shelves), then place_robots.
Scenario generate_scenario(int width, int height, int robot_count, double obstacle_density,
                           std::uint64_t seed, Layout layout = Layout::Open);

}  // namespace whpath
