#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "whpath/grid.hpp"
#include "whpath/robot.hpp"

namespace whpath {

using Rng = std::mt19937_64;

// Uniform double in [0, 1) built from the top 53 bits of one draw, so results
// do not depend on the standard library's distribution implementation.
double uniform01(Rng& rng);
// Uniform integer in [0, n).
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

enum class SpeedMode { Fixed, Uniform };
// Per-tick redraws every robot's speed every timestep; per-edge holds one draw
// for the whole of a one-cell movement.
enum class SpeedGranularity { PerTick, PerEdge };

struct SpeedRegime {
  double v_min = 1.0;
  double v_max = 1.0;
  SpeedMode mode = SpeedMode::Fixed;
  SpeedGranularity granularity = SpeedGranularity::PerTick;

  static SpeedRegime fixed(double v);
  static SpeedRegime uniform(double lo, double hi);

  // "1", "0.5" for fixed regimes, "0.5-1" for uniform ranges.
  std::string name() const;
  static SpeedRegime parse(const std::string& text);
};

// The five regimes of the make-span benchmark.
std::vector<SpeedRegime> standard_regimes();

double sample_speed(const SpeedRegime& regime, Rng& rng);

// v_i = (f - 1) / (N - 1) * v.
double compute_speed(int f, int queue_capacity, double v);

// Number of queue elements up to and including the first cell at which the
// movement direction changes. A straight run yields the count of real cells;
// a single cell yields 1.
int first_turn_count(std::span<const Cell> cells);
int first_turn_count(const Action& action);

enum class StepEvent { PoppedHead, TurnStarted, WaitDecrement, Idle };

struct StepOutcome {
  RobotState next;
  std::vector<StepEvent> events;
};

// One timestep of one robot under system speed v. Throws ConstraintViolation
// when the action breaks (2), (4), (5) or (6) for this robot.
StepOutcome step_robot(const RobotState& state, const Action& action, double v, int turn_wait);

struct WorldStep {
  std::vector<RobotState> states;
  std::vector<std::vector<StepEvent>> events;
  std::vector<double> speeds;  // system speed drawn for each robot
};

// Advances every robot one timestep, drawing a speed per robot from `regime`.
// Robots already at their goal are frozen. Throws CollisionError when two
// actions share a cell.
WorldStep step_world(const std::vector<RobotState>& states, const std::vector<Action>& actions,
                     const SpeedRegime& regime, Rng& rng, int turn_wait);

struct Violation {
  int equation = 0;
  std::vector<int> robots;
  std::vector<Cell> cells;
  std::string message;
};

// Reports every breach of constraints (2)-(6) by the joint action. An empty
// result means the joint action is admissible.
std::vector<Violation> validate_constraints(const GridGraph& graph,
                                            const std::vector<RobotState>& states,
                                            const std::vector<Action>& actions, int queue_capacity);

}  // namespace whpath
