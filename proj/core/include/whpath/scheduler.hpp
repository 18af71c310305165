#pragma once

#include <vector>

#include "whpath/plan.hpp"
#include "whpath/robot.hpp"
#include "whpath/sim.hpp"

namespace whpath {

// One robot's view of a contested cell: the queue it would hold after
// appending, the position of the contested cell in it, its goal and its
// remaining distance to the goal.
struct ArbitrationSide {
  std::vector<Cell> cells;
  int index = 0;
  Cell goal;
  int remaining = 0;
};

enum class Winner { I, J };

struct Arbitration {
  Winner winner = Winner::I;
  // Line of the scheduling listing that returned (3, 5, 9, 11, 15, 17 or 19).
  int line = 0;
};

// Decides which of two robots appends a cell both request. Cell comparisons
// that reach outside a queue are false. Equal remaining distances on the
// fallback line are settled by a coin flip from `rng`.
Arbitration arbitrate_explained(const ArbitrationSide& i, const ArbitrationSide& j, Rng& rng);
Winner arbitrate(const ArbitrationSide& i, const ArbitrationSide& j, Rng& rng);

// Cells from the queue head to the goal along the plan.
int remaining_distance(const Plan& plan);

struct FillStats {
  int contested = 0;
  int arbitrations = 0;
};

// Extends every robot's queue along its plan toward `queue_capacity` cells.
// Cells already held by any robot stop the extension; cells requested by
// several robots go to the arbitration winner and losers stop before them.
// `plans` is indexed by robot id and must start with each robot's queue
// (DesyncError otherwise). Returns one action per robot in state order.
std::vector<Action> fill_queues(const std::vector<RobotState>& states, const std::vector<Plan>& plans,
                                const PlannerConfig& cfg, Rng& rng, FillStats* stats = nullptr);

}  // namespace whpath
