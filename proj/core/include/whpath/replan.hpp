#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "whpath/conflict.hpp"
#include "whpath/planner.hpp"

namespace whpath {

// Produces a fresh plan for `robot` given everyone's current plans (its own
// included), or nullopt when it cannot. With `strict` set the new plan may not
// form an opposite conflict with any other plan unless no such route exists.
using Replanner = std::function<std::optional<Plan>(
    const RobotState& robot, const std::vector<Plan>& plans, bool strict)>;

enum class CostModel { Traffic, VisitCount };

// Plans `robot` against everyone else's `plans` under `model`. With `strict`
// it first searches with opposite-conflict transitions blocked and falls back
// to the plain search. Throws UnreachableError when no route exists.
Plan plan_against(const GridGraph& graph, const RobotState& robot, const std::vector<Plan>& plans,
                  std::span<const Cell> frozen, const PlannerConfig& cfg, CostModel model,
                  bool strict);

// Planner-backed replanner using the traffic cost (Traffic) or the node
// visit-count cost (VisitCount).
Replanner make_replanner(const GridGraph& graph, std::span<const Cell> frozen,
                         const PlannerConfig& cfg, CostModel model);

struct RoundResult {
  std::vector<Plan> plans;
  ConflictReport report;  // for the returned plans
  int opposite_replans = 0;
  int gamma_replans = 0;
  bool soft_failure = false;
  std::string diagnostic;
};

// Detects conflicts within the horizon, re-plans the robot with the most
// opposite conflicts until none remain, then re-plans the robot with the
// largest weighted score while the system score exceeds phi. All re-plans
// are strict. A robot whose re-plan does not lower its own count is passed
// over until some other plan changes. Re-plans are
// capped at 4m (opposite) and 2m (score) for m active robots; hitting a cap
// returns the current plans with soft_failure set.
//
// `states` is indexed by robot id; robots marked done are excluded.
RoundResult replan_round(std::vector<Plan> plans, const std::vector<RobotState>& states,
                         const PlannerConfig& cfg, const Replanner& replan);

// Appends "tick,kind,robot_i,robot_j,x,y,idx_i,idx_j" rows.
void write_conflict_log(std::ostream& out, int tick, const ConflictReport& report);

}  // namespace whpath
