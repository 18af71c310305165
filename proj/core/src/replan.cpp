#include "whpath/replan.hpp"

#include <algorithm>
#include <ostream>

#include "whpath/errors.hpp"

namespace whpath {

Plan plan_against(const GridGraph& graph, const RobotState& robot, const std::vector<Plan>& plans,
                  std::span<const Cell> frozen, const PlannerConfig& cfg, CostModel model,
                  bool strict) {
  std::optional<VisitCountCost> visits;
  std::optional<TrafficField> traffic;
  const NodeCost* base = nullptr;
  if (model == CostModel::VisitCount) {
    visits.emplace(graph, plans, cfg.c1, robot.id);
    base = &*visits;
  } else {
    traffic.emplace(graph, plans, cfg, robot.id);
    base = &*traffic;
  }
  if (strict) {
    std::optional<TrafficField> own_index;
    const TrafficField* index = traffic ? &*traffic : &own_index.emplace(graph, plans, cfg, robot.id);
    try {
      return plan_path(graph, robot, OppositeGuard(*index, *base), frozen, cfg);
    } catch (const UnreachableError&) {
    }
  }
  return plan_path(graph, robot, *base, frozen, cfg);
}

Replanner make_replanner(const GridGraph& graph, std::span<const Cell> frozen,
                         const PlannerConfig& cfg, CostModel model) {
  std::vector<Cell> blocked(frozen.begin(), frozen.end());
  return [&graph, blocked = std::move(blocked), cfg, model](
             const RobotState& robot, const std::vector<Plan>& plans,
             bool strict) -> std::optional<Plan> {
    try {
      return plan_against(graph, robot, plans, blocked, cfg, model, strict);
    } catch (const UnreachableError&) {
      return std::nullopt;
    }
  };
}

namespace {

std::vector<int> excluded_robots(const std::vector<RobotState>& states) {
  std::vector<int> out;
  for (const auto& s : states)
    if (s.done) out.push_back(s.id);
  return out;
}

}  // namespace

RoundResult replan_round(std::vector<Plan> plans, const std::vector<RobotState>& states,
                         const PlannerConfig& cfg, const Replanner& replan) {
  RoundResult out;
  const auto excluded = excluded_robots(states);
  int active = 0;
  for (const Plan& p : plans)
    if (p.robot >= 0 && p.robot < static_cast<int>(states.size()) && !states[p.robot].done) ++active;
  const int opposite_cap = 4 * active;
  const int gamma_cap = 2 * active;

  auto slot_of = [&](int robot) -> Plan* {
    for (Plan& p : plans)
      if (p.robot == robot) return &p;
    return nullptr;
  };
  // Robots whose last re-plan left their own tally unchanged.
  std::vector<char> passed(states.size(), 0);
  auto pick = [&](const std::vector<double>& score) {
    int best = -1;
    for (int r = 0; r < static_cast<int>(score.size()); ++r) {
      if (score[r] <= 0.0 || (r < static_cast<int>(passed.size()) && passed[r])) continue;
      if (best < 0 || score[r] > score[best]) best = r;
    }
    return best;
  };
  // Re-plans `robot`; returns the new report.
  auto redo = [&](int robot, const ConflictReport& before, bool opposite) {
    Plan* p = slot_of(robot);
    bool changed = false;
    if (p) {
      if (auto fresh = replan(states[robot], plans, true); fresh && fresh->cells != p->cells) {
        *p = std::move(*fresh);
        changed = true;
      }
    }
    ConflictReport after = changed ? detect_all(plans, excluded, cfg) : before;
    const auto tally = [&](const ConflictReport& r) {
      if (robot >= static_cast<int>(r.gamma_i.size())) return 0.0;
      return opposite ? static_cast<double>(r.n_opp[robot]) : r.gamma_i[robot];
    };
    if (!changed || tally(after) >= tally(before)) {
      passed[robot] = 1;
    }
    if (changed && tally(after) < tally(before)) std::fill(passed.begin(), passed.end(), 0);
    return after;
  };
  auto opposite_scores = [](const ConflictReport& r) {
    return std::vector<double>(r.n_opp.begin(), r.n_opp.end());
  };

  ConflictReport report = detect_all(plans, excluded, cfg);
  while (!out.soft_failure) {
    // Step 2: clear opposite conflicts.
    std::fill(passed.begin(), passed.end(), 0);
    while (report.opposite_count() > 0) {
      const int robot = pick(opposite_scores(report));
      if (out.opposite_replans >= opposite_cap || robot < 0) {
        out.soft_failure = true;
        out.diagnostic = std::string(robot < 0 ? "no re-plan lowers the opposite conflicts"
                                               : "opposite-conflict re-plan cap reached") +
                         ", " + std::to_string(report.opposite_count()) + " remaining";
        break;
      }
      report = redo(robot, report, true);
      ++out.opposite_replans;
    }
    if (out.soft_failure) break;
    // Steps 3-5: bring the weighted score under the threshold.
    std::fill(passed.begin(), passed.end(), 0);
    while (report.gamma > cfg.phi && report.opposite_count() == 0) {
      const int robot = pick(report.gamma_i);
      if (out.gamma_replans >= gamma_cap || robot < 0) {
        out.soft_failure = true;
        out.diagnostic = std::string(robot < 0 ? "no re-plan lowers the weighted conflicts"
                                               : "weighted-conflict re-plan cap reached") +
                         ", gamma " + std::to_string(report.gamma);
        break;
      }
      report = redo(robot, report, false);
      ++out.gamma_replans;
    }
    if (report.opposite_count() == 0 && report.gamma <= cfg.phi) break;
  }
  out.plans = std::move(plans);
  out.report = std::move(report);
  return out;
}

void write_conflict_log(std::ostream& out, int tick, const ConflictReport& report) {
  for (const auto& c : report.conflicts)
    out << tick << ',' << to_string(c.kind) << ',' << c.robot_i << ',' << c.robot_j << ','
        << c.cell.x << ',' << c.cell.y << ',' << c.index_i << ',' << c.index_j << '\n';
}

}  // namespace whpath
