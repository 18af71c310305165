#include "whpath/simulation.hpp"

#include <algorithm>

#include "whpath/errors.hpp"
#include "whpath/scheduler.hpp"

namespace whpath {

std::string to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::PA: return "pa";
    case Algorithm::ADCC: return "adcc";
    case Algorithm::CAStar: return "castar";
    case Algorithm::PBS: return "pbs";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& text) {
  if (text == "pa") return Algorithm::PA;
  if (text == "adcc") return Algorithm::ADCC;
  if (text == "castar") return Algorithm::CAStar;
  if (text == "pbs") return Algorithm::PBS;
  throw DomainError("unknown algorithm '" + text + "' (expected pa, adcc, castar or pbs)");
}

std::vector<Algorithm> all_algorithms() {
  return {Algorithm::PA, Algorithm::ADCC, Algorithm::CAStar, Algorithm::PBS};
}

Simulation::Simulation(const Scenario& scenario, Algorithm algo, const SimOptions& options,
                       std::uint64_t seed)
    : scenario_(&scenario), algo_(algo), opt_(options), rng_(seed) {
  opt_.planner.validate();
  if (opt_.replan_period < 1) throw DomainError("replan period must be at least 1 tick");
  scenario.validate();
  states_ = scenario.initial_states(opt_.planner.queue_capacity);
  plans_.resize(states_.size());
  for (const auto& s : states_) plans_[s.id] = Plan::from_cells(s.id, {s.position()}, s.direction);
  stalled_.assign(states_.size(), 0);
}

bool Simulation::finished() const noexcept {
  return std::all_of(states_.begin(), states_.end(), [](const RobotState& s) { return s.done; });
}

std::vector<Cell> Simulation::frozen_cells() const {
  std::vector<Cell> out;
  for (const auto& s : states_)
    if (s.done) out.push_back(s.position());
  return out;
}

std::vector<Cell> Simulation::held_by_others(int robot) const {
  std::vector<Cell> out;
  for (const auto& s : states_)
    if (s.id != robot) out.insert(out.end(), s.queue.cells().begin(), s.queue.cells().end());
  return out;
}

bool Simulation::plan_valid(const RobotState& s, const Plan& p) const {
  const auto q = s.queue.cells();
  return p.robot == s.id && p.size() >= static_cast<int>(q.size()) &&
         std::equal(q.begin(), q.end(), p.cells.begin()) && p.goal() == s.goal.cell;
}

std::vector<Plan> Simulation::active_plans() const {
  std::vector<Plan> out;
  for (const auto& s : states_)
    if (!s.done) out.push_back(plans_[s.id]);
  return out;
}

std::optional<Plan> Simulation::plan_one(const RobotState& s, const std::vector<Plan>& active,
                                         bool avoid_held, bool strict) const {
  const GridGraph& map = scenario_->map;
  std::vector<Cell> blocked = frozen_cells();
  const std::size_t frozen_count = blocked.size();
  if (avoid_held) {
    const auto held = held_by_others(s.id);
    blocked.insert(blocked.end(), held.begin(), held.end());
  }
  const CostModel model = algo_ == Algorithm::ADCC ? CostModel::VisitCount : CostModel::Traffic;
  auto attempt = [&](std::span<const Cell> obstacles) -> std::optional<Plan> {
    try {
      return plan_against(map, s, active, obstacles, opt_.planner, model, strict);
    } catch (const UnreachableError&) {
      return std::nullopt;
    }
  };
  if (auto p = attempt(blocked)) return p;
  if (avoid_held) return attempt(std::span<const Cell>(blocked.data(), frozen_count));
  return std::nullopt;
}

void Simulation::plan_primary() {
  const int stall = opt_.stall_ticks;
  std::vector<Plan> valid;
  std::vector<int> missing;
  for (const auto& s : states_) {
    if (s.done) continue;
    if (plan_valid(s, plans_[s.id]))
      valid.push_back(plans_[s.id]);
    else
      missing.push_back(s.id);
  }
  for (int r : missing) {
    const RobotState& s = states_[r];
    if (auto p = plan_one(s, valid, stall > 0 && stalled_[r] >= stall, false)) {
      plans_[r] = std::move(*p);
    } else {
      plans_[r] = Plan::from_cells(r, std::vector<Cell>(s.queue.cells().begin(), s.queue.cells().end()),
                                   s.direction);
      continue;
    }
    valid.push_back(plans_[r]);
  }

  if (stall > 0) {
    for (const auto& s : states_) {
      if (s.done || stalled_[s.id] < stall || stalled_[s.id] % stall != 0) continue;
      if (auto p = plan_one(s, active_plans(), true, false)) {
        plans_[s.id] = std::move(*p);
        ++stats_.stall_replans;
      }
    }
  }

  if (tick_ % opt_.replan_period != 0) return;
  const Replanner replanner = [this, stall](const RobotState& s, const std::vector<Plan>& ps,
                                            bool strict) -> std::optional<Plan> {
    return plan_one(s, ps, stall > 0 && stalled_[s.id] >= stall, strict);
  };
  RoundResult round = replan_round(active_plans(), states_, opt_.planner, replanner);
  ++stats_.replan_rounds;
  stats_.round_replans += round.opposite_replans + round.gamma_replans;
  if (round.soft_failure) ++stats_.soft_failures;
  for (auto& p : round.plans) plans_[p.robot] = std::move(p);
}

void Simulation::plan_baseline() {
  bool need = tick_ == 0 || timed_.size() != states_.size();
  for (const auto& s : states_)
    if (!s.done && !plan_valid(s, plans_[s.id]) && plans_[s.id].size() > 1) need = true;
  if (!need && tick_ % opt_.replan_period == 0) {
    for (const auto& s : states_) {
      if (s.done) continue;
      const bool drifted = timed_[s.id].at(tick_ - timed_tick_) != s.position();
      const bool stuck = opt_.stall_ticks > 0 && stalled_[s.id] >= opt_.stall_ticks;
      const bool waiting = plans_[s.id].goal() != s.goal.cell;
      if (drifted || stuck || waiting) {
        need = true;
        break;
      }
    }
  }
  if (!need) return;

  const auto frozen = frozen_cells();
  BaselineResult result =
      algo_ == Algorithm::CAStar
          ? ca_star_plan_all(scenario_->map, states_, frozen, opt_.planner, rng_)
          : pbs_plan_all(scenario_->map, states_, frozen, opt_.planner, opt_.pbs_node_cap);
  ++stats_.full_replans;
  stats_.baseline_failed_robots += result.failed_robots;
  stats_.pbs_nodes += result.high_level_nodes;
  if (result.exhausted) {
    abort_reason_ = "priority search failed at tick " + std::to_string(tick_) + ": " + result.diagnostic;
    return;
  }
  timed_ = std::move(result.paths);
  plans_ = std::move(result.plans);
  timed_tick_ = tick_;
}

std::vector<Violation> Simulation::step() {
  if (finished() || aborted()) return {};
  if (algo_ == Algorithm::PA || algo_ == Algorithm::ADCC)
    plan_primary();
  else
    plan_baseline();
  if (aborted()) return {};

  const PlannerConfig& cfg = opt_.planner;
  std::vector<Action> actions = fill_queues(states_, plans_, cfg, rng_);
  if (opt_.validate_inline) {
    auto violations = validate_constraints(scenario_->map, states_, actions, cfg.queue_capacity);
    if (!violations.empty()) return violations;
  }
  WorldStep ws = step_world(states_, actions, opt_.regime, rng_, cfg.turn_wait);

  for (std::size_t r = 0; r < states_.size(); ++r) {
    const RobotState& before = states_[r];
    const RobotState& after = ws.states[r];
    Plan& plan = plans_[r];
    if (after.done) {
      plan = Plan::from_cells(after.id, {after.position()}, after.direction);
      stalled_[r] = 0;
      continue;
    }
    if (after.position() != before.position() && plan.size() > 1 && plan.cells[0] == before.position())
      plan.pop_front();
    const bool extended = actions[r].cells.size() > before.queue.cells().size();
    const bool blocked = !before.done && !extended && before.queue.size() == 1 && before.wait == 0 &&
                         plan.size() > 1;
    stalled_[r] = blocked ? stalled_[r] + 1 : 0;
  }
  states_ = std::move(ws.states);
  ++tick_;
  return {};
}

RunOutcome Simulation::run(TraceWriter* writer, SimTrace* trace) {
  RunOutcome out;
  if (writer) writer->snapshot(tick_, states_);
  if (trace) trace->snapshots.push_back(states_);
  while (!finished() && tick_ < opt_.max_ticks) {
    auto violations = step();
    if (!violations.empty()) {
      out.violations = static_cast<int>(violations.size());
      out.failure = violations.front().message;
      break;
    }
    if (aborted()) {
      out.failure = abort_reason_;
      break;
    }
    if (writer) writer->snapshot(tick_, states_);
    if (trace) trace->snapshots.push_back(states_);
  }
  out.ticks = tick_;
  if (finished()) out.makespan = tick_;
  out.timeout = !out.makespan.has_value() && out.violations == 0;
  if (writer) out.trace_hash = writer->hash_hex();
  out.stats = stats_;
  if (trace) trace->makespan = out.makespan;
  return out;
}

RunOutcome simulate(const Scenario& scenario, Algorithm algo, const SimOptions& options,
                    std::uint64_t seed, TraceWriter* writer, SimTrace* trace) {
  if (trace) trace->seed = seed;
  Simulation sim(scenario, algo, options, seed);
  TraceWriter local;
  TraceWriter* w = writer ? writer : &local;
  return sim.run(w, trace);
}

}  // namespace whpath
