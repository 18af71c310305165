#include "whpath/scheduler.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_map>

#include "whpath/errors.hpp"

namespace whpath {

namespace {

std::optional<Cell> at(const ArbitrationSide& side, int k) {
  if (k < 0 || k >= static_cast<int>(side.cells.size())) return std::nullopt;
  return side.cells[k];
}

bool same(const std::optional<Cell>& a, const std::optional<Cell>& b) {
  return a && b && *a == *b;
}

}  // namespace

Arbitration arbitrate_explained(const ArbitrationSide& i, const ArbitrationSide& j, Rng& rng) {
  const int k = i.index;
  const int g = j.index;
  const auto cell_i = at(i, k);
  const auto cell_j = at(j, g);
  if (same(cell_i, i.goal)) {
    if (same(at(i, k - 1), at(j, g + 1))) return {Winner::I, 3};
    return {Winner::J, 5};
  }
  if (same(cell_j, j.goal)) {
    if (same(at(i, k + 1), at(j, g - 1))) return {Winner::J, 9};
    return {Winner::I, 11};
  }
  const bool ahead = same(at(i, k + 1), at(j, g - 1));
  const bool behind = same(at(i, k - 1), at(j, g + 1));
  if (ahead && !behind) return {Winner::J, 15};
  if (!ahead && behind) return {Winner::I, 17};
  if (i.remaining != j.remaining) return {i.remaining < j.remaining ? Winner::I : Winner::J, 19};
  return {uniform_index(rng, 2) == 0 ? Winner::I : Winner::J, 19};
}

Winner arbitrate(const ArbitrationSide& i, const ArbitrationSide& j, Rng& rng) {
  return arbitrate_explained(i, j, rng).winner;
}

int remaining_distance(const Plan& plan) { return plan.empty() ? 0 : plan.size() - 1; }

std::vector<Action> fill_queues(const std::vector<RobotState>& states, const std::vector<Plan>& plans,
                                const PlannerConfig& cfg, Rng& rng, FillStats* stats) {
  const int m = static_cast<int>(states.size());
  std::unordered_map<Cell, int> held;
  held.reserve(states.size() * cfg.queue_capacity);
  for (const auto& s : states)
    for (const Cell& c : s.queue.cells()) held.emplace(c, s.id);

  // Requested extensions, cut at the first cell someone already holds.
  std::vector<std::vector<Cell>> request(m);
  for (int r = 0; r < m; ++r) {
    const RobotState& s = states[r];
    if (s.done) continue;
    if (s.id >= static_cast<int>(plans.size())) throw DesyncError(s.id, "no plan for robot");
    const Plan& plan = plans[s.id];
    const auto q = s.queue.cells();
    if (plan.size() < static_cast<int>(q.size()) || !std::equal(q.begin(), q.end(), plan.cells.begin()))
      throw DesyncError(s.id, "plan of robot " + std::to_string(s.id) +
                                  " does not start with its preserved queue");
    const int limit = std::min(plan.size(), cfg.queue_capacity);
    for (int k = static_cast<int>(q.size()); k < limit; ++k) {
      const Cell c = plan.cells[k];
      if (held.count(c)) break;
      if (std::find(request[r].begin(), request[r].end(), c) != request[r].end()) break;
      request[r].push_back(c);
    }
  }

  // Contested cells in ascending (x, y) order.
  std::map<Cell, std::vector<int>> wanted;
  for (int r = 0; r < m; ++r)
    for (const Cell& c : request[r]) wanted[c].push_back(r);

  auto side_of = [&](int r, Cell c) {
    ArbitrationSide side;
    const auto q = states[r].queue.cells();
    side.cells.assign(q.begin(), q.end());
    side.cells.insert(side.cells.end(), request[r].begin(), request[r].end());
    side.index = static_cast<int>(std::find(side.cells.begin(), side.cells.end(), c) - side.cells.begin());
    side.goal = states[r].goal.cell;
    side.remaining = remaining_distance(plans[states[r].id]);
    return side;
  };
  auto cut_at = [&](int r, Cell c) {
    auto it = std::find(request[r].begin(), request[r].end(), c);
    request[r].erase(it, request[r].end());
  };

  for (auto& [cell, robots] : wanted) {
    if (robots.size() < 2) continue;
    std::vector<int> live;
    for (int r : robots)
      if (std::find(request[r].begin(), request[r].end(), cell) != request[r].end()) live.push_back(r);
    if (live.size() < 2) continue;
    if (stats) stats->contested += 1;
    std::sort(live.begin(), live.end(), [&](int a, int b) { return states[a].id < states[b].id; });
    int winner = live[0];
    for (std::size_t n = 1; n < live.size(); ++n) {
      const int other = live[n];
      const Winner w = arbitrate(side_of(winner, cell), side_of(other, cell), rng);
      if (stats) stats->arbitrations += 1;
      const int loser = w == Winner::I ? other : winner;
      if (w == Winner::J) winner = other;
      cut_at(loser, cell);
    }
  }

  std::vector<Action> actions(m);
  for (int r = 0; r < m; ++r) {
    actions[r].robot = states[r].id;
    const auto q = states[r].queue.cells();
    actions[r].cells.assign(q.begin(), q.end());
    actions[r].cells.insert(actions[r].cells.end(), request[r].begin(), request[r].end());
  }
  return actions;
}

}  // namespace whpath
