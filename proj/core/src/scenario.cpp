#include "whpath/scenario.hpp"

#include <algorithm>
#include <set>

#include "whpath/errors.hpp"
#include "whpath/sim.hpp"

namespace whpath {

void Scenario::validate() const {
  std::set<Cell> starts;
  std::set<Cell> goals;
  for (std::size_t i = 0; i < robots.size(); ++i) {
    const auto& r = robots[i];
    if (r.id != static_cast<int>(i)) throw DomainError("robot ids must be 0..m-1 in order");
    if (!map.is_free(r.start.cell)) throw DomainError("start of robot " + std::to_string(r.id) + " is blocked");
    if (!map.is_free(r.goal.cell)) throw DomainError("goal of robot " + std::to_string(r.id) + " is blocked");
    if (r.start.dir == Direction::Stay || r.goal.dir == Direction::Stay)
      throw DomainError("robot " + std::to_string(r.id) + " has no heading");
    if (!starts.insert(r.start.cell).second) throw DomainError("duplicate start " + to_string(r.start.cell));
    if (!goals.insert(r.goal.cell).second) throw DomainError("duplicate goal " + to_string(r.goal.cell));
  }
}

std::vector<RobotState> Scenario::initial_states(int queue_capacity) const {
  std::vector<RobotState> out;
  out.reserve(robots.size());
  for (const auto& r : robots) out.push_back(RobotState::initial(r.id, r.start, r.goal, queue_capacity));
  return out;
}

Layout parse_layout(const std::string& text) {
  if (text == "open") return Layout::Open;
  if (text == "shelves") return Layout::Shelves;
  throw DomainError("unknown layout '" + text + "' (expected open or shelves)");
}

void add_shelves(GridGraph& map) {
  for (int y = 1; y + 2 <= map.height() - 1; y += 3)
    for (int x = 1; x + 4 <= map.width() - 1; x += 5)
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 4; ++dx) map.set_blocked({x + dx, y + dy}, true);
}

namespace {

// Component label per cell, -1 for blocked cells.
std::vector<int> components(const GridGraph& map) {
  std::vector<int> label(map.size(), -1);
  int next = 0;
  for (int i = 0; i < map.size(); ++i) {
    if (label[i] >= 0 || !map.is_free(map.cell(i))) continue;
    std::vector<int> stack{i};
    label[i] = next;
    while (!stack.empty()) {
      const Cell c = map.cell(stack.back());
      stack.pop_back();
      map.for_each_move(c, [&](Cell n, Direction) {
        const int idx = map.index(n);
        if (label[idx] < 0) {
          label[idx] = next;
          stack.push_back(idx);
        }
      });
    }
    ++next;
  }
  return label;
}

bool reachable_around(const GridGraph& map, Cell from, Cell to, const std::vector<std::uint8_t>& blocked) {
  if (from == to) return true;
  std::vector<std::uint8_t> seen(map.size(), 0);
  std::vector<int> stack{map.index(from)};
  seen[map.index(from)] = 1;
  while (!stack.empty()) {
    const Cell c = map.cell(stack.back());
    stack.pop_back();
    bool hit = false;
    map.for_each_move(c, [&](Cell n, Direction) {
      const int idx = map.index(n);
      if (n == to) hit = true;
      if (seen[idx] || blocked[idx]) return;
      seen[idx] = 1;
      stack.push_back(idx);
    });
    if (hit) return true;
  }
  return false;
}

Direction random_direction(Rng& rng) { return kMoveDirections[uniform_index(rng, 4)]; }

}  // namespace

Scenario place_robots(const GridGraph& map, int robot_count, std::uint64_t seed, int retries) {
  if (robot_count < 0) throw GenerationError("robot count must be non-negative");
  std::vector<Cell> free;
  for (int i = 0; i < map.size(); ++i)
    if (map.is_free(map.cell(i))) free.push_back(map.cell(i));
  if (static_cast<int>(free.size()) < robot_count)
    throw GenerationError("map has " + std::to_string(free.size()) + " free cells for " +
                          std::to_string(robot_count) + " robots");

  const auto label = components(map);
  Rng rng(seed);
  for (int attempt = 0; attempt < retries; ++attempt) {
    // Partial Fisher-Yates draws without replacement.
    auto draw = [&]() {
      std::vector<Cell> pool = free;
      for (int i = 0; i < robot_count; ++i)
        std::swap(pool[i], pool[i + uniform_index(rng, pool.size() - i)]);
      pool.resize(robot_count);
      return pool;
    };
    const auto starts = draw();
    const auto goals = draw();
    Scenario sc;
    sc.map = map;
    sc.seed = seed;
    for (int i = 0; i < robot_count; ++i) {
      const Direction ds = random_direction(rng);
      const Direction dg = random_direction(rng);
      sc.robots.push_back({i, {starts[i], ds}, {goals[i], dg}});
    }
    bool ok = true;
    for (int i = 0; ok && i < robot_count; ++i)
      ok = label[map.index(starts[i])] == label[map.index(goals[i])];
    if (ok) {
      std::vector<std::uint8_t> blocked(map.size(), 0);
      for (const Cell& g : goals) blocked[map.index(g)] = 1;
      for (int i = 0; ok && i < robot_count; ++i) {
        blocked[map.index(goals[i])] = 0;
        ok = reachable_around(map, starts[i], goals[i], blocked);
        blocked[map.index(goals[i])] = 1;
      }
    }
    if (ok) return sc;
  }
  throw GenerationError("could not place " + std::to_string(robot_count) + " robots after " +
                        std::to_string(retries) + " attempts");
}

Scenario generate_scenario(int width, int height, int robot_count, double obstacle_density,
                           std::uint64_t seed, Layout layout) {
  if (obstacle_density < 0.0 || obstacle_density >= 1.0)
    throw GenerationError("obstacle density must be in [0, 1)");
  GridGraph map(width, height);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  if (layout == Layout::Shelves) {
    add_shelves(map);
  } else if (obstacle_density > 0.0) {
    std::vector<Cell> cells;
    for (int i = 0; i < map.size(); ++i) cells.push_back(map.cell(i));
    const int count = static_cast<int>(obstacle_density * map.size());
    for (int i = 0; i < count; ++i) {
      std::swap(cells[i], cells[i + uniform_index(rng, cells.size() - i)]);
      map.set_blocked(cells[i], true);
    }
  }
  return place_robots(map, robot_count, seed);
}

}  // namespace whpath
