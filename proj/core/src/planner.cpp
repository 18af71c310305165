#include "whpath/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "whpath/errors.hpp"

namespace whpath {

namespace {

double kind_sum(double s, std::span<const double> ds, double zeta, const PlannerConfig& cfg) {
  if (ds.empty()) return 0.0;
  const int m = static_cast<int>(ds.size());
  const double crowd = std::pow(cfg.c2, std::min(m, cfg.m_cap));
  const double two_sigma_sq = 2.0 * cfg.sigma * cfg.sigma;
  double sum = 0.0;
  for (double d : ds) {
    const double gap = s - d;
    sum += zeta * std::exp(-gap * gap / two_sigma_sq) * std::pow(cfg.c1, -(s + d) / 2.0) * crowd;
  }
  return sum;
}

}  // namespace

double traffic_cost(double s, std::span<const double> opposite, std::span<const double> following,
                    std::span<const double> crossing, bool turned, const PlannerConfig& cfg) {
  return kind_sum(s, opposite, cfg.zeta[0], cfg) + kind_sum(s, following, cfg.zeta[1], cfg) +
         kind_sum(s, crossing, cfg.zeta[2], cfg) + (turned ? cfg.c3 : 0.0);
}

double traffic_cost(double s, const ConflictDistances& conflicts, bool turned,
                    const PlannerConfig& cfg) {
  return traffic_cost(s, conflicts[0], conflicts[1], conflicts[2], turned, cfg);
}

int turn_lower_bound(Direction from, int dx, int dy, Direction goal_dir) {
  std::array<Direction, 2> need{};
  int count = 0;
  if (dx > 0) need[count++] = Direction::Right;
  if (dx < 0) need[count++] = Direction::Left;
  if (dy > 0) need[count++] = Direction::Down;
  if (dy < 0) need[count++] = Direction::Up;
  const auto differ = [](Direction a, Direction b) { return a != b ? 1 : 0; };
  switch (count) {
    case 0: return differ(from, goal_dir);
    case 1: return differ(from, need[0]) + differ(need[0], goal_dir);
    default: {
      const int ab = differ(from, need[0]) + 1 + differ(need[1], goal_dir);
      const int ba = differ(from, need[1]) + 1 + differ(need[0], goal_dir);
      return std::min(ab, ba);
    }
  }
}

double heuristic(Cell node, Direction node_dir, Cell goal, Direction goal_dir, int turn_wait) {
  return manhattan(node, goal) +
         static_cast<double>(turn_wait) *
             turn_lower_bound(node_dir, goal.x - node.x, goal.y - node.y, goal_dir);
}

double adcc_cost(int n, int n_max, double c1) {
  if (n_max <= 0) return 0.0;
  return c1 * static_cast<double>(n) / static_cast<double>(n_max);
}

// TrafficField ---------------------------------------------------------------

TrafficField::TrafficField(const GridGraph& graph, const std::vector<Plan>& plans,
                           const PlannerConfig& cfg, int exclude)
    : graph_(&graph), cfg_(cfg), exclude_(exclude), plans_(plans) {
  rebuild();
}

void TrafficField::update(const Plan& plan) {
  auto it = std::find_if(plans_.begin(), plans_.end(),
                         [&](const Plan& p) { return p.robot == plan.robot; });
  if (it == plans_.end())
    plans_.push_back(plan);
  else
    *it = plan;
  rebuild();
}

void TrafficField::rebuild() {
  const int cells = graph_->size();
  offsets_.assign(cells + 1, 0);
  std::vector<std::pair<int, Entry>> staged;
  for (const Plan& p : plans_) {
    const int len = std::min(p.size(), cfg_.horizon + 1);
    for (int k = 0; k < len; ++k) {
      const Cell c = p.cells[k];
      if (!graph_->in_bounds(c)) continue;
      if (std::find(p.cells.begin(), p.cells.begin() + k, c) != p.cells.begin() + k) continue;
      staged.push_back({graph_->index(c), Entry{p.robot, visit_at(p, k)}});
    }
  }
  for (const auto& [idx, e] : staged) offsets_[idx + 1] += 1;
  for (int i = 0; i < cells; ++i) offsets_[i + 1] += offsets_[i];
  entries_.assign(staged.size(), Entry{});
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [idx, e] : staged) entries_[fill[idx]++] = e;
}

ConflictDistances TrafficField::distances_at(Cell cell, int s, Direction heading, Cell prev) const {
  ConflictDistances out;
  if (s > cfg_.horizon || !graph_->in_bounds(cell)) return out;
  const int idx = graph_->index(cell);
  Visit self{s, heading, prev, std::nullopt};
  if (s == 0) self.prev.reset();
  for (int e = offsets_[idx]; e < offsets_[idx + 1]; ++e) {
    if (entries_[e].robot == exclude_) continue;
    const auto kind = classify_visits(self, entries_[e].visit);
    out[static_cast<int>(kind)].push_back(entries_[e].visit.index);
  }
  return out;
}

bool TrafficField::opposite_at(Cell cell, int s, Direction heading, Cell prev) const {
  if (s > cfg_.horizon || !graph_->in_bounds(cell)) return false;
  const int idx = graph_->index(cell);
  const Visit self{s, heading, prev, std::nullopt};
  for (int e = offsets_[idx]; e < offsets_[idx + 1]; ++e) {
    if (entries_[e].robot == exclude_) continue;
    if (classify_visits(self, entries_[e].visit) == ConflictKind::Opposite) return true;
  }
  // The same swap seen from the cell being left.
  if (s < 1 || !graph_->in_bounds(prev)) return false;
  const int from = graph_->index(prev);
  for (int e = offsets_[from]; e < offsets_[from + 1]; ++e) {
    const Entry& other = entries_[e];
    if (other.robot == exclude_) continue;
    if (other.visit.prev == cell && std::abs(other.visit.index - (s - 1)) <= 1) return true;
  }
  return false;
}

double OppositeGuard::enter(Cell cell, int s, Direction heading, Cell prev, bool turned) const {
  if (index_->opposite_at(cell, s, heading, prev)) return std::numeric_limits<double>::infinity();
  return base_->enter(cell, s, heading, prev, turned);
}

double TrafficField::enter(Cell cell, int s, Direction heading, Cell prev, bool turned) const {
  const double turn = turned ? cfg_.c3 : 0.0;
  if (s > cfg_.horizon) return turn;
  const int idx = graph_->index(cell);
  const int begin = offsets_[idx];
  const int end = offsets_[idx + 1];
  if (begin == end) return turn;

  constexpr int kInline = 32;
  std::array<std::array<double, kInline>, 3> inline_buf;
  std::array<int, 3> counts{0, 0, 0};
  bool overflow = false;
  const Visit self{s, heading, prev, std::nullopt};
  for (int e = begin; e < end; ++e) {
    if (entries_[e].robot == exclude_) continue;
    const int kind = static_cast<int>(classify_visits(self, entries_[e].visit));
    if (counts[kind] == kInline) {
      overflow = true;
      break;
    }
    inline_buf[kind][counts[kind]++] = entries_[e].visit.index;
  }
  if (overflow) return traffic_cost(s, distances_at(cell, s, heading, prev), turned, cfg_);
  return traffic_cost(s, std::span<const double>(inline_buf[0].data(), counts[0]),
                      std::span<const double>(inline_buf[1].data(), counts[1]),
                      std::span<const double>(inline_buf[2].data(), counts[2]), turned, cfg_);
}

// VisitCountCost -------------------------------------------------------------

VisitCountCost::VisitCountCost(const GridGraph& graph, const std::vector<Plan>& plans, double c1,
                               int exclude)
    : graph_(&graph), c1_(c1), count_(graph.size(), 0) {
  for (const Plan& p : plans) {
    if (p.robot == exclude) continue;
    for (const Cell& c : p.cells)
      if (graph.in_bounds(c)) count_[graph.index(c)] += 1;
  }
  n_max_ = count_.empty() ? 0 : *std::max_element(count_.begin(), count_.end());
}

int VisitCountCost::visits(Cell cell) const { return count_[graph_->index(cell)]; }

double VisitCountCost::enter(Cell cell, int, Direction, Cell, bool) const {
  return adcc_cost(count_[graph_->index(cell)], n_max_, c1_);
}

// Search ---------------------------------------------------------------------

namespace {

struct Scratch {
  std::vector<double> g;
  std::vector<int> parent;
  std::vector<int> depth;
  std::vector<unsigned> seen;
  std::vector<unsigned> closed;
  std::vector<unsigned> masked;
  unsigned stamp = 0;

  void prepare(int states, int cells) {
    if (static_cast<int>(g.size()) < states) {
      g.assign(states, 0.0);
      parent.assign(states, -1);
      depth.assign(states, 0);
      seen.assign(states, 0);
      closed.assign(states, 0);
    }
    if (static_cast<int>(masked.size()) < cells) masked.assign(cells, 0);
    if (++stamp == 0) {
      std::fill(seen.begin(), seen.end(), 0);
      std::fill(closed.begin(), closed.end(), 0);
      std::fill(masked.begin(), masked.end(), 0);
      stamp = 1;
    }
  }
};

thread_local Scratch scratch;

struct OpenEntry {
  double f;
  double h;
  int x;
  int y;
  int dir;
  int state;
  double g;
};

struct OpenAfter {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    if (a.x != b.x) return a.x > b.x;
    if (a.y != b.y) return a.y > b.y;
    return a.dir > b.dir;
  }
};

constexpr int state_of(int cell_idx, Direction d) { return cell_idx * 4 + (to_int(d) - 1); }

std::optional<Plan> search(const GridGraph& graph, const RobotState& robot, const NodeCost& cost,
                           std::span<const Cell> frozen, bool mask_queue, const PlannerConfig& cfg,
                           PlanStats* stats) {
  const auto queue = robot.queue.cells();
  const int n = static_cast<int>(queue.size());
  const Cell start = queue.back();
  const Direction start_dir = n >= 2 ? direction_between(queue[n - 2], queue[n - 1]) : robot.direction;
  const Cell goal = robot.goal.cell;
  const Direction goal_dir = robot.goal.dir;
  const int W = cfg.turn_wait;

  Scratch& sc = scratch;
  sc.prepare(graph.size() * 4, graph.size());
  const unsigned stamp = sc.stamp;
  for (const Cell& c : frozen)
    if (graph.in_bounds(c)) sc.masked[graph.index(c)] = stamp;
  if (mask_queue)
    for (int l = 0; l + 1 < n; ++l) sc.masked[graph.index(queue[l])] = stamp;
  sc.masked[graph.index(start)] = 0;

  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenAfter> open;
  const int s0 = state_of(graph.index(start), start_dir);
  sc.seen[s0] = stamp;
  sc.parent[s0] = -1;
  sc.depth[s0] = n - 1;
  if (start == goal) {
    sc.g[s0] = start_dir != goal_dir ? W : 0.0;
    open.push({sc.g[s0], 0.0, start.x, start.y, to_int(start_dir), s0, sc.g[s0]});
  } else {
    sc.g[s0] = 0.0;
    const double h = heuristic(start, start_dir, goal, goal_dir, W);
    open.push({h, h, start.x, start.y, to_int(start_dir), s0, 0.0});
  }

  int found = -1;
  int expansions = 0;
  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    if (sc.closed[top.state] == stamp || top.g > sc.g[top.state]) continue;
    sc.closed[top.state] = stamp;
    const Cell cur = graph.cell(top.state / 4);
    const Direction cur_dir = static_cast<Direction>(top.state % 4 + 1);
    if (cur == goal) {
      found = top.state;
      break;
    }
    ++expansions;
    const int s = sc.depth[top.state];
    graph.for_each_move(cur, [&](Cell next, Direction d) {
      const int idx = graph.index(next);
      if (sc.masked[idx] == stamp) return;
      const int ns = state_of(idx, d);
      if (sc.closed[ns] == stamp) return;
      const bool turned = d != cur_dir;
      const double extra = cost.enter(next, s + 1, d, cur, turned);
      if (!std::isfinite(extra)) return;
      double g = top.g + 1.0 + (turned ? W : 0.0) + extra;
      double h = 0.0;
      if (next == goal)
        g += d != goal_dir ? W : 0.0;
      else
        h = heuristic(next, d, goal, goal_dir, W);
      if (sc.seen[ns] == stamp && g >= sc.g[ns]) return;
      sc.seen[ns] = stamp;
      sc.g[ns] = g;
      sc.parent[ns] = top.state;
      sc.depth[ns] = s + 1;
      open.push({g + h, h, next.x, next.y, to_int(d), ns, g});
    });
  }
  if (stats) stats->expansions += expansions;
  if (found < 0) return std::nullopt;

  std::vector<Cell> tail_path;
  for (int st = found; st >= 0; st = sc.parent[st]) tail_path.push_back(graph.cell(st / 4));
  std::reverse(tail_path.begin(), tail_path.end());

  std::vector<Cell> cells(queue.begin(), queue.end() - 1);
  cells.insert(cells.end(), tail_path.begin(), tail_path.end());
  Plan plan = Plan::from_cells(robot.id, std::move(cells), robot.direction);
  plan.cost = sc.g[found];
  return plan;
}

}  // namespace

Plan plan_path(const GridGraph& graph, const RobotState& robot, const NodeCost& cost,
               std::span<const Cell> frozen, const PlannerConfig& cfg, PlanStats* stats) {
  if (!graph.is_free(robot.goal.cell))
    throw UnreachableError("goal " + to_string(robot.goal.cell) + " of robot " +
                           std::to_string(robot.id) + " is blocked");
  if (auto plan = search(graph, robot, cost, frozen, true, cfg, stats)) return *plan;
  if (robot.queue.size() > 1) {
    if (stats) stats->retried_through_queue = true;
    if (auto plan = search(graph, robot, cost, frozen, false, cfg, stats)) return *plan;
  }
  throw UnreachableError("no route for robot " + std::to_string(robot.id) + " from " +
                         to_string(robot.queue.tail()) + " to " + to_string(robot.goal.cell));
}

Plan plan_path(const GridGraph& graph, const RobotState& robot, const std::vector<Plan>& others,
               std::span<const Cell> frozen, const PlannerConfig& cfg) {
  TrafficField field(graph, others, cfg, robot.id);
  return plan_path(graph, robot, field, frozen, cfg);
}

PathConflicts count_path_conflicts(const Plan& candidate, const std::vector<Plan>& others,
                                   int horizon) {
  PathConflicts out;
  for (const Plan& other : others) {
    if (other.robot == candidate.robot) continue;
    for (const Conflict& c : classify_pair(candidate, other, horizon)) {
      const int kind = static_cast<int>(c.kind);
      out.m[kind] += 1;
      out.d[kind].push_back(c.index_i);
    }
  }
  return out;
}

}  // namespace whpath
