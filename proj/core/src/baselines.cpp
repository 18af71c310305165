#include "whpath/baselines.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "whpath/errors.hpp"

namespace whpath {

Plan TimedPath::to_plan(Direction heading) const {
  std::vector<Cell> route;
  for (const Cell& c : cells)
    if (route.empty() || route.back() != c) route.push_back(c);
  return Plan::from_cells(robot, std::move(route), heading);
}

// ReservationTable -----------------------------------------------------------

std::int64_t ReservationTable::key(Cell c, int t) const {
  return ((static_cast<std::int64_t>(c.x) << 20) + c.y) * (horizon_ + 2) + t;
}

std::int64_t ReservationTable::edge_key(Cell from, Cell to, int t) const {
  const int dir = to_int(direction_between(from, to));
  return (key(to, t) << 3) + dir;
}

void ReservationTable::reserve(const TimedPath& path) {
  if (path.cells.empty()) return;
  for (int t = 0; t <= horizon_; ++t) {
    vertex_.emplace(key(path.at(t), t), path.robot);
    if (t > 0 && path.at(t) != path.at(t - 1))
      edge_.emplace(edge_key(path.at(t - 1), path.at(t), t), path.robot);
  }
}

void ReservationTable::reserve_prefix(int robot, std::span<const Cell> cells) {
  const int n = std::min<int>(static_cast<int>(cells.size()), horizon_ + 1);
  for (int t = 0; t < n; ++t) {
    vertex_.emplace(key(cells[t], t), robot);
    if (t > 0) edge_.emplace(edge_key(cells[t - 1], cells[t], t), robot);
  }
}

std::optional<int> ReservationTable::owner(Cell c, int t) const {
  if (t < 0 || t > horizon_) return std::nullopt;
  auto it = vertex_.find(key(c, t));
  if (it == vertex_.end()) return std::nullopt;
  return it->second;
}

bool ReservationTable::edge_free(Cell from, Cell to, int t) const {
  if (t < 1 || t > horizon_ || from == to) return true;
  return !edge_.count(edge_key(to, from, t));
}

bool ReservationTable::free_from(Cell c, int t) const {
  for (int s = std::max(t, 0); s <= horizon_; ++s)
    if (vertex_.count(key(c, s))) return false;
  return true;
}

// Space-time A* ---------------------------------------------------------------

namespace {

std::vector<int> distance_to(const GridGraph& graph, Cell goal, std::span<const Cell> frozen) {
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> dist(graph.size(), kInf);
  std::vector<std::uint8_t> blocked(graph.size(), 0);
  for (const Cell& c : frozen)
    if (graph.in_bounds(c)) blocked[graph.index(c)] = 1;
  if (!graph.is_free(goal) || blocked[graph.index(goal)]) return dist;
  std::vector<int> frontier{graph.index(goal)};
  dist[graph.index(goal)] = 0;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const Cell c = graph.cell(frontier[head]);
    const int d = dist[frontier[head]];
    graph.for_each_move(c, [&](Cell n, Direction) {
      const int idx = graph.index(n);
      if (blocked[idx] || dist[idx] != kInf) return;
      dist[idx] = d + 1;
      frontier.push_back(idx);
    });
  }
  return dist;
}

struct StEntry {
  int f;
  int g;
  int cell;
  int slot;
};

struct StAfter {
  bool operator()(const StEntry& a, const StEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    if (a.cell != b.cell) return a.cell > b.cell;
    return a.slot > b.slot;
  }
};

}  // namespace

std::optional<TimedPath> space_time_astar(const GridGraph& graph, const RobotState& robot,
                                          const ReservationTable& table, const SpaceTimeOptions& opt) {
  constexpr int kInf = std::numeric_limits<int>::max();
  const auto queue = robot.queue.cells();
  const int n = static_cast<int>(queue.size());
  const Cell goal = robot.goal.cell;
  const auto dist = distance_to(graph, goal, opt.frozen);
  const Cell tail = queue.back();
  if (dist[graph.index(tail)] == kInf) return std::nullopt;

  std::vector<std::uint8_t> frozen(graph.size(), 0);
  for (const Cell& c : opt.frozen)
    if (graph.in_bounds(c)) frozen[graph.index(c)] = 1;

  const int horizon = opt.horizon;
  const int beyond = horizon + 1;
  const int slots = horizon + 2;
  const int states = graph.size() * slots;
  std::vector<int> g(states, kInf);
  std::vector<int> parent(states, -1);
  std::vector<std::uint8_t> closed(states, 0);

  const int start_slot = std::min(n - 1, beyond);
  const int s0 = graph.index(tail) * slots + start_slot;
  g[s0] = n - 1;
  std::priority_queue<StEntry, std::vector<StEntry>, StAfter> open;
  open.push({g[s0] + dist[graph.index(tail)], g[s0], graph.index(tail), start_slot});

  int found = -1;
  while (!open.empty()) {
    const StEntry top = open.top();
    open.pop();
    const int st = top.cell * slots + top.slot;
    if (closed[st] || top.g > g[st]) continue;
    closed[st] = 1;
    const Cell cur = graph.cell(top.cell);
    if (cur == goal && (top.slot == beyond || table.free_from(goal, top.slot))) {
      found = st;
      break;
    }
    const int next_slot = std::min(top.slot + 1, beyond);
    auto relax = [&](Cell next) {
      const int idx = graph.index(next);
      if (frozen[idx] || dist[idx] == kInf) return;
      if (next_slot <= horizon) {
        if (!table.vertex_free(next, next_slot)) return;
        if (!table.edge_free(cur, next, next_slot)) return;
      }
      const int ns = idx * slots + next_slot;
      const int ng = top.g + 1;
      if (closed[ns] || ng >= g[ns]) return;
      g[ns] = ng;
      parent[ns] = st;
      open.push({ng + dist[idx], ng, idx, next_slot});
    };
    graph.for_each_move(cur, [&](Cell next, Direction) { relax(next); });
    if (top.slot < beyond) relax(cur);
  }
  if (found < 0) return std::nullopt;

  std::vector<Cell> tail_path;
  for (int st = found; st >= 0; st = parent[st]) tail_path.push_back(graph.cell(st / slots));
  std::reverse(tail_path.begin(), tail_path.end());
  TimedPath path;
  path.robot = robot.id;
  path.cells.assign(queue.begin(), queue.end() - 1);
  path.cells.insert(path.cells.end(), tail_path.begin(), tail_path.end());
  // Trailing waits on the goal carry no information.
  while (path.cells.size() > 1 && path.cells.back() == path.cells[path.cells.size() - 2] &&
         static_cast<int>(path.cells.size()) - 1 > n - 1)
    path.cells.pop_back();
  return path;
}

std::optional<Collision> first_collision(const TimedPath& a, const TimedPath& b, int horizon) {
  for (int t = 0; t <= horizon; ++t) {
    if (a.at(t) == b.at(t)) return Collision{a.robot, b.robot, t, a.at(t)};
    if (t > 0 && a.at(t) == b.at(t - 1) && a.at(t - 1) == b.at(t) && a.at(t) != a.at(t - 1))
      return Collision{a.robot, b.robot, t, a.at(t)};
  }
  return std::nullopt;
}

// PriorityOrdering -----------------------------------------------------------

bool PriorityOrdering::precedes(int hi, int lo) const {
  if (hi == lo) return false;
  std::vector<std::uint8_t> seen(n_, 0);
  std::vector<int> stack{hi};
  seen[hi] = 1;
  while (!stack.empty()) {
    const int r = stack.back();
    stack.pop_back();
    for (int c = 0; c < n_; ++c) {
      if (!has(r, c) || seen[c]) continue;
      if (c == lo) return true;
      seen[c] = 1;
      stack.push_back(c);
    }
  }
  return false;
}

bool PriorityOrdering::add(int hi, int lo) {
  if (hi == lo || precedes(lo, hi)) return false;
  adj_[static_cast<std::size_t>(hi) * n_ + lo] = 1;
  return true;
}

std::vector<int> PriorityOrdering::ancestors(int r) const {
  std::vector<std::uint8_t> seen(n_, 0);
  std::vector<int> stack{r};
  std::vector<int> out;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (int p = 0; p < n_; ++p) {
      if (!has(p, x) || seen[p]) continue;
      seen[p] = 1;
      out.push_back(p);
      stack.push_back(p);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> PriorityOrdering::descendants(int r) const {
  std::vector<std::uint8_t> seen(n_, 0);
  std::vector<int> stack{r};
  std::vector<int> out;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (int c = 0; c < n_; ++c) {
      if (!has(x, c) || seen[c]) continue;
      seen[c] = 1;
      out.push_back(c);
      stack.push_back(c);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool PriorityOrdering::acyclic() const {
  std::vector<int> indeg(n_, 0);
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b) indeg[b] += has(a, b) ? 1 : 0;
  std::vector<int> ready;
  for (int r = 0; r < n_; ++r)
    if (indeg[r] == 0) ready.push_back(r);
  int visited = 0;
  while (!ready.empty()) {
    const int r = ready.back();
    ready.pop_back();
    ++visited;
    for (int c = 0; c < n_; ++c)
      if (has(r, c) && --indeg[c] == 0) ready.push_back(c);
  }
  return visited == n_;
}

// Planners -------------------------------------------------------------------

namespace {

TimedPath parked(const RobotState& s) {
  TimedPath p;
  p.robot = s.id;
  p.cells.assign(s.queue.cells().begin(), s.queue.cells().end());
  return p;
}

// Every active robot's queue is already committed, so later plans must route
// around it.
ReservationTable committed_queues(const std::vector<RobotState>& states, int horizon) {
  ReservationTable table(horizon);
  for (const auto& s : states)
    if (!s.done) table.reserve_prefix(s.id, s.queue.cells());
  return table;
}

void finish(BaselineResult& out, const std::vector<RobotState>& states) {
  out.plans.clear();
  for (const auto& s : states) {
    const TimedPath& path = out.paths[s.id];
    out.plans.push_back(path.to_plan(s.direction));
  }
}

}  // namespace

BaselineResult ca_star_plan_all(const GridGraph& graph, const std::vector<RobotState>& states,
                                std::span<const Cell> frozen, const PlannerConfig& cfg, Rng& rng) {
  BaselineResult out;
  out.paths.resize(states.size());
  std::vector<int> order;
  for (const auto& s : states) {
    if (s.done)
      out.paths[s.id] = parked(s);
    else
      order.push_back(s.id);
  }
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[uniform_index(rng, i)]);

  ReservationTable table = committed_queues(states, cfg.horizon);
  const SpaceTimeOptions opt{cfg.horizon, frozen};
  for (int r : order) {
    auto path = space_time_astar(graph, states[r], table, opt);
    if (!path) {
      path = parked(states[r]);
      ++out.failed_robots;
    }
    table.reserve(*path);
    out.paths[r] = std::move(*path);
  }
  if (out.failed_robots) out.diagnostic = std::to_string(out.failed_robots) + " robots wait in place";
  finish(out, states);
  return out;
}

namespace {

struct PbsNode {
  PriorityOrdering order;
  std::vector<TimedPath> paths;
  long long cost = 0;
};

long long path_cost(const std::vector<TimedPath>& paths) {
  long long c = 0;
  for (const auto& p : paths) c += p.arrival();
  return c;
}

std::optional<Collision> find_collision(const PbsNode& node, const std::vector<int>& active,
                                        int horizon) {
  std::optional<Collision> best;
  for (std::size_t a = 0; a < active.size(); ++a) {
    for (std::size_t b = a + 1; b < active.size(); ++b) {
      auto c = first_collision(node.paths[active[a]], node.paths[active[b]], horizon);
      if (c && (!best || c->t < best->t)) best = c;
    }
  }
  return best;
}

bool replan_lower(PbsNode& node, int lo, const GridGraph& graph,
                  const std::vector<RobotState>& states, const ReservationTable& base,
                  const SpaceTimeOptions& opt) {
  // Topological order over lo and everything below it.
  std::vector<int> group = node.order.descendants(lo);
  group.push_back(lo);
  std::vector<int> indeg(states.size(), 0);
  for (int a : group)
    for (int b : group)
      if (node.order.has(a, b)) ++indeg[b];
  std::vector<int> ready;
  for (int r : group)
    if (indeg[r] == 0) ready.push_back(r);
  std::vector<int> topo;
  while (!ready.empty()) {
    std::sort(ready.begin(), ready.end(), std::greater<>());
    const int r = ready.back();
    ready.pop_back();
    topo.push_back(r);
    for (int b : group)
      if (node.order.has(r, b) && --indeg[b] == 0) ready.push_back(b);
  }

  for (int r : topo) {
    const auto higher = node.order.ancestors(r);
    bool needs = r == lo;
    for (std::size_t i = 0; !needs && i < higher.size(); ++i)
      needs = first_collision(node.paths[r], node.paths[higher[i]], opt.horizon).has_value();
    if (!needs) continue;
    ReservationTable table = base;
    for (int h : higher) table.reserve(node.paths[h]);
    auto path = space_time_astar(graph, states[r], table, opt);
    if (!path) return false;
    node.paths[r] = std::move(*path);
  }
  node.cost = path_cost(node.paths);
  return true;
}

}  // namespace

BaselineResult pbs_plan_all(const GridGraph& graph, const std::vector<RobotState>& states,
                            std::span<const Cell> frozen, const PlannerConfig& cfg, int node_cap) {
  BaselineResult out;
  const SpaceTimeOptions opt{cfg.horizon, frozen};
  const int m = static_cast<int>(states.size());
  std::vector<int> active;

  PbsNode root{PriorityOrdering(m), std::vector<TimedPath>(m), 0};
  const ReservationTable base = committed_queues(states, cfg.horizon);
  for (const auto& s : states) {
    if (s.done) {
      root.paths[s.id] = parked(s);
      continue;
    }
    active.push_back(s.id);
    auto path = space_time_astar(graph, s, base, opt);
    if (!path) {
      path = parked(s);
      ++out.failed_robots;
    }
    root.paths[s.id] = std::move(*path);
  }
  root.cost = path_cost(root.paths);

  std::vector<PbsNode> stack;
  stack.push_back(std::move(root));
  std::optional<PbsNode> last;
  while (!stack.empty()) {
    PbsNode node = std::move(stack.back());
    stack.pop_back();
    ++out.high_level_nodes;
    const auto collision = find_collision(node, active, cfg.horizon);
    if (!collision) {
      out.paths = std::move(node.paths);
      finish(out, states);
      return out;
    }
    if (out.high_level_nodes >= node_cap) {
      last = std::move(node);
      out.diagnostic = "high-level node cap reached";
      break;
    }
    std::vector<PbsNode> children;
    for (const auto& [hi, lo] : {std::pair{collision->robot_a, collision->robot_b},
                                 std::pair{collision->robot_b, collision->robot_a}}) {
      PbsNode child = node;
      if (!child.order.add(hi, lo)) continue;
      if (replan_lower(child, lo, graph, states, base, opt)) children.push_back(std::move(child));
    }
    // Depth-first: the cheaper child is explored first.
    std::sort(children.begin(), children.end(),
              [](const PbsNode& a, const PbsNode& b) { return a.cost > b.cost; });
    for (auto& c : children) stack.push_back(std::move(c));
    last = std::move(node);
  }
  out.exhausted = true;
  if (out.diagnostic.empty()) out.diagnostic = "priority search exhausted";
  out.paths = last ? std::move(last->paths) : std::vector<TimedPath>(m);
  finish(out, states);
  return out;
}

}  // namespace whpath
