#include "whpath/replay.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "whpath/errors.hpp"

namespace whpath {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string required(const TraceFile& trace, const std::string& key) {
  auto v = trace.header_value(key);
  if (!v) throw Error("trace header lacks '" + key + "'");
  return *v;
}

double as_double(const TraceFile& trace, const std::string& key) {
  const auto text = required(trace, key);
  try {
    return std::stod(text);
  } catch (const std::exception&) {
    throw Error("trace header '" + key + "' is not a number: " + text);
  }
}

int as_int(const TraceFile& trace, const std::string& key) {
  return static_cast<int>(as_double(trace, key));
}

}  // namespace

void write_run_header(TraceWriter& w, const RunSetup& setup) {
  const SimOptions& o = setup.options;
  const PlannerConfig& p = o.planner;
  w.header("algo", to_string(setup.algo));
  w.header("regime", o.regime.name());
  w.header("speed_granularity", o.regime.granularity == SpeedGranularity::PerEdge ? "edge" : "tick");
  w.header("seed", std::to_string(setup.seed));
  w.header("max_ticks", std::to_string(o.max_ticks));
  w.header("replan_period", std::to_string(o.replan_period));
  w.header("stall_ticks", std::to_string(o.stall_ticks));
  w.header("pbs_node_cap", std::to_string(o.pbs_node_cap));
  w.header("zeta_opposite", num(p.zeta[0]));
  w.header("zeta_following", num(p.zeta[1]));
  w.header("zeta_crossing", num(p.zeta[2]));
  w.header("sigma", num(p.sigma));
  w.header("c1", num(p.c1));
  w.header("c2", num(p.c2));
  w.header("c3", num(p.c3));
  w.header("turn_wait", std::to_string(p.turn_wait));
  w.header("queue_capacity", std::to_string(p.queue_capacity));
  w.header("delta_fol", num(p.delta_fol));
  w.header("delta_cross", num(p.delta_cross));
  w.header("horizon", std::to_string(p.horizon));
  w.header("phi", num(p.phi));
  w.header("m_cap", std::to_string(p.m_cap));
  const GridGraph& map = setup.scenario.map;
  w.header("map_size", std::to_string(map.width()) + " " + std::to_string(map.height()));
  std::istringstream rows(format_map(map));
  std::string row;
  std::getline(rows, row);  // size line
  while (std::getline(rows, row))
    if (!row.empty()) w.header("map_row", row);
  for (const auto& r : setup.scenario.robots) {
    std::ostringstream line;
    line << r.id << ' ' << r.start.cell.x << ' ' << r.start.cell.y << ' ' << to_int(r.start.dir) << ' '
         << r.goal.cell.x << ' ' << r.goal.cell.y << ' ' << to_int(r.goal.dir);
    w.header("robot", line.str());
  }
  w.header("scenario_seed", std::to_string(setup.scenario.seed));
}

RunSetup read_run_header(const TraceFile& trace) {
  RunSetup setup;
  setup.algo = parse_algorithm(required(trace, "algo"));
  SimOptions& o = setup.options;
  o.regime = SpeedRegime::parse(required(trace, "regime"));
  if (trace.header_value("speed_granularity") == std::optional<std::string>("edge"))
    o.regime.granularity = SpeedGranularity::PerEdge;
  setup.seed = std::stoull(required(trace, "seed"));
  o.max_ticks = as_int(trace, "max_ticks");
  o.replan_period = as_int(trace, "replan_period");
  o.stall_ticks = as_int(trace, "stall_ticks");
  o.pbs_node_cap = as_int(trace, "pbs_node_cap");
  PlannerConfig& p = o.planner;
  p.zeta = {as_double(trace, "zeta_opposite"), as_double(trace, "zeta_following"),
            as_double(trace, "zeta_crossing")};
  p.sigma = as_double(trace, "sigma");
  p.c1 = as_double(trace, "c1");
  p.c2 = as_double(trace, "c2");
  p.c3 = as_double(trace, "c3");
  p.turn_wait = as_int(trace, "turn_wait");
  p.queue_capacity = as_int(trace, "queue_capacity");
  p.delta_fol = as_double(trace, "delta_fol");
  p.delta_cross = as_double(trace, "delta_cross");
  p.horizon = as_int(trace, "horizon");
  p.phi = as_double(trace, "phi");
  p.m_cap = as_int(trace, "m_cap");
  p.validate();

  std::string map_text = required(trace, "map_size") + "\n";
  for (const auto& [k, v] : trace.header)
    if (k == "map_row") map_text += v + "\n";
  std::istringstream map_in(map_text);
  setup.scenario.map = parse_map(map_in);
  for (const auto& [k, v] : trace.header) {
    if (k != "robot") continue;
    std::istringstream in(v);
    RobotSpec r;
    int sd = 0, gd = 0;
    if (!(in >> r.id >> r.start.cell.x >> r.start.cell.y >> sd >> r.goal.cell.x >> r.goal.cell.y >> gd))
      throw Error("malformed robot header '" + v + "'");
    r.start.dir = direction_from_int(sd);
    r.goal.dir = direction_from_int(gd);
    setup.scenario.robots.push_back(r);
  }
  if (auto s = trace.header_value("scenario_seed")) setup.scenario.seed = std::stoull(*s);
  setup.scenario.validate();
  return setup;
}

ReplayReport replay_trace(const TraceFile& trace) {
  const RunSetup setup = read_run_header(trace);
  ReplayReport report;
  report.recorded_hash = trace_hash(trace);
  SimTrace replayed;
  TraceWriter writer;
  report.outcome = simulate(setup.scenario, setup.algo, setup.options, setup.seed, &writer, &replayed);
  report.replayed_hash = writer.hash_hex();

  std::size_t k = 0;
  for (std::size_t t = 0; t < replayed.snapshots.size() && report.first_mismatch < 0; ++t) {
    for (const RobotState& s : replayed.snapshots[t]) {
      if (k >= trace.records.size() ||
          parse_trace_line(format_trace_line(static_cast<int>(t), s)) != trace.records[k]) {
        report.first_mismatch = static_cast<long>(k);
        break;
      }
      ++k;
    }
  }
  if (report.first_mismatch < 0 && k != trace.records.size()) report.first_mismatch = static_cast<long>(k);
  return report;
}

std::vector<std::string> validate_trace(const TraceFile& trace) {
  const RunSetup setup = read_run_header(trace);
  const GridGraph& map = setup.scenario.map;
  const int capacity = setup.options.planner.queue_capacity;
  std::vector<std::string> problems;

  std::map<int, std::vector<const TraceRecord*>> ticks;
  for (const auto& r : trace.records) ticks[r.t].push_back(&r);

  auto states_at = [&](int t, const std::vector<const TraceRecord*>& recs) {
    std::vector<RobotState> states;
    for (const TraceRecord* r : recs) {
      if (r->robot < 0 || r->robot >= static_cast<int>(setup.scenario.robots.size())) {
        problems.push_back("t=" + std::to_string(t) + ": unknown robot " + std::to_string(r->robot));
        continue;
      }
      const RobotSpec& spec = setup.scenario.robots[r->robot];
      RobotState s = RobotState::initial(spec.id, spec.start, spec.goal, capacity);
      s.direction = r->dir;
      s.phase = r->phase;
      s.wait = r->wait;
      try {
        s.queue = PreservedQueue(r->queue, capacity);
      } catch (const ConstraintViolation& e) {
        problems.push_back("t=" + std::to_string(t) + " robot " + std::to_string(r->robot) + ": " + e.what());
        continue;
      }
      for (const Cell& c : r->queue)
        if (!map.is_free(c))
          problems.push_back("t=" + std::to_string(t) + " robot " + std::to_string(r->robot) +
                             ": queue cell " + to_string(c) + " is not free");
      states.push_back(std::move(s));
    }
    return states;
  };

  const std::vector<RobotState>* prev = nullptr;
  std::vector<RobotState> prev_states;
  for (const auto& [t, recs] : ticks) {
    std::vector<RobotState> states = states_at(t, recs);
    // Queues of different robots never share a cell.
    std::map<Cell, int> owner;
    for (const auto& s : states) {
      for (const Cell& c : s.queue.cells()) {
        auto [it, fresh] = owner.emplace(c, s.id);
        if (!fresh)
          problems.push_back("t=" + std::to_string(t) + ": robots " + std::to_string(it->second) + " and " +
                             std::to_string(s.id) + " share " + to_string(c));
      }
    }
    if (prev) {
      std::vector<Action> actions;
      std::vector<RobotState> before;
      for (const auto& s : states) {
        auto it = std::find_if(prev->begin(), prev->end(), [&](const RobotState& p) { return p.id == s.id; });
        if (it == prev->end()) continue;
        const auto old_q = it->queue.cells();
        const auto new_q = s.queue.cells();
        Action a{s.id, {}};
        if (new_q.size() >= old_q.size() && std::equal(old_q.begin(), old_q.end(), new_q.begin())) {
          a.cells.assign(new_q.begin(), new_q.end());
        } else if (new_q.size() + 1 >= old_q.size() &&
                   std::equal(old_q.begin() + 1, old_q.end(), new_q.begin())) {
          a.cells.push_back(old_q.front());
          a.cells.insert(a.cells.end(), new_q.begin(), new_q.end());
        } else {
          problems.push_back("t=" + std::to_string(t) + " robot " + std::to_string(s.id) +
                             ": queue does not extend the previous one");
          continue;
        }
        before.push_back(*it);
        actions.push_back(std::move(a));
      }
      for (const auto& v : validate_constraints(map, before, actions, capacity))
        problems.push_back("t=" + std::to_string(t - 1) + "->" + std::to_string(t) + ": " + v.message);
    }
    prev_states = std::move(states);
    prev = &prev_states;
  }
  return problems;
}

}  // namespace whpath
