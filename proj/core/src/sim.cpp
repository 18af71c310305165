#include "whpath/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "whpath/errors.hpp"

namespace whpath {

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  if (n == 0) throw DomainError("uniform_index over an empty range");
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r = rng();
  while (r >= limit) r = rng();
  return r % n;
}

SpeedRegime SpeedRegime::fixed(double v) {
  if (!(v > 0.0)) throw DomainError("fixed speed must be positive");
  return {v, v, SpeedMode::Fixed, SpeedGranularity::PerTick};
}

SpeedRegime SpeedRegime::uniform(double lo, double hi) {
  if (!(lo >= 0.0) || !(hi > 0.0) || lo > hi) throw DomainError("invalid speed range");
  return {lo, hi, SpeedMode::Uniform, SpeedGranularity::PerTick};
}

namespace {

std::string format_number(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

double parse_number(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("bad number '" + text + "'");
  }
  if (used != text.size()) throw DomainError("bad number '" + text + "'");
  return v;
}

}  // namespace

std::string SpeedRegime::name() const {
  if (mode == SpeedMode::Fixed) return format_number(v_max);
  return format_number(v_min) + "-" + format_number(v_max);
}

SpeedRegime SpeedRegime::parse(const std::string& text) {
  std::string body = text;
  if (body.rfind("v=", 0) == 0) body = body.substr(2);
  const auto dash = body.find('-', 1);
  if (dash == std::string::npos) return fixed(parse_number(body));
  return uniform(parse_number(body.substr(0, dash)), parse_number(body.substr(dash + 1)));
}

std::vector<SpeedRegime> standard_regimes() {
  return {SpeedRegime::fixed(1.0), SpeedRegime::uniform(0.5, 1.0), SpeedRegime::uniform(0.0, 1.0),
          SpeedRegime::fixed(0.5), SpeedRegime::uniform(0.0, 0.5)};
}

double sample_speed(const SpeedRegime& regime, Rng& rng) {
  if (regime.mode == SpeedMode::Fixed) return regime.v_max;
  return regime.v_min + (regime.v_max - regime.v_min) * uniform01(rng);
}

double compute_speed(int f, int queue_capacity, double v) {
  if (queue_capacity <= 2) throw DomainError("queue capacity must exceed 2");
  if (f < 1 || f > queue_capacity)
    throw DomainError("turn count " + std::to_string(f) + " outside [1, " +
                      std::to_string(queue_capacity) + "]");
  if (v < 0.0) throw DomainError("speed must be non-negative");
  return static_cast<double>(f - 1) / static_cast<double>(queue_capacity - 1) * v;
}

int first_turn_count(std::span<const Cell> cells) {
  const int n = static_cast<int>(cells.size());
  if (n <= 1) return 1;
  Direction prev = direction_between(cells[0], cells[1]);
  // Element l (1-based) is a turning position when the move leaving it
  // differs from the move entering it.
  for (int l = 2; l < n; ++l) {
    const Direction next = direction_between(cells[l - 1], cells[l]);
    if (next != prev) return l;
    prev = next;
  }
  return n;
}

int first_turn_count(const Action& action) { return first_turn_count(action.cells); }

namespace {

void check_prefix(const RobotState& state, const Action& action) {
  const auto q = state.queue.cells();
  if (action.cells.size() < q.size() || !std::equal(q.begin(), q.end(), action.cells.begin()))
    throw ConstraintViolation(2, "action of robot " + std::to_string(state.id) +
                                     " does not start with its preserved queue");
}

}  // namespace

StepOutcome step_robot(const RobotState& state, const Action& action, double v, int turn_wait) {
  StepOutcome out{state, {}};
  RobotState& next = out.next;
  if (state.done) {
    out.events.push_back(StepEvent::Idle);
    return out;
  }
  check_prefix(state, action);
  PreservedQueue proposed(action.cells, state.queue.capacity());

  // Step 1: heading check against the action's first move.
  if (proposed.size() > 1) {
    const Direction want = direction_between(proposed.cells()[0], proposed.cells()[1]);
    if (want != next.direction) {
      next.direction = want;
      next.wait = turn_wait;
      out.events.push_back(StepEvent::TurnStarted);
    }
  } else if (proposed.head() == state.goal.cell && next.direction != state.goal.dir &&
             next.wait == 0 && next.phase == 0.0) {
    // In-place turn to the goal heading.
    next.direction = state.goal.dir;
    next.wait = turn_wait;
    out.events.push_back(StepEvent::TurnStarted);
  }

  if (next.wait > 0) {
    // Step 2a: stay while turning.
    next.queue = proposed;
    next.phase = 0.0;
    next.wait -= 1;
    next.edge_speed = -1.0;
    out.events.push_back(StepEvent::WaitDecrement);
  } else {
    // Step 2b: advance the movement phase.
    const int f = first_turn_count(proposed.cells());
    const double vi = compute_speed(f, proposed.capacity(), v);
    next.phase += vi;
    if (next.phase >= 1.0) {
      next.queue = proposed.popped();
      next.phase = 0.0;
      next.edge_speed = -1.0;
      out.events.push_back(StepEvent::PoppedHead);
    } else {
      next.queue = proposed;
      if (vi == 0.0) out.events.push_back(StepEvent::Idle);
    }
    next.wait = 0;
  }
  next.done = at_goal(next);
  return out;
}

WorldStep step_world(const std::vector<RobotState>& states, const std::vector<Action>& actions,
                     const SpeedRegime& regime, Rng& rng, int turn_wait) {
  if (states.size() != actions.size()) throw DomainError("one action per robot required");
  std::unordered_map<Cell, int> owner;
  owner.reserve(states.size() * 4);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    for (const Cell& c : actions[i].cells) {
      auto [it, inserted] = owner.emplace(c, static_cast<int>(i));
      if (!inserted && it->second != static_cast<int>(i))
        throw CollisionError(states[it->second].id, states[i].id,
                             "robots " + std::to_string(states[it->second].id) + " and " +
                                 std::to_string(states[i].id) + " both hold cell " + to_string(c));
    }
  }

  WorldStep out;
  out.states.reserve(states.size());
  out.events.reserve(states.size());
  out.speeds.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const RobotState& s = states[i];
    if (s.done) {
      out.states.push_back(s);
      out.events.push_back({StepEvent::Idle});
      out.speeds.push_back(0.0);
      continue;
    }
    double v = 0.0;
    RobotState input = s;
    if (regime.granularity == SpeedGranularity::PerEdge) {
      if (input.edge_speed < 0.0) input.edge_speed = sample_speed(regime, rng);
      v = input.edge_speed;
    } else {
      v = sample_speed(regime, rng);
    }
    StepOutcome step = step_robot(input, actions[i], v, turn_wait);
    out.states.push_back(std::move(step.next));
    out.events.push_back(std::move(step.events));
    out.speeds.push_back(v);
  }
  return out;
}

std::vector<Violation> validate_constraints(const GridGraph& graph,
                                            const std::vector<RobotState>& states,
                                            const std::vector<Action>& actions, int queue_capacity) {
  std::vector<Violation> out;
  const std::size_t m = std::min(states.size(), actions.size());
  if (states.size() != actions.size())
    out.push_back({2, {}, {}, "state and action counts differ"});

  for (std::size_t i = 0; i < m; ++i) {
    const RobotState& s = states[i];
    const Action& a = actions[i];
    const auto q = s.queue.cells();
    if (a.cells.size() < q.size() || !std::equal(q.begin(), q.end(), a.cells.begin()))
      out.push_back({2, {s.id}, {s.queue.head()},
                     "action of robot " + std::to_string(s.id) + " does not extend its queue"});
    if (static_cast<int>(a.cells.size()) > queue_capacity)
      out.push_back({6, {s.id}, {},
                     "action of robot " + std::to_string(s.id) + " has " +
                         std::to_string(a.cells.size()) + " cells, capacity " +
                         std::to_string(queue_capacity)});
    for (std::size_t l = 0; l < a.cells.size(); ++l) {
      if (!graph.is_free(a.cells[l]))
        out.push_back({5, {s.id}, {a.cells[l]}, "cell " + to_string(a.cells[l]) + " is not a vertex"});
      for (std::size_t k = l + 1; k < a.cells.size(); ++k)
        if (a.cells[l] == a.cells[k])
          out.push_back({4, {s.id}, {a.cells[l]},
                         "robot " + std::to_string(s.id) + " revisits " + to_string(a.cells[l])});
      if (l + 1 < a.cells.size() && !graph.has_edge(a.cells[l], a.cells[l + 1]))
        out.push_back({5, {s.id}, {a.cells[l], a.cells[l + 1]},
                       "no edge " + to_string(a.cells[l]) + " -> " + to_string(a.cells[l + 1])});
    }
  }

  std::unordered_map<Cell, int> owner;
  owner.reserve(m * 4);
  for (std::size_t i = 0; i < m; ++i) {
    for (const Cell& c : actions[i].cells) {
      auto [it, inserted] = owner.emplace(c, static_cast<int>(i));
      if (!inserted && it->second != static_cast<int>(i))
        out.push_back({3, {states[it->second].id, states[i].id}, {c},
                       "cell " + to_string(c) + " held by robots " +
                           std::to_string(states[it->second].id) + " and " +
                           std::to_string(states[i].id)});
    }
  }
  return out;
}

}  // namespace whpath
