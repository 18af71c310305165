// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.
//
//   whpath_acceptance [--bench PATH] [--work DIR] [--only N]
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "oracles.hpp"
#include "whpath/errors.hpp"
#include "whpath/experiment.hpp"
#include "whpath/planner.hpp"
#include "whpath/replan.hpp"
#include "whpath/replay.hpp"
#include "whpath/scheduler.hpp"

using namespace whpath;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kRelTol = 1e-12;
constexpr int kSafetyRuns = 200;
constexpr int kTableRuns = 15;
constexpr int kConflictInstances = 100;
constexpr double kSoftFailureLimit = 0.05;
constexpr double kCaStarRatio = 0.7;
constexpr double kSlowRatioLo = 1.4;
constexpr double kSlowRatioHi = 2.4;

struct Verdict {
  bool pass = true;
  std::string detail;
};

bool close_rel(double got, double want) {
  if (got == want) return true;
  return std::fabs(got - want) <= kRelTol * std::max(std::fabs(want), 1e-300);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1 ---------------------------------------------------------------------------

Verdict safety() {
  const auto regimes = standard_regimes();
  const auto algos = all_algorithms();
  int violations = 0, trace_problems = 0, timeouts = 0, errors = 0, runs = 0;
  std::string first;
  for (int i = 0; i < kSafetyRuns; ++i) {
    const int combo = i % 40;
    const bool large = combo % 2 == 1;
    const Algorithm algo = algos[(combo / 2) % 4];
    const SpeedRegime regime = regimes[combo / 8];
    RunSetup setup;
    const std::uint64_t sseed = derive_seed(2024, "safety-scenario", i);
    setup.scenario = large ? generate_scenario(30, 30, 80, 0.0, sseed) : generate_scenario(10, 10, 10, 0.0, sseed);
    setup.algo = algo;
    setup.options.regime = regime;
    setup.options.validate_inline = true;
    setup.seed = derive_seed(2024, "safety-run", i);

    std::ostringstream text;
    TraceWriter writer(&text);
    write_run_header(writer, setup);
    try {
      const RunOutcome out = simulate(setup.scenario, algo, setup.options, setup.seed, &writer);
      ++runs;
      violations += out.violations;
      timeouts += out.timeout ? 1 : 0;
      if (out.violations > 0 && first.empty())
        first = "run " + std::to_string(i) + ": " + out.failure;
      std::istringstream in(text.str());
      const auto problems = validate_trace(read_trace(in));
      trace_problems += static_cast<int>(problems.size());
      if (!problems.empty() && first.empty()) first = "run " + std::to_string(i) + ": " + problems.front();
    } catch (const std::exception& e) {
      ++errors;
      if (first.empty()) first = "run " + std::to_string(i) + ": " + e.what();
    }
  }
  Verdict v;
  v.pass = violations == 0 && trace_problems == 0 && errors == 0 && runs == kSafetyRuns;
  v.detail = std::to_string(runs) + " runs, " + std::to_string(violations) + " inline violations, " +
             std::to_string(trace_problems) + " trace problems, " + std::to_string(errors) +
             " errors, " + std::to_string(timeouts) + " timeouts";
  if (!first.empty()) v.detail += "; first: " + first;
  return v;
}

// 2 ---------------------------------------------------------------------------

Verdict equations() {
  int checks = 0;
  std::vector<std::string> bad;
  auto expect = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok && bad.size() < 5) bad.push_back(what);
  };

  // speed
  expect(compute_speed(1, 4, 1.0) == 0.0, "v_i f=1");
  expect(compute_speed(4, 4, 1.0) == 1.0, "v_i f=4");
  expect(close_rel(compute_speed(2, 4, 0.5), 1.0 / 6.0), "v_i f=2 v=0.5");
  for (int N = 3; N <= 8; ++N)
    for (int f = 1; f <= N; ++f)
      for (double v : {0.0, 0.1, 0.25, 1.0 / 3.0, 0.5, 0.75, 1.0, 1.7})
        expect(close_rel(compute_speed(f, N, v), v * (f - 1) / (N - 1)), "v_i sweep");

  // traffic cost
  PlannerConfig cfg;
  {
    ConflictDistances d;
    expect(traffic_cost(4.0, d, false, cfg) == 0.0, "t_traf empty");
    expect(traffic_cost(4.0, d, true, cfg) == 2.0, "t_traf turn only");
    d[1] = {4.0};
    expect(close_rel(traffic_cost(4.0, d, false, cfg), 1.5 * std::pow(1.05, -4.0)), "t_traf one following");
    expect(std::fabs(traffic_cost(4.0, d, false, cfg) - 1.2341) < 5e-5, "t_traf 1.2341");
  }
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> idx(0.0, 20.0);
  for (int n = 0; n < 5000; ++n) {
    PlannerConfig c = cfg;
    c.sigma = 1.0 + (n % 7);
    c.m_cap = 1 + n % 12;
    ConflictDistances d;
    for (auto& list : d) {
      const int m = static_cast<int>(gen() % 15);
      for (int j = 0; j < m; ++j) list.push_back(std::floor(idx(gen)));
    }
    const double s = std::floor(idx(gen));
    const bool turned = gen() % 2 == 1;
    const double want = oracle::traffic(s, d, turned, c.zeta, c.sigma, c.c1, c.c2, c.c3, c.m_cap);
    expect(close_rel(traffic_cost(s, d, turned, c), want), "t_traf random");
  }

  // congestion cost
  expect(close_rel(adcc_cost(7, 7, 1.05), 1.05), "adcc ratio 1");
  expect(adcc_cost(0, 7, 1.05) == 0.0, "adcc n=0");
  expect(close_rel(adcc_cost(3, 6, 1.05), 0.525), "adcc 3/6");
  for (int nm = 1; nm <= 30; ++nm)
    for (int n = 0; n <= nm; ++n) expect(close_rel(adcc_cost(n, nm, 1.05), 1.05 * n / nm), "adcc sweep");

  // gamma
  {
    const std::vector<Plan> plans{
        Plan::from_cells(0, {{0, 1}, {1, 1}, {2, 1}, {3, 1}}, Direction::Right),
        Plan::from_cells(1, {{0, 2}, {1, 2}, {1, 1}, {2, 1}}, Direction::Right)};
    const auto r = detect_all(plans, {}, cfg);
    expect(r.gamma_i[0] == 3.0, "gamma_k = 3");
  }
  const GridGraph g8(8, 8, {{3, 3}, {4, 3}, {2, 5}, {6, 1}});
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Plan> plans;
    const int m = 2 + trial % 9;
    for (int r = 0; r < m; ++r) {
      std::vector<Cell> cells;
      do cells = {{static_cast<int>(gen() % 8), static_cast<int>(gen() % 8)}};
      while (!g8.is_free(cells[0]));
      const int len = 1 + static_cast<int>(gen() % 16);
      while (static_cast<int>(cells.size()) < len) {
        const Cell n = step(cells.back(), kMoveDirections[gen() % 4]);
        if (g8.is_free(n)) cells.push_back(n);
      }
      plans.push_back(Plan::from_cells(r, cells, kMoveDirections[gen() % 4]));
    }
    PlannerConfig c = cfg;
    c.horizon = 3 + trial % 12;
    c.delta_fol = 0.5 + trial % 3;
    c.delta_cross = 1.0 + trial % 4;
    const auto got = detect_all(plans, {}, c);
    const auto want = oracle::conflicts(plans, c.horizon, c.delta_fol, c.delta_cross);
    expect(got.n_opp == want.opp && got.n_fol == want.fol && got.n_cross == want.cross, "tallies");
    for (int r = 0; r < m; ++r) expect(close_rel(got.gamma_i[r], want.gamma_i[r]), "gamma_i");
    expect(close_rel(got.gamma, want.gamma), "gamma");
  }

  // heuristic admissibility and consistency
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Cell> blocked;
    for (int b = 0; b < 8; ++b) blocked.push_back({static_cast<int>(gen() % 7), static_cast<int>(gen() % 7)});
    const GridGraph g(7, 7, blocked);
    const int W = 1 + trial % 4;
    for (int si = 0; si < g.size(); ++si) {
      const Cell s = g.cell(si);
      if (!g.is_free(s)) continue;
      for (Direction sd : kMoveDirections) {
        const auto table = oracle::turn_dijkstra_table(g, s, to_int(sd), W);
        for (int gi = 0; gi < g.size(); ++gi) {
          const Cell goal = g.cell(gi);
          if (!g.is_free(goal)) continue;
          for (Direction gd : kMoveDirections) {
            const auto exact = oracle::goal_cost(g, table, goal, to_int(gd), W);
            const double h = heuristic(s, sd, goal, gd, W);
            if (exact) expect(h <= *exact + 1e-12, "admissible");
            if (trial % 4 == 0)
              g.for_each_move(s, [&](Cell n, Direction nd) {
                expect(h <= 1.0 + (nd != sd ? W : 0) + heuristic(n, nd, goal, gd, W) + 1e-12, "consistent");
              });
          }
        }
      }
    }
  }

  Verdict v;
  v.pass = bad.empty();
  v.detail = std::to_string(checks) + " checks";
  for (const auto& b : bad) v.detail += "; mismatch: " + b;
  return v;
}

// 3 ---------------------------------------------------------------------------

Verdict truth_table() {
  // The contested cell is C; other queue cells come from {A, B, D}, distinct
  // within a queue. Every queue of length 1..3 at every contested position,
  // every goal in {A, B, C, D} and every distance relation.
  const Cell C{0, 0}, A{1, 0}, B{2, 0}, D{3, 0};
  const std::vector<Cell> others{A, B, D};
  const std::vector<Cell> goals{A, B, C, D};
  struct Q {
    std::vector<Cell> cells;
    int index;
  };
  std::vector<Q> queues;
  for (int len = 1; len <= 3; ++len)
    for (int pos = 0; pos < len; ++pos) {
      std::vector<int> pick(len - 1);
      std::function<void(int)> rec = [&](int slot) {
        if (slot == len - 1) {
          Q q{{}, pos};
          int o = 0;
          for (int p = 0; p < len; ++p) q.cells.push_back(p == pos ? C : others[pick[o++]]);
          queues.push_back(q);
          return;
        }
        for (int c = 0; c < 3; ++c) {
          if (std::find(pick.begin(), pick.begin() + slot, c) != pick.begin() + slot) continue;
          pick[slot] = c;
          rec(slot + 1);
        }
      };
      rec(0);
    }

  Rng rng(7);
  long cases = 0, mismatches = 0;
  std::set<std::tuple<int, int, int, int, int, int, int, int, int>> patterns;
  std::map<int, long> per_line;
  std::string first;
  for (const Q& qi : queues)
    for (const Cell& gi : goals)
      for (const Q& qj : queues)
        for (const Cell& gj : goals)
          for (int rel = -1; rel <= 1; ++rel) {
            const ArbitrationSide si{qi.cells, qi.index, gi, 5};
            const ArbitrationSide sj{qj.cells, qj.index, gj, 5 + rel};
            const auto got = arbitrate_explained(si, sj, rng);
            const auto want = oracle::schedule({si.cells, si.index, si.goal, si.remaining},
                                               {sj.cells, sj.index, sj.goal, sj.remaining},
                                               got.winner == Winner::I);
            ++cases;
            ++per_line[got.line];
            if (got.line != want.second || (got.winner == Winner::I) != want.first) {
              if (first.empty()) first = "case " + std::to_string(cases);
              ++mismatches;
            }
            const int k = qi.index, g = qj.index;
            const int ni = static_cast<int>(qi.cells.size()), nj = static_cast<int>(qj.cells.size());
            auto q = [](const std::vector<Cell>& c, int n) -> std::optional<Cell> {
              if (n < 0 || n >= static_cast<int>(c.size())) return std::nullopt;
              return c[n];
            };
            patterns.insert({gi == C, gj == C, oracle::eq(q(qi.cells, k + 1), q(qj.cells, g - 1)),
                             oracle::eq(q(qi.cells, k - 1), q(qj.cells, g + 1)), k == 0, k == ni - 1,
                             g == 0, g == nj - 1, rel});
          }

  // Tie on the last line: both winners must occur.
  {
    const ArbitrationSide si{{A, C}, 1, D, 4}, sj{{B, C}, 1, A, 4};
    int i_wins = 0;
    for (int n = 0; n < 200; ++n) i_wins += arbitrate_explained(si, sj, rng).winner == Winner::I ? 1 : 0;
    if (i_wins == 0 || i_wins == 200) {
      ++mismatches;
      if (first.empty()) first = "tie never split";
    }
  }

  // The three illustrated cases.
  int fig_ok = 0;
  {
    const ArbitrationSide i{{{0, 1}, {1, 1}, {1, 2}}, 1, {5, 5}, 6};
    const ArbitrationSide j{{{1, 2}, {1, 1}, {1, 0}}, 1, {0, 5}, 2};
    const auto a = arbitrate_explained(i, j, rng);
    fig_ok += a.winner == Winner::J && a.line == 15;
  }
  {
    const ArbitrationSide i{{{0, 1}, {1, 1}, {2, 1}}, 1, {4, 1}, 7};
    const ArbitrationSide j{{{1, 0}, {1, 1}, {1, 2}}, 1, {1, 4}, 3};
    const auto a = arbitrate_explained(i, j, rng);
    fig_ok += a.winner == Winner::J && a.line == 19;
  }
  {
    const ArbitrationSide i{{{0, 1}, {1, 1}, {2, 1}}, 1, {4, 1}, 3};
    const ArbitrationSide j{{{1, 0}, {1, 1}}, 1, {1, 1}, 1};
    const auto a = arbitrate_explained(i, j, rng);
    fig_ok += a.winner == Winner::I && a.line == 11;
  }

  Verdict v;
  v.pass = mismatches == 0 && fig_ok == 3 && per_line.size() == 7;
  v.detail = std::to_string(cases) + " cases, " + std::to_string(patterns.size()) +
             " distinct predicate patterns, lines";
  for (const auto& [line, n] : per_line) v.detail += " " + std::to_string(line) + ":" + std::to_string(n);
  v.detail += ", " + std::to_string(mismatches) + " mismatches, illustrated cases " + std::to_string(fig_ok) + "/3";
  if (!first.empty()) v.detail += "; first mismatch " + first;
  return v;
}

// 4 ---------------------------------------------------------------------------

struct SweepResult {
  long comparisons = 0;
  long mismatches = 0;
  long unreachable = 0;
  std::string first;
};

void sweep_map(const GridGraph& g, const PlannerConfig& cfg, const NodeCost& cost, double turn_cost,
               SweepResult& out) {
  for (int si = 0; si < g.size(); ++si) {
    const Cell s = g.cell(si);
    if (!g.is_free(s)) continue;
    for (Direction sd : kMoveDirections) {
      const auto table = oracle::turn_dijkstra_table(g, s, to_int(sd), turn_cost);
      for (int gi = 0; gi < g.size(); ++gi) {
        const Cell goal = g.cell(gi);
        if (!g.is_free(goal)) continue;
        for (Direction gd : kMoveDirections) {
          const auto want = oracle::goal_cost(g, table, goal, to_int(gd), cfg.turn_wait);
          const RobotState r = RobotState::initial(0, {s, sd}, {goal, gd}, cfg.queue_capacity);
          std::optional<double> got;
          try {
            got = plan_path(g, r, cost, {}, cfg).cost;
          } catch (const UnreachableError&) {
          }
          ++out.comparisons;
          if (!want) ++out.unreachable;
          const bool ok = want.has_value() == got.has_value() && (!want || std::fabs(*want - *got) <= 1e-9);
          if (!ok) {
            ++out.mismatches;
            if (out.first.empty())
              out.first = format_map(g) + " " + to_string(s) + "/" + std::to_string(to_int(sd)) + " -> " +
                          to_string(goal) + "/" + std::to_string(to_int(gd));
          }
        }
      }
    }
  }
}

Verdict planner_reduction() {
  std::vector<std::vector<Cell>> maps{{}};
  for (int a = 0; a < 36; ++a) {
    maps.push_back({{a % 6, a / 6}});
    for (int b = a + 1; b < 36; ++b) {
      maps.push_back({{a % 6, a / 6}, {b % 6, b / 6}});
      for (int c = b + 1; c < 36; ++c) maps.push_back({{a % 6, a / 6}, {b % 6, b / 6}, {c % 6, c / 6}});
    }
  }
  // Default parameters: a heading change while moving costs W + c3 (the
  // traffic term with nobody else around), the final in-place turn W.
  PlannerConfig cfg;
  // Pure move and turn cost.
  PlannerConfig plain = cfg;
  plain.c3 = 0.0;

  const unsigned workers = worker_count();
  std::vector<SweepResult> with_traffic(workers), pure(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t m = w; m < maps.size(); m += workers) {
        const GridGraph g(6, 6, maps[m]);
        const TrafficField field(g, {}, cfg, 0);
        sweep_map(g, cfg, field, cfg.turn_wait + cfg.c3, with_traffic[w]);
        sweep_map(g, plain, ZeroCost{}, plain.turn_wait, pure[w]);
      }
    });
  for (auto& t : pool) t.join();

  SweepResult a, b;
  for (unsigned w = 0; w < workers; ++w) {
    a.comparisons += with_traffic[w].comparisons;
    a.mismatches += with_traffic[w].mismatches;
    a.unreachable += with_traffic[w].unreachable;
    if (a.first.empty()) a.first = with_traffic[w].first;
    b.comparisons += pure[w].comparisons;
    b.mismatches += pure[w].mismatches;
    if (b.first.empty()) b.first = pure[w].first;
  }
  Verdict v;
  v.pass = a.mismatches == 0 && b.mismatches == 0 && maps.size() == 7807;
  v.detail = std::to_string(maps.size()) + " maps, " + std::to_string(a.comparisons) +
             " queries per cost setting (" + std::to_string(a.unreachable) + " unreachable), mismatches " +
             std::to_string(a.mismatches) + " (default) / " + std::to_string(b.mismatches) + " (c3=0)";
  if (!a.first.empty()) v.detail += "; first: " + a.first;
  if (!b.first.empty()) v.detail += "; first: " + b.first;
  return v;
}

// 5 ---------------------------------------------------------------------------

Verdict table_reproduction() {
  ExperimentConfig cfg;
  cfg.runs = kTableRuns;
  cfg.jobs = static_cast<int>(worker_count());
  cfg.regimes = {SpeedRegime::fixed(1.0), SpeedRegime::uniform(0.0, 1.0), SpeedRegime::fixed(0.5)};
  const ResultTable table = run_experiment(cfg);

  std::map<std::pair<Algorithm, std::string>, SummaryRow> cell;
  for (const auto& s : table.summary) cell[{s.algo, s.regime}] = s;
  auto mean = [&](Algorithm a, const std::string& r) { return cell.at({a, r}).mean; };

  std::string detail = "means";
  for (const std::string r : {"1", "0-1", "0.5"}) {
    detail += " [v=" + r + ":";
    for (Algorithm a : all_algorithms()) {
      detail += " " + to_string(a) + "=" + fmt("%.1f", mean(a, r));
      const double fail = cell.at({a, r}).fail_rate;
      if (fail > 0) detail += fmt("(fail %.2f)", fail);
    }
    detail += "]";
  }
  bool ordering = true;
  for (const std::string r : {"1", "0-1"}) {
    const double pa = mean(Algorithm::PA, r), adcc = mean(Algorithm::ADCC, r);
    const double best = std::min(mean(Algorithm::CAStar, r), mean(Algorithm::PBS, r));
    const bool ok = pa <= adcc && adcc < best;
    detail += "; (a) v=" + r + (ok ? " ordered" : " not ordered");
    ordering = ordering && ok;
  }
  const double vs_ca = mean(Algorithm::PA, "1") / mean(Algorithm::CAStar, "1");
  const bool b_ok = vs_ca < kCaStarRatio;
  detail += "; (b) PA/CA* at v=1 = " + fmt("%.3f", vs_ca) + (b_ok ? " ok" : " too high");
  const double slow = mean(Algorithm::PA, "0.5") / mean(Algorithm::PA, "1");
  const bool c_ok = slow >= kSlowRatioLo && slow <= kSlowRatioHi;
  detail += "; (c) PA v=0.5 / v=1 = " + fmt("%.3f", slow) + (c_ok ? " ok" : " outside band");

  Verdict v;
  v.pass = ordering && b_ok && c_ok;
  v.detail = detail;
  return v;
}

// 6 ---------------------------------------------------------------------------

Verdict conflict_postconditions() {
  PlannerConfig cfg;
  int normal = 0, soft = 0, broken = 0, opposite_after_soft = 0;
  double soft_gamma = 0.0;
  std::string first;
  for (int i = 0; i < kConflictInstances; ++i) {
    const Scenario sc = generate_scenario(20, 20, 30, 0.0, derive_seed(2024, "conflict", i));
    const auto states = sc.initial_states(cfg.queue_capacity);
    std::vector<Plan> plans;
    for (const auto& s : states) plans.push_back(plan_against(sc.map, s, plans, {}, cfg, CostModel::Traffic, false));
    const RoundResult out = replan_round(plans, states, cfg, make_replanner(sc.map, {}, cfg, CostModel::Traffic));
    const auto check = detect_all(out.plans, {}, cfg);
    if (out.soft_failure) {
      ++soft;
      soft_gamma += check.gamma;
      opposite_after_soft += check.opposite_count();
      continue;
    }
    ++normal;
    if (check.opposite_count() != 0 || check.gamma > cfg.phi) {
      ++broken;
      if (first.empty()) first = "instance " + std::to_string(i);
    }
  }
  const double rate = static_cast<double>(soft) / kConflictInstances;
  Verdict v;
  v.pass = broken == 0 && rate < kSoftFailureLimit;
  v.detail = std::to_string(normal) + " normal exits (" + std::to_string(broken) +
             " breaking the postconditions), soft-failure rate " + fmt("%.2f", rate) +
             " (limit " + fmt("%.2f", kSoftFailureLimit) + ")";
  if (soft > 0)
    v.detail += "; soft exits: mean gamma " + fmt("%.2f", soft_gamma / soft) + " vs phi " + fmt("%.1f", cfg.phi) +
                ", opposite conflicts left " + std::to_string(opposite_after_soft);
  if (!first.empty()) v.detail += "; first: " + first;
  return v;
}

// 7 ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict determinism(const std::string& bench, const fs::path& work) {
  Verdict v;
  if (bench.empty()) {
    v.pass = false;
    v.detail = "bench executable not given (--bench)";
    return v;
  }
  std::vector<fs::path> dirs{work / "det_a", work / "det_b"};
  const char* jobs[] = {"1", "2"};
  for (int n = 0; n < 2; ++n) {
    fs::remove_all(dirs[n]);
    const std::string cmd = "\"" + bench + "\" run --gen 12x12 --robots 12 --algo all --regime all --runs 3" +
                            " --seed 99 --jobs " + jobs[n] + " --no-wall-clock --quiet --out \"" +
                            dirs[n].string() + "\" --traces \"" + (dirs[n] / "traces").string() + "\" > \"" +
                            (work / ("det_" + std::to_string(n) + ".log")).string() + "\" 2>&1";
    if (std::system(cmd.c_str()) != 0) {
      v.pass = false;
      v.detail = "bench run failed: " + cmd;
      return v;
    }
  }
  int compared = 0, differ = 0;
  std::string first;
  auto compare = [&](const fs::path& a, const fs::path& b) {
    ++compared;
    const std::string x = slurp(a), y = slurp(b);
    if (x.empty() || x != y) {
      ++differ;
      if (first.empty()) first = a.filename().string();
    }
  };
  compare(dirs[0] / "runs.csv", dirs[1] / "runs.csv");
  compare(dirs[0] / "hashes.csv", dirs[1] / "hashes.csv");
  compare(dirs[0] / "summary.csv", dirs[1] / "summary.csv");
  for (const auto& e : fs::directory_iterator(dirs[0] / "traces"))
    compare(e.path(), dirs[1] / "traces" / e.path().filename());
  v.pass = differ == 0 && compared > 3;
  v.detail = std::to_string(compared) + " files compared (runs.csv, hashes.csv, summary.csv, traces; jobs 1 vs 2), " +
             std::to_string(differ) + " differ";
  if (!first.empty()) v.detail += "; first: " + first;
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  std::string bench;
  fs::path work = fs::temp_directory_path() / "whpath_acceptance";
  int only = 0;
  for (int a = 1; a < argc; ++a) {
    const std::string arg = argv[a];
    if (arg == "--bench" && a + 1 < argc) bench = argv[++a];
    else if (arg == "--work" && a + 1 < argc) work = argv[++a];
    else if (arg == "--only" && a + 1 < argc) only = std::atoi(argv[++a]);
    else {
      std::fprintf(stderr, "usage: %s [--bench PATH] [--work DIR] [--only N]\n", argv[0]);
      return 2;
    }
  }
  fs::create_directories(work);

  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"safety", safety},
      {"closed-form oracles", equations},
      {"arbitration truth table", truth_table},
      {"planner reduction", planner_reduction},
      {"make-span table", table_reproduction},
      {"conflict manager", conflict_postconditions},
      {"determinism", [&] { return determinism(bench, work); }},
  };
  bool all = true;
  for (std::size_t n = 0; n < criteria.size(); ++n) {
    if (only != 0 && only != static_cast<int>(n + 1)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[n].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    all = all && v.pass;
    std::printf("criterion %zu %s: %s (%.1f s) %s\n", n + 1, criteria[n].first, v.pass ? "PASS" : "FAIL",
                seconds_since(t0), v.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
