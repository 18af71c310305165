#include <benchmark/benchmark.h>

#include "whpath/planner.hpp"
#include "whpath/replan.hpp"
#include "whpath/scenario.hpp"
#include "whpath/scheduler.hpp"
#include "whpath/simulation.hpp"

using namespace whpath;

namespace {

struct Fleet {
  Scenario scenario;
  std::vector<RobotState> states;
  std::vector<Plan> plans;
  PlannerConfig cfg;

  explicit Fleet(int side, int robots, std::uint64_t seed = 3)
      : scenario(generate_scenario(side, side, robots, 0.0, seed)),
        states(scenario.initial_states(4)) {
    for (const auto& s : states)
      plans.push_back(plan_against(scenario.map, s, plans, {}, cfg, CostModel::Traffic, false));
  }
};

const Fleet& fleet() {
  static const Fleet f(30, 80);
  return f;
}

}  // namespace

static void BM_PlanPathEmpty(benchmark::State& st) {
  const GridGraph g(static_cast<int>(st.range(0)), static_cast<int>(st.range(0)));
  const auto r = RobotState::initial(0, {{0, 0}, Direction::Up}, {{g.width() - 1, g.height() - 1}, Direction::Left}, 4);
  PlannerConfig cfg;
  for (auto _ : st) benchmark::DoNotOptimize(plan_path(g, r, ZeroCost{}, {}, cfg));
}
BENCHMARK(BM_PlanPathEmpty)->Arg(10)->Arg(30)->Arg(60);

static void BM_PlanPathTraffic(benchmark::State& st) {
  const Fleet& f = fleet();
  const TrafficField field(f.scenario.map, f.plans, f.cfg, 0);
  for (auto _ : st) benchmark::DoNotOptimize(plan_path(f.scenario.map, f.states[0], field, {}, f.cfg));
}
BENCHMARK(BM_PlanPathTraffic);

static void BM_TrafficFieldBuild(benchmark::State& st) {
  const Fleet& f = fleet();
  for (auto _ : st) benchmark::DoNotOptimize(TrafficField(f.scenario.map, f.plans, f.cfg, 0));
}
BENCHMARK(BM_TrafficFieldBuild);

static void BM_DetectAll(benchmark::State& st) {
  const Fleet& f = fleet();
  for (auto _ : st) benchmark::DoNotOptimize(detect_all(f.plans, {}, f.cfg));
}
BENCHMARK(BM_DetectAll);

static void BM_ReplanRound(benchmark::State& st) {
  const Fleet f(20, 30, 5);
  const auto replanner = make_replanner(f.scenario.map, {}, f.cfg, CostModel::Traffic);
  for (auto _ : st) benchmark::DoNotOptimize(replan_round(f.plans, f.states, f.cfg, replanner));
}
BENCHMARK(BM_ReplanRound)->Unit(benchmark::kMillisecond);

static void BM_FillQueues(benchmark::State& st) {
  const Fleet& f = fleet();
  Rng rng(1);
  for (auto _ : st) benchmark::DoNotOptimize(fill_queues(f.states, f.plans, f.cfg, rng));
}
BENCHMARK(BM_FillQueues);

static void BM_StepWorld(benchmark::State& st) {
  const Fleet& f = fleet();
  Rng rng(1);
  const auto actions = fill_queues(f.states, f.plans, f.cfg, rng);
  const auto regime = SpeedRegime::uniform(0.0, 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(step_world(f.states, actions, regime, rng, f.cfg.turn_wait));
}
BENCHMARK(BM_StepWorld);

static void BM_Simulate(benchmark::State& st) {
  const Algorithm algo = all_algorithms()[static_cast<std::size_t>(st.range(0))];
  st.SetLabel(to_string(algo));
  const Scenario sc = generate_scenario(10, 10, 10, 0.0, 8);
  SimOptions opt;
  for (auto _ : st) benchmark::DoNotOptimize(simulate(sc, algo, opt, 1));
}
BENCHMARK(BM_Simulate)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
