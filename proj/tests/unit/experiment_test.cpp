#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "whpath/experiment.hpp"
#include "whpath/replay.hpp"

using namespace whpath;

TEST(Scenario, ThirtyByThirtyEightyRobots) {
  const Scenario sc = generate_scenario(30, 30, 80, 0.0, 7);
  ASSERT_EQ(sc.robots.size(), 80u);
  std::set<Cell> starts, goals;
  for (const auto& r : sc.robots) {
    starts.insert(r.start.cell);
    goals.insert(r.goal.cell);
    EXPECT_TRUE(sc.map.is_free(r.start.cell));
    EXPECT_TRUE(sc.map.is_free(r.goal.cell));
  }
  EXPECT_EQ(starts.size(), 80u);
  EXPECT_EQ(goals.size(), 80u);
  EXPECT_NO_THROW(sc.validate());
}

TEST(Scenario, EmptyAndDeterministic) {
  EXPECT_TRUE(generate_scenario(10, 10, 0, 0.0, 3).robots.empty());
  const Scenario a = generate_scenario(12, 12, 10, 0.15, 42);
  const Scenario b = generate_scenario(12, 12, 10, 0.15, 42);
  EXPECT_EQ(a.map, b.map);
  ASSERT_EQ(a.robots.size(), b.robots.size());
  for (std::size_t r = 0; r < a.robots.size(); ++r) {
    EXPECT_EQ(a.robots[r].start, b.robots[r].start);
    EXPECT_EQ(a.robots[r].goal, b.robots[r].goal);
  }
  EXPECT_THROW(generate_scenario(3, 3, 20, 0.0, 1), Error);
}

TEST(Scenario, ShelvesLayout) {
  const Scenario sc = generate_scenario(20, 14, 12, 0.0, 9, Layout::Shelves);
  EXPECT_GT(static_cast<int>(sc.map.blocked_cells().size()), 0);
  EXPECT_NO_THROW(sc.validate());
}

TEST(Seeds, SplitIsStable) {
  EXPECT_EQ(derive_seed(1, "run", 2, 3), derive_seed(1, "run", 2, 3));
  EXPECT_NE(derive_seed(1, "run", 2, 3), derive_seed(1, "run", 3, 2));
  EXPECT_NE(derive_seed(1, "run", 2, 3), derive_seed(1, "scenario", 2, 3));
  EXPECT_NE(derive_seed(1, "run", 2, 3), derive_seed(2, "run", 2, 3));
}

TEST(Quantile, LinearInterpolation) {
  EXPECT_DOUBLE_EQ(quantile({4, 1, 3, 2}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({4, 1, 3, 2}, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile({7}, 0.75), 7.0);
}

TEST(Summary, MeanMatchesOnePassOracle) {
  std::vector<RunRow> rows;
  const int values[] = {120, 97, 133, 140, 101, 99, 150};
  for (int n = 0; n < 7; ++n) {
    RunRow r;
    r.algo = Algorithm::PA;
    r.regime = "1";
    r.run = n;
    r.makespan = values[n];
    rows.push_back(r);
  }
  RunRow dead;
  dead.algo = Algorithm::PA;
  dead.regime = "1";
  dead.run = 7;
  dead.timeout = true;
  rows.push_back(dead);

  const auto s = summarize(rows, {Algorithm::PA}, {"1"});
  ASSERT_EQ(s.size(), 1u);
  double mean = 0.0;
  int n = 0;
  for (const auto& r : rows)
    if (r.makespan) mean += (*r.makespan - mean) / ++n;
  EXPECT_NEAR(s[0].mean, mean, 1e-12 * mean);
  EXPECT_DOUBLE_EQ(s[0].min, 97);
  EXPECT_DOUBLE_EQ(s[0].max, 150);
  EXPECT_DOUBLE_EQ(s[0].median, 120);
  EXPECT_DOUBLE_EQ(s[0].fail_rate, 1.0 / 8.0);
  EXPECT_EQ(s[0].runs, 8);
}

TEST(Summary, AllTimeoutsGiveNan) {
  RunRow r;
  r.timeout = true;
  r.regime = "0.5";
  const auto s = summarize({r}, {Algorithm::PA}, {"0.5"});
  EXPECT_TRUE(std::isnan(s[0].mean));
  EXPECT_DOUBLE_EQ(s[0].fail_rate, 1.0);
}

TEST(Experiment, CardinalityAndCsvRoundTrip) {
  ExperimentConfig cfg;
  cfg.width = 8;
  cfg.height = 8;
  cfg.robots = 5;
  cfg.runs = 15;
  cfg.algorithms = {Algorithm::PA};
  cfg.regimes = {SpeedRegime::fixed(1.0)};
  const auto table = run_experiment(cfg);
  ASSERT_EQ(table.runs.size(), 15u);
  ASSERT_EQ(table.summary.size(), 1u);
  for (int n = 0; n < 15; ++n) EXPECT_EQ(table.runs[n].run, n);

  const auto back = parse_runs_csv(format_runs_csv(table.runs));
  ASSERT_EQ(back.size(), table.runs.size());
  for (std::size_t r = 0; r < back.size(); ++r) {
    EXPECT_EQ(back[r].algo, table.runs[r].algo);
    EXPECT_EQ(back[r].regime, table.runs[r].regime);
    EXPECT_EQ(back[r].seed, table.runs[r].seed);
    EXPECT_EQ(back[r].makespan, table.runs[r].makespan);
    EXPECT_EQ(back[r].timeout, table.runs[r].timeout);
    EXPECT_EQ(back[r].wall_s, table.runs[r].wall_s);
  }
  const auto sum = parse_summary_csv(format_summary_csv(table.summary));
  ASSERT_EQ(sum.size(), 1u);
  EXPECT_EQ(sum[0].mean, table.summary[0].mean);
  EXPECT_EQ(sum[0].q1, table.summary[0].q1);
  EXPECT_EQ(sum[0].q3, table.summary[0].q3);
  EXPECT_EQ(sum[0].fail_rate, table.summary[0].fail_rate);
}

TEST(Experiment, EmptyFiltersRejected) {
  ExperimentConfig cfg;
  cfg.regimes.clear();
  EXPECT_THROW(cfg.validate(), Error);
  EXPECT_THROW(run_experiment(cfg), Error);
  ExperimentConfig none;
  none.algorithms.clear();
  EXPECT_THROW(none.validate(), Error);
}

TEST(Experiment, SeedsDoNotDependOnAlgorithm) {
  ExperimentConfig cfg;
  cfg.width = 6;
  cfg.height = 6;
  cfg.robots = 3;
  cfg.runs = 2;
  cfg.regimes = {SpeedRegime::uniform(0.5, 1.0)};
  const auto table = run_experiment(cfg);
  ASSERT_EQ(table.runs.size(), 8u);
  for (std::size_t r = 2; r < table.runs.size(); ++r) EXPECT_EQ(table.runs[r].seed, table.runs[r % 2].seed);
}

TEST(Trace, RecordRoundTrip) {
  RobotState s = RobotState::initial(3, {{2, 1}, Direction::Left}, {{0, 0}, Direction::Up}, 4);
  s.queue = PreservedQueue({{2, 1}, {1, 1}, {0, 1}}, 4);
  s.phase = 1.0 / 3.0;
  s.wait = 1;
  const auto rec = parse_trace_line(format_trace_line(17, s));
  EXPECT_EQ(rec.t, 17);
  EXPECT_EQ(rec.robot, 3);
  EXPECT_EQ(rec.cell, (Cell{2, 1}));
  EXPECT_EQ(rec.dir, Direction::Left);
  EXPECT_EQ(rec.phase, 1.0 / 3.0);
  EXPECT_EQ(rec.wait, 1);
  EXPECT_EQ(rec.queue, (std::vector<Cell>{{2, 1}, {1, 1}, {0, 1}}));
}

TEST(Trace, ReplayIsIdenticalAndValidates) {
  for (Algorithm algo : all_algorithms()) {
    RunSetup setup;
    setup.scenario = generate_scenario(9, 9, 7, 0.1, 21);
    setup.algo = algo;
    setup.options.regime = SpeedRegime::uniform(0.0, 1.0);
    setup.options.max_ticks = 3000;
    setup.seed = 77;
    std::ostringstream text;
    TraceWriter writer(&text);
    write_run_header(writer, setup);
    const auto outcome = simulate(setup.scenario, algo, setup.options, setup.seed, &writer);
    EXPECT_EQ(outcome.trace_hash, writer.hash_hex());

    std::istringstream in(text.str());
    const TraceFile file = read_trace(in);
    EXPECT_EQ(trace_hash(file), outcome.trace_hash);
    const RunSetup back = read_run_header(file);
    EXPECT_EQ(back.seed, setup.seed);
    EXPECT_EQ(back.algo, algo);
    EXPECT_EQ(back.scenario.map, setup.scenario.map);

    const auto report = replay_trace(file);
    EXPECT_TRUE(report.identical()) << to_string(algo) << " mismatch at " << report.first_mismatch;
    EXPECT_TRUE(validate_trace(file).empty()) << to_string(algo);
  }
}

TEST(Trace, ValidatorCatchesTampering) {
  RunSetup setup;
  setup.scenario = generate_scenario(6, 6, 3, 0.0, 4);
  setup.options.regime = SpeedRegime::fixed(1.0);
  setup.seed = 1;
  std::ostringstream text;
  TraceWriter writer(&text);
  write_run_header(writer, setup);
  simulate(setup.scenario, setup.algo, setup.options, setup.seed, &writer);
  std::istringstream in(text.str());
  TraceFile file = read_trace(in);
  ASSERT_GT(file.records.size(), 6u);
  // Teleport one robot onto another's cell.
  file.records[4].queue = file.records[3].queue;
  file.records[4].cell = file.records[3].cell;
  EXPECT_FALSE(validate_trace(file).empty());
  EXPECT_FALSE(replay_trace(file).identical());
}
