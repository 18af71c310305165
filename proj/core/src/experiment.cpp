#include "whpath/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "whpath/errors.hpp"
#include "whpath/replay.hpp"
#include "whpath/trace.hpp"

namespace whpath {

void ExperimentConfig::validate() const {
  if (algorithms.empty()) throw DomainError("no algorithms selected");
  if (regimes.empty()) throw DomainError("no speed regimes selected");
  if (runs < 1) throw DomainError("runs must be at least 1");
  if (jobs < 1) throw DomainError("jobs must be at least 1");
  if (map_path.empty() && (width <= 0 || height <= 0)) throw DomainError("grid size must be positive");
  if (robots < 0) throw DomainError("robot count must be non-negative");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string full(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  return std::stod(s);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view stream, std::uint64_t a,
                          std::uint64_t b) {
  Fnv1a h;
  h.update(stream);
  std::uint64_t x = splitmix64(master ^ h.digest());
  x = splitmix64(x ^ splitmix64(a + 1));
  x = splitmix64(x ^ splitmix64(b + 0x51ed270b27b1f3c5ULL));
  return x;
}

Scenario experiment_scenario(const ExperimentConfig& cfg, int run) {
  const std::uint64_t seed = derive_seed(cfg.seed, "scenario", cfg.per_run_scenarios ? run : 0);
  if (!cfg.map_path.empty()) return place_robots(load_map(cfg.map_path), cfg.robots, seed);
  return generate_scenario(cfg.width, cfg.height, cfg.robots, cfg.density, seed, cfg.layout);
}

std::uint64_t run_seed(const ExperimentConfig& cfg, const SpeedRegime& regime, int run) {
  Fnv1a h;
  h.update(regime.name());
  return derive_seed(cfg.seed, "run", h.digest(), static_cast<std::uint64_t>(run));
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<SummaryRow> summarize(const std::vector<RunRow>& runs,
                                  const std::vector<Algorithm>& algorithms,
                                  const std::vector<std::string>& regimes) {
  std::vector<SummaryRow> out;
  for (Algorithm algo : algorithms) {
    for (const auto& regime : regimes) {
      SummaryRow row;
      row.algo = algo;
      row.regime = regime;
      std::vector<double> spans;
      int failed = 0;
      for (const auto& r : runs) {
        if (r.algo != algo || r.regime != regime) continue;
        ++row.runs;
        if (r.makespan && r.violations == 0)
          spans.push_back(*r.makespan);
        else
          ++failed;
      }
      if (row.runs == 0) continue;
      const double nan = std::numeric_limits<double>::quiet_NaN();
      double sum = 0.0;
      for (double v : spans) sum += v;
      row.mean = spans.empty() ? nan : sum / static_cast<double>(spans.size());
      row.median = quantile(spans, 0.5);
      row.q1 = quantile(spans, 0.25);
      row.q3 = quantile(spans, 0.75);
      row.min = spans.empty() ? nan : *std::min_element(spans.begin(), spans.end());
      row.max = spans.empty() ? nan : *std::max_element(spans.begin(), spans.end());
      row.fail_rate = static_cast<double>(failed) / static_cast<double>(row.runs);
      out.push_back(row);
    }
  }
  return out;
}

namespace {

std::string trace_name(Algorithm algo, const std::string& regime, int run) {
  return to_string(algo) + "_" + regime + "_" + std::to_string(run) + ".trace";
}

RunRow execute(const ExperimentConfig& cfg, const std::vector<Scenario>& scenarios, Algorithm algo,
               const SpeedRegime& regime, int run, const std::string& trace_path) {
  RunRow row;
  row.algo = algo;
  row.regime = regime.name();
  row.run = run;
  row.seed = run_seed(cfg, regime, run);
  const Scenario& scenario = scenarios[cfg.per_run_scenarios ? run : 0];
  SimOptions sim = cfg.sim;
  sim.regime = regime;

  std::ofstream file;
  if (!trace_path.empty()) {
    file.open(trace_path);
    if (!file) throw Error("cannot write trace " + trace_path);
  }
  TraceWriter writer(trace_path.empty() ? nullptr : &file);
  write_run_header(writer, RunSetup{scenario, algo, sim, row.seed});

  const auto t0 = std::chrono::steady_clock::now();
  const RunOutcome outcome = simulate(scenario, algo, sim, row.seed, &writer);
  row.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  row.makespan = outcome.makespan;
  row.timeout = !outcome.makespan.has_value();
  row.trace_hash = outcome.trace_hash;
  row.violations = outcome.violations;
  row.stats = outcome.stats;
  if (outcome.violations > 0) {
    std::string dump;
    if (!cfg.trace_dir.empty() && trace_path.empty()) {
      dump = (std::filesystem::path(cfg.trace_dir) / ("violation_" + trace_name(algo, row.regime, run))).string();
      execute(cfg, scenarios, algo, regime, run, dump);
    }
    throw SafetyError("constraint violation in " + to_string(algo) + " regime " + row.regime +
                      " run " + std::to_string(run) + ": " + outcome.failure +
                      (dump.empty() ? trace_path.empty() ? "" : " (trace " + trace_path + ")"
                                    : " (trace " + dump + ")"));
  }
  return row;
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig& cfg, const Progress& progress) {
  cfg.validate();
  std::vector<Scenario> scenarios;
  const int scenario_count = cfg.per_run_scenarios ? cfg.runs : 1;
  for (int r = 0; r < scenario_count; ++r) scenarios.push_back(experiment_scenario(cfg, r));
  if (!cfg.trace_dir.empty()) std::filesystem::create_directories(cfg.trace_dir);

  struct Job {
    Algorithm algo;
    SpeedRegime regime;
    int run;
  };
  std::vector<Job> jobs;
  for (Algorithm a : cfg.algorithms)
    for (const auto& reg : cfg.regimes)
      for (int r = 0; r < cfg.runs; ++r) jobs.push_back({a, reg, r});

  std::vector<RunRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (failure) return;
      }
      try {
        const Job& job = jobs[i];
        const std::string path =
            cfg.trace_dir.empty()
                ? std::string()
                : (std::filesystem::path(cfg.trace_dir) / trace_name(job.algo, job.regime.name(), job.run)).string();
        rows[i] = execute(cfg, scenarios, job.algo, job.regime, job.run, path);
        if (progress) {
          std::lock_guard<std::mutex> lock(mu);
          progress(rows[i]);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  const int threads = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(jobs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  ResultTable table;
  table.runs = std::move(rows);
  std::vector<std::string> regime_names;
  for (const auto& reg : cfg.regimes) regime_names.push_back(reg.name());
  table.summary = summarize(table.runs, cfg.algorithms, regime_names);
  return table;
}

std::string format_runs_csv(const std::vector<RunRow>& runs, bool wall_clock) {
  std::ostringstream out;
  out << "algo,regime,seed,makespan,timeout,wall_s\n";
  for (const auto& r : runs) {
    out << to_string(r.algo) << ',' << r.regime << ',' << r.seed << ','
        << (r.makespan ? std::to_string(*r.makespan) : std::string()) << ',' << (r.timeout ? 1 : 0)
        << ',' << (wall_clock ? full(r.wall_s) : std::string("0")) << '\n';
  }
  return out.str();
}

std::string format_summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "algo,regime,mean,median,q1,q3,min,max,fail_rate\n";
  for (const auto& r : rows)
    out << to_string(r.algo) << ',' << r.regime << ',' << full(r.mean) << ',' << full(r.median) << ','
        << full(r.q1) << ',' << full(r.q3) << ',' << full(r.min) << ',' << full(r.max) << ','
        << full(r.fail_rate) << '\n';
  return out.str();
}

std::string format_hashes_csv(const std::vector<RunRow>& runs) {
  std::ostringstream out;
  out << "algo,regime,seed,trace_hash\n";
  for (const auto& r : runs)
    out << to_string(r.algo) << ',' << r.regime << ',' << r.seed << ',' << r.trace_hash << '\n';
  return out.str();
}

std::vector<RunRow> parse_runs_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<RunRow> out;
  if (!std::getline(in, line)) return out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 6) throw Error("runs csv: expected 6 fields in '" + line + "'");
    RunRow r;
    r.algo = parse_algorithm(f[0]);
    r.regime = f[1];
    r.seed = std::stoull(f[2]);
    if (!f[3].empty()) r.makespan = std::stoi(f[3]);
    r.timeout = f[4] == "1";
    r.wall_s = parse_double(f[5]);
    out.push_back(r);
  }
  return out;
}

std::vector<SummaryRow> parse_summary_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<SummaryRow> out;
  if (!std::getline(in, line)) return out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 9) throw Error("summary csv: expected 9 fields in '" + line + "'");
    SummaryRow r;
    r.algo = parse_algorithm(f[0]);
    r.regime = f[1];
    r.mean = parse_double(f[2]);
    r.median = parse_double(f[3]);
    r.q1 = parse_double(f[4]);
    r.q3 = parse_double(f[5]);
    r.min = parse_double(f[6]);
    r.max = parse_double(f[7]);
    r.fail_rate = parse_double(f[8]);
    out.push_back(r);
  }
  return out;
}

void emit_results(const ResultTable& table, const std::string& dir, bool wall_clock) {
  if (table.runs.empty()) throw DomainError("no results to emit");
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& body) {
    const auto path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << body;
    if (!out) throw Error("failed writing " + path);
  };
  write("runs.csv", format_runs_csv(table.runs, wall_clock));
  write("summary.csv", format_summary_csv(table.summary));
  write("hashes.csv", format_hashes_csv(table.runs));
}

}  // namespace whpath
