#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "whpath/scenario.hpp"
#include "whpath/simulation.hpp"
#include "whpath/trace.hpp"

namespace whpath {

// Everything needed to reproduce one run.
struct RunSetup {
  Scenario scenario;
  Algorithm algo = Algorithm::PA;
  SimOptions options;
  std::uint64_t seed = 0;
};

// Writes the setup as "# key=value" trace header lines.
void write_run_header(TraceWriter& writer, const RunSetup& setup);
// Inverse of write_run_header. Throws Error when a key is missing or malformed.
RunSetup read_run_header(const TraceFile& trace);

struct ReplayReport {
  std::string recorded_hash;
  std::string replayed_hash;
  // Index of the first record that differs, or -1.
  long first_mismatch = -1;
  RunOutcome outcome;

  bool identical() const noexcept { return first_mismatch < 0 && recorded_hash == replayed_hash; }
};

// Re-runs the recorded setup and compares the result record by record.
ReplayReport replay_trace(const TraceFile& trace);

// Re-checks a recorded trace without re-simulating: per tick the queues must
// be valid and pairwise disjoint, and each queue must be a prefix-preserving
// extension of the previous one, possibly with the head popped.
// Returns one message per problem.
std::vector<std::string> validate_trace(const TraceFile& trace);

}  // namespace whpath
