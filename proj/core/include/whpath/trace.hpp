#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "whpath/robot.hpp"

namespace whpath {

// One line of a trace file: "t,robot,x,y,dir,phase,wait,queue" where queue is
// the real queue cells as "x:y" joined by ';'. Phase is printed with 17
// significant digits so a trace round-trips exactly.
struct TraceRecord {
  int t = 0;
  int robot = 0;
  Cell cell;
  Direction dir = Direction::Up;
  double phase = 0.0;
  int wait = 0;
  std::vector<Cell> queue;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

std::string format_trace_line(int t, const RobotState& s);
TraceRecord parse_trace_line(const std::string& line);

// 64-bit FNV-1a, used for trace fingerprints.
class Fnv1a {
 public:
  void update(std::string_view bytes) noexcept;
  std::uint64_t digest() const noexcept { return h_; }
  std::string hex() const;

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

// Streams trace lines to an optional sink while maintaining their hash.
// Lines starting with '#' are metadata and are not hashed.
class TraceWriter {
 public:
  explicit TraceWriter(std::ostream* sink = nullptr) : sink_(sink) {}

  void header(const std::string& key, const std::string& value);
  void snapshot(int t, const std::vector<RobotState>& states);

  std::uint64_t hash() const noexcept { return hash_.digest(); }
  std::string hash_hex() const { return hash_.hex(); }

 private:
  std::ostream* sink_;
  Fnv1a hash_;
};

struct TraceFile {
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<TraceRecord> records;

  std::optional<std::string> header_value(const std::string& key) const;
};

TraceFile read_trace(std::istream& in);
TraceFile load_trace(const std::string& path);

// Hash of the record lines exactly as the writer would produce them.
std::string trace_hash(const TraceFile& trace);

}  // namespace whpath
