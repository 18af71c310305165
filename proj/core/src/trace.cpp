#include "whpath/trace.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "whpath/errors.hpp"

namespace whpath {

namespace {

std::string format_phase(double phase) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", phase);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

int to_int_field(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(std::string("trace: bad ") + what + " '" + s + "'");
}

std::string record_line(const TraceRecord& r) {
  std::string line = std::to_string(r.t) + "," + std::to_string(r.robot) + "," +
                     std::to_string(r.cell.x) + "," + std::to_string(r.cell.y) + "," +
                     std::to_string(to_int(r.dir)) + "," + format_phase(r.phase) + "," +
                     std::to_string(r.wait) + ",";
  for (std::size_t k = 0; k < r.queue.size(); ++k) {
    if (k) line += ';';
    line += std::to_string(r.queue[k].x) + ":" + std::to_string(r.queue[k].y);
  }
  return line;
}

}  // namespace

std::string format_trace_line(int t, const RobotState& s) {
  TraceRecord r{t, s.id, s.position(), s.direction, s.phase, s.wait,
                std::vector<Cell>(s.queue.cells().begin(), s.queue.cells().end())};
  return record_line(r);
}

TraceRecord parse_trace_line(const std::string& line) {
  const auto f = split(line, ',');
  if (f.size() != 8) throw Error("trace: expected 8 fields in '" + line + "'");
  TraceRecord r;
  r.t = to_int_field(f[0], "t");
  r.robot = to_int_field(f[1], "robot");
  r.cell = {to_int_field(f[2], "x"), to_int_field(f[3], "y")};
  r.dir = direction_from_int(to_int_field(f[4], "dir"));
  try {
    r.phase = std::stod(f[5]);
  } catch (const std::exception&) {
    throw Error("trace: bad phase '" + f[5] + "'");
  }
  r.wait = to_int_field(f[6], "wait");
  if (!f[7].empty()) {
    for (const auto& cell : split(f[7], ';')) {
      const auto xy = split(cell, ':');
      if (xy.size() != 2) throw Error("trace: bad queue cell '" + cell + "'");
      r.queue.push_back({to_int_field(xy[0], "queue x"), to_int_field(xy[1], "queue y")});
    }
  }
  return r;
}

void Fnv1a::update(std::string_view bytes) noexcept {
  for (unsigned char c : bytes) {
    h_ ^= c;
    h_ *= 0x100000001b3ULL;
  }
}

std::string Fnv1a::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
  return buf;
}

void TraceWriter::header(const std::string& key, const std::string& value) {
  if (sink_) *sink_ << "# " << key << '=' << value << '\n';
}

void TraceWriter::snapshot(int t, const std::vector<RobotState>& states) {
  for (const RobotState& s : states) {
    std::string line = format_trace_line(t, s);
    line.push_back('\n');
    hash_.update(line);
    if (sink_) *sink_ << line;
  }
}

std::optional<std::string> TraceFile::header_value(const std::string& key) const {
  for (const auto& [k, v] : header)
    if (k == key) return v;
  return std::nullopt;
}

TraceFile read_trace(std::istream& in) {
  TraceFile out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto body = line.substr(line.find_first_not_of("# "));
      const auto eq = body.find('=');
      if (eq == std::string::npos)
        out.header.emplace_back(body, "");
      else
        out.header.emplace_back(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    out.records.push_back(parse_trace_line(line));
  }
  return out;
}

TraceFile load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open trace file " + path);
  return read_trace(in);
}

std::string trace_hash(const TraceFile& trace) {
  Fnv1a h;
  for (const auto& r : trace.records) {
    std::string line = record_line(r);
    line.push_back('\n');
    h.update(line);
  }
  return h.hex();
}

}  // namespace whpath
