#pragma once

#include <optional>
#include <span>
#include <vector>

#include "whpath/grid.hpp"

namespace whpath {

struct Pose {
  Cell cell;
  Direction dir = Direction::Up;
  friend bool operator==(const Pose&, const Pose&) = default;
};

// Cells a robot currently holds: the head is where it stands, the rest are
// reserved in travel order. Slots past size() are the placeholder.
//
// Construction enforces the queue-local constraints: at least one cell, at
// most `capacity` cells (6), consecutive cells 4-adjacent (5) and no repeated
// cell (4). Violations throw ConstraintViolation.
class PreservedQueue {
 public:
  PreservedQueue(std::vector<Cell> cells, int capacity);

  // Single-cell queue at `head`.
  static PreservedQueue at(Cell head, int capacity) { return PreservedQueue({head}, capacity); }

  int capacity() const noexcept { return capacity_; }
  int size() const noexcept { return static_cast<int>(cells_.size()); }
  bool full() const noexcept { return size() == capacity_; }

  // nullopt is the placeholder.
  std::optional<Cell> slot(int k) const;

  Cell head() const noexcept { return cells_.front(); }
  Cell tail() const noexcept { return cells_.back(); }
  std::span<const Cell> cells() const noexcept { return cells_; }
  bool contains(Cell c) const noexcept;

  // Copy with `extra` appended; the existing prefix is untouched.
  PreservedQueue appended(std::span<const Cell> extra) const;
  // Copy with the head removed. Requires size() > 1.
  PreservedQueue popped() const;

  friend bool operator==(const PreservedQueue&, const PreservedQueue&) = default;

 private:
  std::vector<Cell> cells_;
  int capacity_;
};

int effective_length(const PreservedQueue& queue);

// Queue proposed for one robot after appending; placeholders are implicit
// beyond cells.size(). Deliberately unvalidated so the constraint validator
// can report malformed proposals.
struct Action {
  int robot = 0;
  std::vector<Cell> cells;
};

struct RobotState {
  int id = 0;
  Direction direction = Direction::Up;
  PreservedQueue queue = PreservedQueue::at({0, 0}, 4);
  double phase = 0.0;
  int wait = 0;
  Pose start;
  Pose goal;
  bool done = false;
  // Speed held for the current edge when speeds are sampled per edge;
  // negative when none is held.
  double edge_speed = -1.0;

  Cell position() const noexcept { return queue.head(); }

  static RobotState initial(int id, Pose start, Pose goal, int queue_capacity);
};

// True when the robot stands on its goal cell, faces the goal direction and
// is not mid-move or mid-turn.
bool at_goal(const RobotState& s);

}  // namespace whpath
