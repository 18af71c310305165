#include "whpath/robot.hpp"

#include <algorithm>
#include <string>

#include "whpath/errors.hpp"

namespace whpath {

PreservedQueue::PreservedQueue(std::vector<Cell> cells, int capacity)
    : cells_(std::move(cells)), capacity_(capacity) {
  if (capacity_ <= 2) throw DomainError("queue capacity must exceed 2");
  if (cells_.empty()) throw ConstraintViolation(2, "queue has no head cell");
  if (size() > capacity_)
    throw ConstraintViolation(6, "queue length " + std::to_string(size()) + " exceeds " +
                                     std::to_string(capacity_));
  for (std::size_t l = 0; l + 1 < cells_.size(); ++l) {
    if (manhattan(cells_[l], cells_[l + 1]) != 1 && cells_[l] != cells_[l + 1])
      throw ConstraintViolation(5, "no edge between " + to_string(cells_[l]) + " and " +
                                       to_string(cells_[l + 1]));
  }
  for (std::size_t l = 0; l < cells_.size(); ++l)
    for (std::size_t k = l + 1; k < cells_.size(); ++k)
      if (cells_[l] == cells_[k])
        throw ConstraintViolation(4, "cell " + to_string(cells_[l]) + " repeated in queue");
}

std::optional<Cell> PreservedQueue::slot(int k) const {
  if (k < 0 || k >= capacity_) throw DomainError("queue slot index out of range");
  if (k < size()) return cells_[k];
  return std::nullopt;
}

bool PreservedQueue::contains(Cell c) const noexcept {
  return std::find(cells_.begin(), cells_.end(), c) != cells_.end();
}

PreservedQueue PreservedQueue::appended(std::span<const Cell> extra) const {
  std::vector<Cell> next(cells_);
  next.insert(next.end(), extra.begin(), extra.end());
  return PreservedQueue(std::move(next), capacity_);
}

PreservedQueue PreservedQueue::popped() const {
  if (size() <= 1) throw DomainError("cannot pop the only cell of a queue");
  return PreservedQueue(std::vector<Cell>(cells_.begin() + 1, cells_.end()), capacity_);
}

int effective_length(const PreservedQueue& queue) { return queue.size(); }

RobotState RobotState::initial(int id, Pose start, Pose goal, int queue_capacity) {
  RobotState s;
  s.id = id;
  s.direction = start.dir;
  s.queue = PreservedQueue::at(start.cell, queue_capacity);
  s.start = start;
  s.goal = goal;
  s.done = at_goal(s);
  return s;
}

bool at_goal(const RobotState& s) {
  return s.queue.size() == 1 && s.queue.head() == s.goal.cell && s.direction == s.goal.dir &&
         s.wait == 0 && s.phase == 0.0;
}

}  // namespace whpath
