#include "whpath/plan.hpp"

#include "whpath/errors.hpp"

namespace whpath {

void PlannerConfig::validate() const {
  for (double z : zeta)
    if (!(z > 0.0)) throw DomainError("zeta values must be positive");
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  if (!(c1 > 1.0)) throw DomainError("c1 must exceed 1");
  if (!(c2 > 0.0)) throw DomainError("c2 must be positive");
  if (!(c3 >= 0.0)) throw DomainError("c3 must be non-negative");
  if (turn_wait < 0) throw DomainError("turn wait must be non-negative");
  if (queue_capacity <= 2) throw DomainError("queue capacity must exceed 2");
  if (!(delta_fol > 0.0) || !(delta_cross > 0.0)) throw DomainError("conflict weights must be positive");
  if (horizon < 0) throw DomainError("horizon must be non-negative");
  if (!(phi >= 0.0)) throw DomainError("phi must be non-negative");
  if (m_cap < 0) throw DomainError("m_cap must be non-negative");
}

Plan Plan::from_cells(int robot, std::vector<Cell> cells, Direction initial_heading) {
  Plan p;
  p.robot = robot;
  p.headings.reserve(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k)
    p.headings.push_back(k == 0 ? initial_heading : direction_between(cells[k - 1], cells[k]));
  p.cells = std::move(cells);
  return p;
}

void Plan::pop_front() {
  if (cells.size() <= 1) throw DomainError("cannot pop the last plan cell");
  cells.erase(cells.begin());
  headings.erase(headings.begin());
}

double move_turn_cost(const Plan& plan, Direction goal_dir, int turn_wait) {
  double cost = 0.0;
  for (int k = 1; k < plan.size(); ++k) {
    cost += 1.0;
    if (plan.headings[k] != plan.headings[k - 1]) cost += turn_wait;
  }
  if (!plan.empty() && plan.headings.back() != goal_dir) cost += turn_wait;
  return cost;
}

}  // namespace whpath
