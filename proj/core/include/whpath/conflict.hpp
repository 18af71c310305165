#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "whpath/plan.hpp"

namespace whpath {

enum class ConflictKind { Opposite = 0, Following = 1, Crossing = 2 };

const char* to_string(ConflictKind kind);

struct Conflict {
  ConflictKind kind = ConflictKind::Opposite;
  int robot_i = 0;
  int robot_j = 0;
  Cell cell;
  int index_i = 0;
  int index_j = 0;
};

// One robot's passage through a cell as seen by the classifier.
struct Visit {
  int index = 0;
  Direction heading = Direction::Stay;
  std::optional<Cell> prev;
  std::optional<Cell> next;
};

// Kind of conflict between two passages through the same cell: opposite when
// the arrival indices coincide or the two robots swap along one edge at
// adjacent indices; otherwise by entry headings (equal: following, any other:
// crossing).
ConflictKind classify_visits(const Visit& a, const Visit& b);

Visit visit_at(const Plan& plan, int k);

// All conflicts between two plans at shared cells whose arrival indices are
// both within `horizon`. Each shared cell yields exactly one conflict.
std::vector<Conflict> classify_pair(const Plan& plan_i, const Plan& plan_j, int horizon);

struct ConflictReport {
  std::vector<Conflict> conflicts;
  // Indexed by robot id.
  std::vector<int> n_opp;
  std::vector<int> n_fol;
  std::vector<int> n_cross;
  std::vector<double> gamma_i;
  double gamma = 0.0;

  int opposite_count() const;
  // Robot with the most opposite conflicts (lowest id on ties), or -1.
  int worst_opposite() const;
  // Robot with the largest gamma_i (lowest id on ties), or -1 when gamma is 0.
  int worst_gamma() const;
};

// Pairwise classification over every plan whose robot is not in `excluded`
// (robots parked at their goal). Tallies and gamma follow
// gamma_i = delta_fol * n_fol,i + delta_cross * n_cross,i, gamma = max gamma_i.
ConflictReport detect_all(const std::vector<Plan>& plans, const std::vector<int>& excluded,
                          const PlannerConfig& cfg);

}  // namespace whpath
