#include "whpath/conflict.hpp"

#include <algorithm>
#include <cstdlib>
#include <unordered_map>

namespace whpath {

const char* to_string(ConflictKind kind) {
  switch (kind) {
    case ConflictKind::Opposite: return "opposite";
    case ConflictKind::Following: return "following";
    case ConflictKind::Crossing: return "crossing";
  }
  return "?";
}

ConflictKind classify_visits(const Visit& a, const Visit& b) {
  if (a.index == b.index) return ConflictKind::Opposite;
  if (std::abs(a.index - b.index) <= 1) {
    const bool swap_back = a.prev && b.next && *a.prev == *b.next;
    const bool swap_ahead = a.next && b.prev && *a.next == *b.prev;
    if (swap_back || swap_ahead) return ConflictKind::Opposite;
  }
  return a.heading == b.heading ? ConflictKind::Following : ConflictKind::Crossing;
}

Visit visit_at(const Plan& plan, int k) {
  Visit v;
  v.index = k;
  v.heading = plan.headings[k];
  if (k > 0) v.prev = plan.cells[k - 1];
  if (k + 1 < plan.size()) v.next = plan.cells[k + 1];
  return v;
}

std::vector<Conflict> classify_pair(const Plan& plan_i, const Plan& plan_j, int horizon) {
  std::vector<Conflict> out;
  const int li = std::min(plan_i.size(), horizon + 1);
  const int lj = std::min(plan_j.size(), horizon + 1);
  for (int k = 0; k < li; ++k) {
    const Cell c = plan_i.cells[k];
    // First occurrence only, so one shared cell yields one conflict.
    if (std::find(plan_i.cells.begin(), plan_i.cells.begin() + k, c) != plan_i.cells.begin() + k)
      continue;
    for (int g = 0; g < lj; ++g) {
      if (plan_j.cells[g] != c) continue;
      out.push_back({classify_visits(visit_at(plan_i, k), visit_at(plan_j, g)), plan_i.robot,
                     plan_j.robot, c, k, g});
      break;
    }
  }
  return out;
}

int ConflictReport::opposite_count() const {
  int n = 0;
  for (const auto& c : conflicts) n += c.kind == ConflictKind::Opposite ? 1 : 0;
  return n;
}

int ConflictReport::worst_opposite() const {
  int best = -1;
  for (int r = 0; r < static_cast<int>(n_opp.size()); ++r)
    if (n_opp[r] > 0 && (best < 0 || n_opp[r] > n_opp[best])) best = r;
  return best;
}

int ConflictReport::worst_gamma() const {
  int best = -1;
  for (int r = 0; r < static_cast<int>(gamma_i.size()); ++r)
    if (gamma_i[r] > 0.0 && (best < 0 || gamma_i[r] > gamma_i[best])) best = r;
  return best;
}

ConflictReport detect_all(const std::vector<Plan>& plans, const std::vector<int>& excluded,
                          const PlannerConfig& cfg) {
  int max_id = -1;
  for (const auto& p : plans) max_id = std::max(max_id, p.robot);
  ConflictReport report;
  const std::size_t n = static_cast<std::size_t>(max_id + 1);
  report.n_opp.assign(n, 0);
  report.n_fol.assign(n, 0);
  report.n_cross.assign(n, 0);
  report.gamma_i.assign(n, 0.0);

  std::vector<char> skip(n, 0);
  for (int r : excluded)
    if (r >= 0 && r <= max_id) skip[r] = 1;

  // Bucket first visits within the horizon by cell.
  struct Entry {
    std::size_t plan;
    int index;
  };
  std::unordered_map<Cell, std::vector<Entry>> buckets;
  buckets.reserve(plans.size() * (cfg.horizon + 1));
  for (std::size_t p = 0; p < plans.size(); ++p) {
    const Plan& plan = plans[p];
    if (plan.empty() || skip[plan.robot]) continue;
    const int len = std::min(plan.size(), cfg.horizon + 1);
    for (int k = 0; k < len; ++k) {
      auto& bucket = buckets[plan.cells[k]];
      if (!bucket.empty() && bucket.back().plan == p) continue;
      bucket.push_back({p, k});
    }
  }

  for (const auto& [cell, bucket] : buckets) {
    for (std::size_t a = 0; a < bucket.size(); ++a) {
      for (std::size_t b = a + 1; b < bucket.size(); ++b) {
        const Plan& pa = plans[bucket[a].plan];
        const Plan& pb = plans[bucket[b].plan];
        const bool a_first = pa.robot < pb.robot;
        const Plan& pi = a_first ? pa : pb;
        const Plan& pj = a_first ? pb : pa;
        const int ki = a_first ? bucket[a].index : bucket[b].index;
        const int kj = a_first ? bucket[b].index : bucket[a].index;
        report.conflicts.push_back(
            {classify_visits(visit_at(pi, ki), visit_at(pj, kj)), pi.robot, pj.robot, cell, ki, kj});
      }
    }
  }
  std::sort(report.conflicts.begin(), report.conflicts.end(), [](const Conflict& x, const Conflict& y) {
    if (x.robot_i != y.robot_i) return x.robot_i < y.robot_i;
    if (x.robot_j != y.robot_j) return x.robot_j < y.robot_j;
    return x.index_i < y.index_i;
  });

  for (const auto& c : report.conflicts) {
    auto& tally = c.kind == ConflictKind::Opposite ? report.n_opp
                  : c.kind == ConflictKind::Following ? report.n_fol
                                                      : report.n_cross;
    tally[c.robot_i] += 1;
    tally[c.robot_j] += 1;
  }
  for (std::size_t r = 0; r < n; ++r) {
    report.gamma_i[r] = cfg.delta_fol * report.n_fol[r] + cfg.delta_cross * report.n_cross[r];
    report.gamma = std::max(report.gamma, report.gamma_i[r]);
  }
  return report;
}

}  // namespace whpath
