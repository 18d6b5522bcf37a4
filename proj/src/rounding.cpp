#include "corrclust/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corrclust {

void RoundingParams::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (r < 2) throw std::invalid_argument("lift order must be at least 2");
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  if (depth < -1) throw std::invalid_argument("depth must be -1 or nonnegative");
}

BudgetLedger::BudgetLedger(int n)
    : n_(n),
      pair_done_(pair_count(n), 0),
      pair_cost_(pair_count(n), 0.0),
      vertex_done_(n, 0) {}

void BudgetLedger::release_pair(Vertex u, Vertex v, double lp_budget, double error_budget, double cost) {
  const auto i = pair_index(n_, u, v);
  if (pair_done_[i]) throw std::logic_error("pair " + std::to_string(u) + "," + std::to_string(v) + " released twice");
  pair_done_[i] = 1;
  pair_cost_[i] = cost;
  ++released_pairs_;
  totals_.lp += lp_budget;
  totals_.error += error_budget;
  cost_ += cost;
}

void BudgetLedger::release_vertex(Vertex v, double difference_budget) {
  if (vertex_done_[v]) throw std::logic_error("vertex " + std::to_string(v) + " released twice");
  vertex_done_[v] = 1;
  ++released_vertices_;
  totals_.difference += difference_budget;
}

double RoundingReport::mean_cost() const {
  if (trials.empty()) return static_cast<double>(cost);
  double s = 0.0;
  for (const auto& t : trials) s += static_cast<double>(t.cost);
  return s / static_cast<double>(trials.size());
}

double RoundingReport::ledger_gap() const {
  double gap = 0.0;
  for (const auto& t : trials)
    gap = std::max({gap, std::abs(t.released.lp - ceiling.lp), std::abs(t.released.error - ceiling.error),
                    std::abs(t.released.difference - ceiling.difference)});
  return gap;
}

bool RoundingReport::ledger_complete(int n) const {
  return std::all_of(trials.begin(), trials.end(), [&](const TrialSummary& t) {
    return t.released_pairs == pair_count(n) && t.released_vertices == n;
  });
}

}  // namespace corrclust
