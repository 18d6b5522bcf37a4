#pragma once

// Types shared by the set-based and pivot-based roundings.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "corrclust/core.hpp"
#include "corrclust/lp/relaxations.hpp"

namespace corrclust {

inline constexpr double kDefaultEpsilon = 0.05;
inline constexpr int kDefaultTrials = 32;

struct RoundingParams {
  double epsilon = kDefaultEpsilon;
  int r = lp::kDefaultSetOrder;
  int trials = kDefaultTrials;
  std::uint64_t seed = 1;
  // Seed levels of correlated rounding; -1 takes the deepest the lift allows.
  int depth = -1;

  // Throws std::invalid_argument unless epsilon > 0, r >= 2, trials >= 1.
  void validate() const;
};

struct BudgetTotals {
  double lp = 0.0;
  double error = 0.0;
  double difference = 0.0;
  double total() const { return lp + error + difference; }
};

// Budget released by one rounding run. A pair releases when it is decided
// (an endpoint joins a cluster), a vertex when it is clustered.
class BudgetLedger {
 public:
  BudgetLedger() = default;
  explicit BudgetLedger(int n);

  // Both throw std::logic_error on a second release.
  void release_pair(Vertex u, Vertex v, double lp_budget, double error_budget, double cost);
  void release_vertex(Vertex v, double difference_budget);

  int size() const { return n_; }
  bool pair_released(Vertex u, Vertex v) const { return pair_done_[pair_index(n_, u, v)] != 0; }
  bool vertex_released(Vertex v) const { return vertex_done_[v] != 0; }
  std::int64_t released_pairs() const { return released_pairs_; }
  int released_vertices() const { return released_vertices_; }
  const BudgetTotals& released() const { return totals_; }
  double realized_cost() const { return cost_; }
  double pair_cost(Vertex u, Vertex v) const { return pair_cost_[pair_index(n_, u, v)]; }

 private:
  int n_ = 0;
  std::vector<char> pair_done_;
  std::vector<double> pair_cost_;
  std::vector<char> vertex_done_;
  std::int64_t released_pairs_ = 0;
  int released_vertices_ = 0;
  BudgetTotals totals_;
  double cost_ = 0.0;
};

struct TrialSummary {
  std::int64_t cost = 0;
  BudgetTotals released;
  std::int64_t released_pairs = 0;
  int released_vertices = 0;
};

struct IterationTrace {
  Vertex pivot = -1;  // u for the set rounding, p for the pivot rounding
  int size = 0;       // sampled cardinality s; 0 for the pivot rounding
  int cluster_size = 0;
  int minus_taken = 0;
  int plus_taken = 0;
  bool cleanup = false;
};

// Exact expectations of one set-rounding iteration on V'.
struct SetIterationCheck {
  int remaining = 0;
  double y_empty = 0.0;
  // max over v of |Pr[v clustered] - 1 / y_empty|
  double clustered_deviation = 0.0;
  double expected_cost = 0.0;
  BudgetTotals expected_budget;
  // Sum over pairs of err_vw, the branch-weighted gap between Pr[v, w in C]
  // and the lift's y^s_uvw / y^s_u.
  double pair_error = 0.0;
  // Largest mean pair error of a single correlated-rounding call.
  double eps_r = 0.0;
  // expected_cost - (LP + difference budget + 3 * pair_error); never positive
  // up to solver tolerance.
  double analytic_gap = 0.0;
  bool budget_dominates(double tol = 1e-9) const { return expected_cost <= expected_budget.total() + tol; }
};

// One pseudo-atom's side of the error charging: ALG'_K and Delta'_K.
struct AtomErrorCharge {
  std::vector<Vertex> atom;
  int neighbors = 0;
  double alg = 0.0;
  double delta = 0.0;
  bool charged() const { return 2.0 * alg <= delta + 1e-12; }
};

struct RoundingReport {
  std::string method;
  Clustering clustering;
  std::int64_t cost = 0;
  BudgetTotals released;  // best trial
  BudgetTotals ceiling;
  double measured_eps_r = 0.0;
  std::vector<IterationTrace> trace;  // best trial
  std::vector<TrialSummary> trials;
  std::vector<SetIterationCheck> checks;      // set rounding, one per distinct V'
  std::vector<AtomErrorCharge> error_charges;  // pivot rounding, first iteration
  int lp_solves = 0;

  double mean_cost() const;
  // Largest |released - ceiling| over the three budget kinds and all trials.
  double ledger_gap() const;
  // Every trial released every pair and vertex exactly once.
  bool ledger_complete(int n) const;
};

using RoundOutcome = std::variant<RoundingReport, lp::SeparationCertificate>;

}  // namespace corrclust
