#pragma once

#include <optional>
#include <vector>

#include "corrclust/core.hpp"
#include "corrclust/correlated.hpp"
#include "corrclust/lp/lift.hpp"
#include "corrclust/random.hpp"
#include "corrclust/rounding.hpp"

namespace corrclust {

inline constexpr double kPivotPlusConstant = 1.515;

// Per-pair LP budget of the pivot rounding: f(x) x for + pairs with
// f(x) = min(1.515 + x, 2), and 2 (1 - x) for - pairs.
struct PivotBudget {
  static constexpr double kMinusCoefficient = 2.0;
  static double f_plus(double x);
  static double lp(Sign s, double x);
};

BudgetTotals pivot_budget_ceilings(const SignedGraph& g, const PreclusteredInstance& p, const Metric& x,
                                   double epsilon);

// Cost and budget of removing pseudo-atom K on its own from `remaining`.
struct CleanupCandidate {
  std::vector<Vertex> atom;
  double alg = 0.0;    // - pairs inside K plus + pairs leaving K
  double delta = 0.0;  // budget of the pairs touching K, plus eps per admissible one
};
CleanupCandidate cleanup_candidate(const SignedGraph& g, const PreclusteredInstance& p, const Metric& x,
                                   VertexMask remaining, const std::vector<Vertex>& atom, double epsilon);

// First pseudo-atom inside `remaining` (ascending smallest member) with
// delta >= alg, or none.
std::optional<CleanupCandidate> cleanup(const SignedGraph& g, const PreclusteredInstance& p, const Metric& x,
                                        VertexMask remaining, double epsilon);

// Pseudo-atoms inside `remaining`, other than the pivot's, split by whether
// the pivot has a + edge into them. Units across a non-admissible pair are
// left out; the lift must give them no mass (std::logic_error otherwise).
struct PivotUnits {
  std::vector<std::vector<Vertex>> plus;
  std::vector<std::vector<Vertex>> minus;
};
PivotUnits pivot_units(const SignedGraph& g, const PreclusteredInstance& p, const lp::LiftedSolution& y,
                       Vertex pivot, VertexMask remaining);

struct PivotDraw {
  std::vector<Vertex> cluster;  // sorted
  int minus_taken = 0;
  int plus_taken = 0;
};
PivotDraw pivot_cluster(const SignedGraph& g, const PreclusteredInstance& p, const lp::LiftedSolution& y,
                        Vertex pivot, VertexMask remaining, int depth, Rng& rng);

// ALG'_K and Delta'_K for every pseudo-atom inside `remaining`, with N the
// admissible neighbors of K there.
std::vector<AtomErrorCharge> error_charge_diagnostics(const SignedGraph& g, const PreclusteredInstance& p,
                                                      const Metric& x, VertexMask remaining, double epsilon,
                                                      double eps_r);

// Solves the pivot relaxation once, then alternates cleanup with pivot
// clusters. Best of params.trials runs. Throws std::runtime_error if the
// solver fails.
RoundOutcome pivot_based_round(const SignedGraph& g, const PreclusteredInstance& p, const Metric& x,
                               const RoundingParams& params);

}  // namespace corrclust
