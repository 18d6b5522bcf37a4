#pragma once

#include <vector>

#include <Eigen/Dense>

#include "corrclust/core.hpp"
#include "corrclust/correlated.hpp"
#include "corrclust/lp/lift.hpp"
#include "corrclust/random.hpp"
#include "corrclust/rounding.hpp"

namespace corrclust {

// Set-rounding LP budget of a decided pair: 2x/(1+x) for +, (1-x)/(1+x) for -.
double set_lp_budget(Sign s, double x);

// Sum of the per-pair and per-vertex budgets over the whole instance.
BudgetTotals set_budget_ceilings(const SignedGraph& g, const PreclusteredInstance& p, const Metric& x,
                                 double epsilon);

// A (size, first vertex) branch of the cluster sampler, with probability
// y^s_u / (s * y_empty). Branches with y^s_u <= kMinBranchMass are dropped.
struct SetBranch {
  int size = 0;
  Vertex u = -1;
  double weight = 0.0;
};
std::vector<SetBranch> set_branches(const lp::LiftedSolution& y);

// Items are the pseudo-atoms inside y's vertex set other than u's atom; the
// distribution is y^s conditioned on u.
ConditionedMarginals set_branch_marginals(const PreclusteredInstance& p, const lp::LiftedSolution& y, int s,
                                          Vertex u);

struct SetClusterDraw {
  int size = 0;
  Vertex u = -1;
  std::vector<Vertex> cluster;  // sorted
};

// One cluster drawn from a feasible set lift over V'. Throws
// std::invalid_argument if y_empty <= 0.
SetClusterDraw set_based_cstr_clst(const PreclusteredInstance& p, const lp::LiftedSolution& y, int depth,
                                   Rng& rng);

// Exact Pr[v in C] and Pr[v, w in C] of one set_based_cstr_clst call, indexed
// by instance vertex, and the error terms against the lift.
struct ClusterInclusion {
  Eigen::VectorXd single;
  Eigen::MatrixXd joint;
  Eigen::MatrixXd pair_error;  // err_vw
  double eps_r = 0.0;
};
ClusterInclusion set_cluster_inclusion(const PreclusteredInstance& p, const lp::LiftedSolution& y, int depth);

SetIterationCheck analyze_set_iteration(const SignedGraph& g, const PreclusteredInstance& p, const Metric& x,
                                        const lp::LiftedSolution& y, double epsilon, int depth);

// Repeatedly solves the set relaxation on the unclustered vertices and removes
// a sampled cluster. Best of params.trials runs; the first infeasible
// relaxation ends the call with its separation certificate. Throws
// std::runtime_error if the solver fails.
RoundOutcome set_based_round(const SignedGraph& g, const PreclusteredInstance& p, const Metric& x,
                             const RoundingParams& params);

}  // namespace corrclust
