#include "corrclust/round_set.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "corrclust/lp/relaxations.hpp"
#include "corrclust/precluster.hpp"
#include "test_support.hpp"

namespace corrclust {
namespace {

using testing::iota_vertices;
using testing::random_graph;

Metric lp_metric(const SignedGraph& g, const PreclusteredInstance& p) {
  const lp::LpResult r = lp::solve(lp::build_triangle_lp(g, p));
  EXPECT_TRUE(r.optimal());
  return lp::metric_from_solution(g.size(), r.values);
}

std::optional<lp::LiftedSolution> solve_set_lift(const PreclusteredInstance& p, const Metric& x, double eps) {
  const lp::LiftProgram prog = lp::build_set_lp(iota_vertices(p.size()), p, x, 3, eps);
  const lp::LpResult r = lp::solve(prog.program);
  if (!r.optimal()) return std::nullopt;
  return prog.extract(r.values);
}

const RoundingReport& as_report(const RoundOutcome& o) {
  EXPECT_TRUE(std::holds_alternative<RoundingReport>(o));
  return std::get<RoundingReport>(o);
}

TEST(SetRound, IntegralMetricReproducesTheClustering) {
  Rng rng(21);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 4 + trial % 4;
    const SignedGraph g = random_graph(n, 0.5, rng);
    const PreclusteredInstance p = PreclusteredInstance::trivial(n);
    const Clustering c = testing::random_good_clustering(p, rng);
    RoundingParams params;
    params.trials = 3;
    params.seed = trial;
    const RoundOutcome o = set_based_round(g, p, Metric::from_clustering(c), params);
    const RoundingReport& r = as_report(o);
    EXPECT_EQ(r.clustering, c) << trial;
    EXPECT_EQ(r.cost, clustering_cost(g, c));
    for (const auto& t : r.trials) EXPECT_EQ(t.cost, r.cost);
    EXPECT_NEAR(r.measured_eps_r, 0.0, 1e-12);
  }
}

TEST(SetRound, AllMinusWithUnitMetricGivesSingletons) {
  const int n = 6;
  const SignedGraph g(n);
  const PreclusteredInstance p = PreclusteredInstance::trivial(n);
  RoundingParams params;
  params.trials = 4;
  const RoundOutcome o = set_based_round(g, p, Metric(n, 1.0), params);
  const RoundingReport& r = as_report(o);
  EXPECT_EQ(r.clustering, Clustering::singletons(n));
  EXPECT_EQ(r.cost, 0);
  EXPECT_EQ(r.trace.size(), static_cast<std::size_t>(n));
}

// Pr[v clustered] = 1 / y_empty for every vertex, by exact branch summation.
TEST(SetRound, EveryVertexIsClusteredWithProbabilityOneOverClusterMass) {
  Rng rng(22);
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 4;
    const SignedGraph g = random_graph(n, 0.5, rng);
    const PreclusteredInstance p = precluster(g, AgreementParams{});
    const Metric x = lp_metric(g, p);
    const auto y = solve_set_lift(p, x, 0.05);
    if (!y) continue;
    const ClusterInclusion inc = set_cluster_inclusion(p, *y, -1);
    const double y_empty = y->y(VertexMask{0});
    for (Vertex v = 0; v < n; ++v) EXPECT_NEAR(inc.single[v], 1.0 / y_empty, 1e-9) << trial << " v" << v;
    const SetIterationCheck c = analyze_set_iteration(g, p, x, *y, 0.05, -1);
    EXPECT_LE(c.clustered_deviation, 1e-9);
    EXPECT_LE(c.analytic_gap, 1e-9);
    ++checked;
  }
  EXPECT_GE(checked, 15);
}

TEST(SetRound, DecidedProbabilityBoundHoldsPerPair) {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 5;
    const SignedGraph g = random_graph(n, 0.6, rng);
    const PreclusteredInstance p = PreclusteredInstance::trivial(n);
    const auto y = solve_set_lift(p, lp_metric(g, p), 0.05);
    ASSERT_TRUE(y);
    const ClusterInclusion inc = set_cluster_inclusion(p, *y, -1);
    const double y_empty = y->y(VertexMask{0});
    for (Vertex v = 0; v < n; ++v)
      for (Vertex w = v + 1; w < n; ++w) {
        const double decided = inc.single[v] + inc.single[w] - inc.joint(v, w);
        EXPECT_GE(decided, (1.0 + y->x_tilde(v, w)) / y_empty - inc.pair_error(v, w) - 1e-9);
      }
  }
}

TEST(SetRound, SampledClusterFrequenciesMatchExactInclusion) {
  Rng rng(24);
  const int n = 5;
  const SignedGraph g = random_graph(n, 0.5, rng);
  const PreclusteredInstance p = PreclusteredInstance::trivial(n);
  const auto y = solve_set_lift(p, lp_metric(g, p), 0.05);
  ASSERT_TRUE(y);
  const ClusterInclusion inc = set_cluster_inclusion(p, *y, -1);
  const int draws = 40000;
  Eigen::MatrixXd hits = Eigen::MatrixXd::Zero(n, n);
  for (int t = 0; t < draws; ++t) {
    const auto c = set_based_cstr_clst(p, *y, -1, rng).cluster;
    for (Vertex a : c)
      for (Vertex b : c) hits(a, b) += 1.0;
  }
  for (Vertex v = 0; v < n; ++v)
    for (Vertex w = v; w < n; ++w) {
      const double q = inc.joint(v, w);
      const double sigma = std::sqrt(q * (1 - q) / draws);
      EXPECT_NEAR(hits(v, w) / draws, q, 4 * sigma + 1e-12) << v << "," << w;
    }
}

TEST(SetRound, PlusPlusMinusTriangleStaysWithinTheBudget) {
  SignedGraph g(3);
  g.set_sign(0, 1, Sign::kPlus);
  g.set_sign(0, 2, Sign::kPlus);
  const PreclusteredInstance p = PreclusteredInstance::trivial(3);
  const Metric x = lp_metric(g, p);
  RoundingParams params;
  params.trials = 10000;
  params.seed = 5;
  const RoundOutcome o = set_based_round(g, p, x, params);
  const RoundingReport& r = as_report(o);
  double mean = 0.0, sq = 0.0;
  for (const auto& t : r.trials) {
    mean += t.cost;
    sq += static_cast<double>(t.cost * t.cost);
  }
  mean /= params.trials;
  const double sd = std::sqrt(std::max(0.0, sq / params.trials - mean * mean));
  const double lp_bound = r.ceiling.lp;
  EXPECT_NEAR(lp_bound,
              set_lp_budget(Sign::kPlus, x(0, 1)) + set_lp_budget(Sign::kPlus, x(0, 2)) +
                  set_lp_budget(Sign::kMinus, x(1, 2)),
              1e-12);
  EXPECT_LE(mean, r.ceiling.total() + r.measured_eps_r * p.admissible_count() + 3 * sd / std::sqrt(params.trials));
  for (const auto& c : r.checks) {
    EXPECT_LE(c.analytic_gap, 1e-9);
    EXPECT_LE(c.clustered_deviation, 1e-9);
  }
}

TEST(SetRound, LedgerReleasesEachPairOnceAndMatchesCeilings) {
  Rng rng(25);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 7;
    const SignedGraph g = random_graph(n, 0.5, rng);
    const PreclusteredInstance p = precluster(g, AgreementParams{});
    RoundingParams params;
    params.trials = 6;
    params.seed = 100 + trial;
    const RoundOutcome o = set_based_round(g, p, lp_metric(g, p), params);
    if (!std::holds_alternative<RoundingReport>(o)) continue;
    const RoundingReport& r = std::get<RoundingReport>(o);
    EXPECT_TRUE(r.ledger_complete(n));
    EXPECT_LE(r.ledger_gap(), 1e-9);
  }
}

// Uniform random n = 10, seed 2: the triangle optimum has no set lift, and the
// plane found through the pruned program holds for every good clustering.
TEST(SetRound, InfeasibleLiftReturnsAValidPlane) {
  const int n = 10;
  const SignedGraph g = generate_instance(InstanceKind::kUniformRandom, n, GeneratorParams{}, 2);
  const PreclusteredInstance p = precluster(g, AgreementParams{});
  const Metric x = lp_metric(g, p);
  const RoundOutcome o = set_based_round(g, p, x, RoundingParams{});
  ASSERT_TRUE(std::holds_alternative<lp::SeparationCertificate>(o));
  const auto& c = std::get<lp::SeparationCertificate>(o);
  EXPECT_LT(c.slack(x.to_pair_vector()), -1e-9);
  double worst = 0.0;
  testing::for_each_partition(n, [&](const Clustering& cl) {
    if (is_good_clustering(p, cl)) worst = std::min(worst, c.slack(Metric::from_clustering(cl).to_pair_vector()));
  });
  EXPECT_GE(worst, -1e-9);
}

TEST(BudgetLedger, RejectsSecondRelease) {
  BudgetLedger l(4);
  l.release_pair(0, 2, 0.5, 0.05, 0.0);
  EXPECT_THROW(l.release_pair(2, 0, 0.5, 0.05, 0.0), std::logic_error);
  l.release_vertex(3, 0.1);
  EXPECT_THROW(l.release_vertex(3, 0.1), std::logic_error);
  EXPECT_TRUE(l.pair_released(0, 2));
  EXPECT_FALSE(l.pair_released(0, 1));
  EXPECT_DOUBLE_EQ(l.released().total(), 0.65);
}

TEST(SetRound, AtomsStayWhole) {
  GeneratorParams gp;
  gp.clique_sizes = {4, 4};
  gp.noise = 0.05;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const SignedGraph g = generate_instance(InstanceKind::kPlantedCliques, 8, gp, seed);
    const PreclusteredInstance p = precluster(g, AgreementParams{});
    RoundingParams params;
    params.trials = 4;
    const RoundOutcome o = set_based_round(g, p, lp_metric(g, p), params);
    if (!std::holds_alternative<RoundingReport>(o)) continue;
    const Clustering& c = std::get<RoundingReport>(o).clustering;
    for (const auto& atom : p.atoms())
      for (Vertex v : atom) EXPECT_TRUE(c.together(atom.front(), v));
  }
}

TEST(SetRound, RejectsBadParams) {
  RoundingParams params;
  params.epsilon = 0.0;
  EXPECT_THROW(params.validate(), std::invalid_argument);
  params = {};
  params.r = 1;
  EXPECT_THROW(params.validate(), std::invalid_argument);
  params = {};
  params.trials = 0;
  EXPECT_THROW(params.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace corrclust
