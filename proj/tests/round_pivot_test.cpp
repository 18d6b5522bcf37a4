#include "corrclust/round_pivot.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "corrclust/lp/relaxations.hpp"
#include "corrclust/precluster.hpp"
#include "test_support.hpp"

namespace corrclust {
namespace {

using testing::random_graph;

Metric lp_metric(const SignedGraph& g, const PreclusteredInstance& p) {
  const lp::LpResult r = lp::solve(lp::build_triangle_lp(g, p));
  EXPECT_TRUE(r.optimal());
  return lp::metric_from_solution(g.size(), r.values);
}

VertexMask all_of(int n) { return (VertexMask{1} << n) - 1; }

struct Moments {
  double mean = 0.0;
  double se = 0.0;
};

Moments cost_moments(const RoundingReport& r) {
  double sum = 0.0, sq = 0.0;
  for (const auto& t : r.trials) {
    sum += static_cast<double>(t.cost);
    sq += static_cast<double>(t.cost * t.cost);
  }
  const double k = static_cast<double>(r.trials.size());
  const double mean = sum / k;
  return {mean, std::sqrt(std::max(0.0, sq / k - mean * mean) / k)};
}

TEST(PivotBudget, PlusFactorEndpointsAndShape) {
  EXPECT_DOUBLE_EQ(PivotBudget::f_plus(0.0), 1.515);
  EXPECT_DOUBLE_EQ(PivotBudget::f_plus(1.0), 2.0);
  EXPECT_DOUBLE_EQ(PivotBudget::f_plus(2.0 - 1.515), 2.0);
  double prev = PivotBudget::f_plus(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double f = PivotBudget::f_plus(i / 1000.0);
    EXPECT_GE(f, prev);
    EXPECT_GE(f, 1.5);
    EXPECT_LE(f, 2.0);
    prev = f;
  }
  EXPECT_DOUBLE_EQ(PivotBudget::lp(Sign::kPlus, 0.25), 1.765 * 0.25);
  EXPECT_DOUBLE_EQ(PivotBudget::lp(Sign::kMinus, 0.25), 1.5);
}

TEST(Cleanup, IsolatedSingletonIsRemoved) {
  const SignedGraph g(3);
  const PreclusteredInstance p = PreclusteredInstance::trivial(3);
  const auto k = cleanup(g, p, Metric(3, 1.0), all_of(3), 0.05);
  ASSERT_TRUE(k);
  EXPECT_EQ(k->atom, std::vector<Vertex>{0});
  EXPECT_EQ(k->alg, 0.0);
}

TEST(Cleanup, PlusCliqueAtomWithoutOutsideEdgesIsRemoved) {
  SignedGraph g(4);
  for (Vertex u = 0; u < 3; ++u)
    for (Vertex v = u + 1; v < 3; ++v) g.set_sign(u, v, Sign::kPlus);
  const PreclusteredInstance p(4, {{0, 1, 2}}, {}, 0.1);
  Metric x(4, 1.0);
  for (Vertex u = 0; u < 3; ++u)
    for (Vertex v = u + 1; v < 3; ++v) x.set(u, v, 0.0);
  const CleanupCandidate c = cleanup_candidate(g, p, x, all_of(4), {0, 1, 2}, 0.05);
  EXPECT_EQ(c.alg, 0.0);
  EXPECT_GE(c.delta, c.alg);
  const auto k = cleanup(g, p, x, all_of(4), 0.05);
  ASSERT_TRUE(k);
  EXPECT_EQ(k->atom, (std::vector<Vertex>{0, 1, 2}));
}

TEST(Cleanup, SingletonWithAClosePlusNeighborStays) {
  SignedGraph g(2);
  g.set_sign(0, 1, Sign::kPlus);
  const PreclusteredInstance p(2, {}, {}, 0.1);
  const CleanupCandidate c = cleanup_candidate(g, p, Metric(2, 0.0), all_of(2), {0}, 0.05);
  EXPECT_EQ(c.alg, 1.0);
  EXPECT_EQ(c.delta, 0.0);
  EXPECT_FALSE(cleanup(g, p, Metric(2, 0.0), all_of(2), 0.05));
}

TEST(PivotRound, AllMinusGivesSingletons) {
  const int n = 6;
  const SignedGraph g(n);
  const PreclusteredInstance p = PreclusteredInstance::trivial(n);
  RoundingParams params;
  params.trials = 4;
  const RoundOutcome o = pivot_based_round(g, p, Metric(n, 1.0), params);
  ASSERT_TRUE(std::holds_alternative<RoundingReport>(o));
  const auto& r = std::get<RoundingReport>(o);
  EXPECT_EQ(r.clustering, Clustering::singletons(n));
  EXPECT_EQ(r.cost, 0);
  for (const auto& step : r.trace) EXPECT_TRUE(step.cleanup);
}

TEST(PivotRound, AllPlusCliqueIsOneCluster) {
  const int n = 4;
  SignedGraph g(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) g.set_sign(u, v, Sign::kPlus);
  const PreclusteredInstance p = PreclusteredInstance::trivial(n);
  RoundingParams params;
  params.trials = 8;
  const RoundOutcome o = pivot_based_round(g, p, Metric(n, 0.0), params);
  ASSERT_TRUE(std::holds_alternative<RoundingReport>(o));
  const auto& r = std::get<RoundingReport>(o);
  EXPECT_EQ(r.cost, 0);
  for (const auto& t : r.trials) EXPECT_EQ(t.cost, 0);
  EXPECT_EQ(r.clustering.cluster_count(), 1);
}

// Pr[v in S | pivot] = y_pv for every other vertex.
TEST(PivotRound, MembershipFollowsThePairMarginals) {
  Rng rng(31);
  const int n = 6;
  const SignedGraph g = random_graph(n, 0.5, rng);
  const PreclusteredInstance p = PreclusteredInstance::trivial(n);
  const Metric x = lp_metric(g, p);
  const lp::LiftProgram prog = lp::build_pivot_lp(g, p, x, 3);
  const lp::LpResult r = lp::solve(prog.program);
  ASSERT_TRUE(r.optimal());
  const lp::LiftedSolution y = prog.extract(r.values);
  const int draws = 20000;
  for (Vertex pivot = 0; pivot < n; ++pivot) {
    std::vector<double> hits(n, 0.0);
    for (int t = 0; t < draws; ++t)
      for (Vertex v : pivot_cluster(g, p, y, pivot, all_of(n), -1, rng).cluster) hits[v] += 1.0;
    EXPECT_EQ(hits[pivot], draws);
    for (Vertex v = 0; v < n; ++v) {
      if (v == pivot) continue;
      const double q = y.y(lp::bit(pivot) | lp::bit(v));
      EXPECT_NEAR(q, 1.0 - x(pivot, v), 1e-7);
      EXPECT_NEAR(hits[v] / draws, q, 4 * std::sqrt(q * (1 - q) / draws) + 1e-9) << pivot << "," << v;
    }
  }
}

TEST(PivotRound, PlusPlusMinusTriangleStaysWithinTheBudget) {
  SignedGraph g(3);
  g.set_sign(0, 1, Sign::kPlus);
  g.set_sign(0, 2, Sign::kPlus);
  const PreclusteredInstance p = PreclusteredInstance::trivial(3);
  const Metric x = lp_metric(g, p);
  RoundingParams params;
  params.trials = 10000;
  params.seed = 9;
  const RoundOutcome o = pivot_based_round(g, p, x, params);
  ASSERT_TRUE(std::holds_alternative<RoundingReport>(o));
  const auto& r = std::get<RoundingReport>(o);
  const double lp_bound = PivotBudget::lp(Sign::kPlus, x(0, 1)) + PivotBudget::lp(Sign::kPlus, x(0, 2)) +
                          PivotBudget::lp(Sign::kMinus, x(1, 2));
  EXPECT_NEAR(r.ceiling.lp, lp_bound, 1e-12);
  const Moments m = cost_moments(r);
  EXPECT_LE(m.mean, r.ceiling.total() + r.measured_eps_r * p.admissible_count() + 3 * m.se);
}

TEST(PivotRound, MeanCostStaysWithinTheBudgetOnRandomInstances) {
  Rng rng(32);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 7;
    const SignedGraph g = random_graph(n, 0.5, rng);
    const PreclusteredInstance p = precluster(g, AgreementParams{});
    RoundingParams params;
    params.trials = 2000;
    params.seed = 40 + trial;
    const RoundOutcome o = pivot_based_round(g, p, lp_metric(g, p), params);
    ASSERT_TRUE(std::holds_alternative<RoundingReport>(o));
    const auto& r = std::get<RoundingReport>(o);
    const Moments m = cost_moments(r);
    EXPECT_LE(m.mean, r.ceiling.total() + r.measured_eps_r * p.admissible_count() + 3 * m.se) << trial;
  }
}

TEST(PivotRound, LedgerIsCompleteAndAtomsStayWhole) {
  GeneratorParams gp;
  gp.clique_sizes = {4, 3};
  gp.noise = 0.1;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const SignedGraph g = generate_instance(InstanceKind::kPlantedCliques, 7, gp, seed);
    const PreclusteredInstance p = precluster(g, AgreementParams{});
    RoundingParams params;
    params.trials = 16;
    params.seed = seed;
    const RoundOutcome o = pivot_based_round(g, p, lp_metric(g, p), params);
    ASSERT_TRUE(std::holds_alternative<RoundingReport>(o));
    const auto& r = std::get<RoundingReport>(o);
    EXPECT_TRUE(r.ledger_complete(7));
    EXPECT_LE(r.ledger_gap(), 1e-9);
    for (const auto& atom : p.atoms())
      for (Vertex v : atom) EXPECT_TRUE(r.clustering.together(atom.front(), v));
    for (const auto& step : r.trace)
      if (!step.cleanup) EXPECT_GE(step.cluster_size, static_cast<int>(p.atom_members(step.pivot).size()));
  }
}

TEST(ErrorCharge, EmptyNeighborhoodAndExactMarginals) {
  const SignedGraph g(3);
  const PreclusteredInstance none(3, {}, {}, 0.1);
  for (const auto& c : error_charge_diagnostics(g, none, Metric(3, 1.0), all_of(3), 0.05, 0.3)) {
    EXPECT_EQ(c.alg, 0.0);
    EXPECT_EQ(c.delta, 0.0);
  }
  Rng rng(33);
  const SignedGraph h = random_graph(6, 0.6, rng);
  const PreclusteredInstance p = PreclusteredInstance::trivial(6);
  for (const auto& c : error_charge_diagnostics(h, p, lp_metric(h, p), all_of(6), 0.05, 0.0)) {
    EXPECT_EQ(c.alg, 0.0);
    EXPECT_TRUE(c.charged());
  }
}

// Delta'_K counts the diagonal w = u term: a lone admissible neighbor at x = 0
// gives eps * (1 - 0) for (u, v, u).
TEST(ErrorCharge, DiagonalTermIsCounted) {
  SignedGraph g(2);
  g.set_sign(0, 1, Sign::kPlus);
  const PreclusteredInstance p = PreclusteredInstance::trivial(2);
  const auto charges = error_charge_diagnostics(g, p, Metric(2, 0.0), all_of(2), 0.05, 0.5);
  ASSERT_EQ(charges.size(), 2u);
  EXPECT_EQ(charges[0].neighbors, 1);
  EXPECT_DOUBLE_EQ(charges[0].delta, 0.05);
  EXPECT_EQ(charges[0].alg, 0.0);
}

TEST(PivotRound, ReportsErrorChargesForEveryPseudoAtom) {
  Rng rng(34);
  const SignedGraph g = random_graph(7, 0.5, rng);
  const PreclusteredInstance p = precluster(g, AgreementParams{});
  RoundingParams params;
  params.trials = 8;
  const RoundOutcome o = pivot_based_round(g, p, lp_metric(g, p), params);
  ASSERT_TRUE(std::holds_alternative<RoundingReport>(o));
  const auto& r = std::get<RoundingReport>(o);
  EXPECT_EQ(r.error_charges.size(), p.pseudo_atoms().size());
  for (const auto& c : r.error_charges) {
    EXPECT_GE(c.alg, 0.0);
    EXPECT_GE(c.delta, 0.0);
  }
}

}  // namespace
}  // namespace corrclust
