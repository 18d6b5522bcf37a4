#include "corrclust/correlated.hpp"

#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "corrclust/lp/relaxations.hpp"
#include "test_support.hpp"

namespace corrclust {
namespace {

std::vector<std::vector<Vertex>> singletons(int k) {
  std::vector<std::vector<Vertex>> items(k);
  for (int i = 0; i < k; ++i) items[i] = {i};
  return items;
}

// Moments of an explicit distribution over item subsets: a true
// distribution, so every pattern mass is nonnegative.
ConditionedMarginals from_distribution(int k, int order, const std::map<ItemMask, double>& dist) {
  return ConditionedMarginals(singletons(k), order, [&](ItemMask m) {
    double v = 0.0;
    for (const auto& [set, p] : dist)
      if ((set & m) == m) v += p;
    return v;
  });
}

std::map<ItemMask, double> random_distribution(int k, int support, Rng& rng) {
  std::map<ItemMask, double> dist;
  double total = 0.0;
  for (int i = 0; i < support; ++i) {
    const double w = uniform01(rng) + 0.05;
    dist[uniform_below(rng, ItemMask{1} << k)] += w;
    total += w;
  }
  for (auto& [set, p] : dist) p /= total;
  return dist;
}

ConditionedMarginals product(const std::vector<double>& p, int order) {
  return ConditionedMarginals(singletons(static_cast<int>(p.size())), order, [&](ItemMask m) {
    double v = 1.0;
    for (; m != 0; m &= m - 1) v *= p[__builtin_ctzll(m)];
    return v;
  });
}

TEST(RtSample, IntegralMarginalsAreDeterministic) {
  const auto m = product({1.0, 0.0, 1.0, 0.0}, 2);
  Rng rng(1);
  for (int t = 0; t < 200; ++t) EXPECT_EQ(rt_sample(m, 1, rng), ItemMask{0b0101});
  EXPECT_EQ(exact_pairwise_error(m, 1), 0.0);
  Rng rng2(2);
  EXPECT_EQ(measure_pairwise_error(m, 1, 1000, rng2), 0.0);
}

TEST(RtSample, SingleVertexFrequency) {
  const auto m = product({0.3}, 2);
  Rng rng(7);
  int hits = 0;
  const int draws = 100000;
  for (int t = 0; t < draws; ++t) hits += rt_sample(m, 1, rng) != 0;
  EXPECT_NEAR(hits / static_cast<double>(draws), 0.3, 0.01);
  EXPECT_NEAR(exact_inclusion(m, 1).marginal[0], 0.3, 1e-15);
}

ConditionedMarginals perfectly_correlated_pair() {
  return ConditionedMarginals(singletons(2), 2, [](ItemMask) { return 0.5; });
}

TEST(RtSample, CorrelatedPairAtDepthOne) {
  const auto m = perfectly_correlated_pair();
  const InclusionTable t = exact_inclusion(m, 1);
  // Half the time no seed (independent: 1/4), half one seed (together: 1/2).
  EXPECT_NEAR(t.joint(0, 1), 0.375, 1e-15);
  EXPECT_NEAR(exact_pairwise_error(m, 1), 0.125, 1e-15);
  EXPECT_NEAR(exact_pairwise_error(m, 0), 0.25, 1e-15);
  Rng rng(3);
  const int draws = 100000;
  int both = 0;
  for (int i = 0; i < draws; ++i) both += rt_sample(m, 1, rng) == 0b11;
  const double sigma = std::sqrt(0.375 * 0.625 / draws);
  EXPECT_NEAR(both / static_cast<double>(draws), 0.375, 3 * sigma);
  Rng rng2(4);
  EXPECT_NEAR(measure_pairwise_error(m, 1, 100000, rng2), 0.125, 4 * sigma);
}

TEST(RtSample, ProductDistributionHasNoPairError) {
  const auto m = product({0.2, 0.5, 0.7, 0.9}, 3);
  for (int depth = 0; depth <= 2; ++depth) EXPECT_NEAR(exact_pairwise_error(m, depth), 0.0, 1e-15);
  Rng rng(9);
  EXPECT_LT(measure_pairwise_error(m, 1, 20000, rng), 0.01);
}

TEST(RtSample, ExactMarginalsOnSmallGroundSets) {
  Rng rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 1 + static_cast<int>(uniform_below(rng, 6));
    const int order = 2 + static_cast<int>(uniform_below(rng, 2));
    const auto m = from_distribution(k, order, random_distribution(k, 6, rng));
    for (int depth = 0; depth <= max_depth(m); ++depth) {
      const InclusionTable t = exact_inclusion(m, depth);
      for (int i = 0; i < k; ++i) EXPECT_NEAR(t.marginal[i], m.marginal(i), 1e-12) << trial;
    }
  }
}

TEST(RtSample, MonteCarloMarginalsOnTwentyItems) {
  Rng rng(13);
  const int k = 20;
  const auto m = from_distribution(k, 2, random_distribution(k, 12, rng));
  const int draws = 100000;
  std::vector<int> hits(k, 0);
  for (int t = 0; t < draws; ++t)
    for (ItemMask c = rt_sample(m, 1, rng); c != 0; c &= c - 1) ++hits[__builtin_ctzll(c)];
  for (int i = 0; i < k; ++i) {
    const double p = m.marginal(i);
    const double sigma = std::sqrt(p * (1 - p) / draws);
    EXPECT_NEAR(hits[i] / static_cast<double>(draws), p, 3 * sigma + 1e-12) << i;
  }
}

TEST(RtSample, DeeperConditioningDoesNotIncreaseError) {
  Rng rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 4 + static_cast<int>(uniform_below(rng, 3));
    const auto m = from_distribution(k, 3, random_distribution(k, 3, rng));
    const double e0 = exact_pairwise_error(m, 0);
    const double e1 = exact_pairwise_error(m, 1);
    const double e2 = exact_pairwise_error(m, 2);
    // Averaging over depths: the sequence need not be monotone per instance
    // by a fixed amount, but never moves up beyond rounding.
    EXPECT_LE(e1, e0 + 1e-12) << trial;
    EXPECT_LE(e2, e1 + 0.05) << trial;
  }
}

TEST(RtSample, LiftDerivedMarginalsAreExactAndConsistent) {
  Rng rng(15);
  int checked = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 7;
    const SignedGraph g = corrclust::testing::random_graph(n, 0.5, rng);
    const PreclusteredInstance p = PreclusteredInstance::trivial(n);
    const lp::LpResult tri = lp::solve(lp::build_triangle_lp(g, p));
    const lp::LiftProgram prog = lp::build_pivot_lp(g, p, lp::metric_from_solution(n, tri.values), 3);
    const lp::LpResult r = lp::solve(prog.program);
    if (!r.optimal()) continue;
    const lp::LiftedSolution y = prog.extract(r.values);
    std::vector<std::vector<Vertex>> items;
    for (Vertex v = 1; v < n; ++v) items.push_back({v});
    const auto m = condition_pivot(y, 0, items);
    EXPECT_LE(m.invariant_violation(), 1e-9);
    const InclusionTable t = exact_inclusion(m, 1);
    for (int i = 0; i < m.item_count(); ++i) EXPECT_NEAR(t.marginal[i], m.marginal(i), 1e-9);
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

TEST(RtSample, AtomItemsExpandWhole) {
  const ConditionedMarginals m({{2, 5}, {3}}, 2, [](ItemMask x) { return x == 0b01 ? 1.0 : 0.0; });
  Rng rng(1);
  const ItemMask c = rt_sample(m, 1, rng);
  EXPECT_EQ(m.expand(c), (std::vector<Vertex>{2, 5}));
}

TEST(RtSample, RejectsDepthAboveOrder) {
  const auto m = product({0.5, 0.5}, 2);
  Rng rng(1);
  EXPECT_THROW(rt_sample(m, 2, rng), std::invalid_argument);
  EXPECT_THROW(exact_inclusion(m, 2), std::invalid_argument);
}

TEST(RtSample, ConditioningOnSetLiftDividesBySizeMass) {
  const Clustering c({0, 0, 1, 1, 1});
  const lp::LiftedSolution y = lp::indicator_set_lift(c, corrclust::testing::iota_vertices(5), 3);
  const auto m = condition_set(y, 3, 2, {{0}, {1}, {3}, {4}});
  EXPECT_EQ(m.marginal(0), 0.0);
  EXPECT_EQ(m.marginal(2), 1.0);
  EXPECT_EQ(m.pair(2, 3), 1.0);
  EXPECT_THROW(condition_set(y, 2, 2, {{0}}), std::invalid_argument);
}

}  // namespace
}  // namespace corrclust
