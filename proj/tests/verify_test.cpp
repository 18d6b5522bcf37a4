#include "corrclust/verify.hpp"

#include <cmath>

#include <gtest/gtest.h>

namespace corrclust {
namespace {

constexpr TriangleKind kAllKinds[] = {TriangleKind::kPlusPlusPlus, TriangleKind::kPlusPlusMinus,
                                      TriangleKind::kPlusMinusMinus, TriangleKind::kMinusMinusMinus};

TEST(FinalRatio, PeakSitsAtTheKnee) {
  const FinalRatio r = verify_final_ratio(1e-4);
  EXPECT_NEAR(r.max, 0.84 / 1.485 + 1.16, 1e-12);
  EXPECT_NEAR(r.max, 1.72565, 1e-5);
  EXPECT_LE(r.max, 1.7257 + 1e-6);
  EXPECT_NEAR(r.argmax, 0.485, 1e-4);
  EXPECT_EQ(r.minus_edge, 1.58);
  EXPECT_TRUE(r.convex_before_knee);
  EXPECT_TRUE(r.decreasing_after_knee);
  EXPECT_TRUE(r.ok());
}

TEST(FinalRatio, EndpointsAndBadGrid) {
  EXPECT_NEAR(combined_plus_ratio(1.0), 0.42 + 1.16, 1e-15);
  EXPECT_NEAR(combined_plus_ratio(0.0), 0.84 + 0.58 * 1.515, 1e-15);
  EXPECT_THROW(verify_final_ratio(0.01), std::invalid_argument);
  EXPECT_THROW(verify_final_ratio(0.0), std::invalid_argument);
}

TEST(TriangleCase, MinusMinusMinusAtAllOnesIsTight) {
  const TriangleCheck c = verify_triangle_case(TriangleKind::kMinusMinusMinus, TrianglePoint{1, 1, 1, 1});
  EXPECT_DOUBLE_EQ(c.lhs, 3.0);
  EXPECT_DOUBLE_EQ(c.rhs, 3.0);
  EXPECT_TRUE(c.ok);
}

TEST(TriangleCase, PlusMinusMinusExpandsToTheClosedForm) {
  Rng rng(71);
  for (int i = 0; i < 1000; ++i) {
    const TrianglePoint pt = sample_triangle_point(rng);
    const double x = 1.0 - pt.y_bc;
    const TriangleCheck c = verify_triangle_case(TriangleKind::kPlusMinusMinus, pt);
    // The three pivot terms add up to (2 - x)(y_ab + y_ac) + 3 x y_ab y_ac.
    EXPECT_NEAR(c.rhs, (2 - x) * (pt.y_ab + pt.y_ac) + 3 * x * pt.y_ab * pt.y_ac, 1e-12);
    EXPECT_NEAR(c.lhs,
                pt.y_ab + pt.y_ac - 2 * pt.y_ab * pt.y_ac + pt.y_ab * pt.y_bc + pt.y_ac * pt.y_bc, 1e-12);
  }
}

// y_ab = y_ac = 1/2 with y_bc = y_abc = 0 is the equality point of the ++-
// boundary analysis.
TEST(TriangleCase, PlusPlusMinusEqualityWitness) {
  EXPECT_NEAR(case_2c_quartic(0.5), 0.0, 1e-15);
  for (int i = 1; i <= 50; ++i) EXPECT_GE(case_2c_quartic(0.5 + i / 100.0), 0.0);
  const TrianglePoint pt = point_from_partitions(0.0, 0.5, 0.5, 0.0, 0.0);
  const TriangleCheck c = verify_triangle_case(TriangleKind::kPlusPlusMinus, pt);
  EXPECT_TRUE(c.ok);
  EXPECT_NEAR(c.rhs - c.lhs, 0.0, 1e-12);
}

TEST(TriangleCase, PlusPlusPlusSurrogateIsTightAtOneThird) {
  const double t = 1.0 / 3.0;
  const TrianglePoint pt{t, t, t, 0.0};
  const TriangleCheck c = verify_triangle_case(TriangleKind::kPlusPlusPlus, pt);
  EXPECT_NEAR(c.lhs, 2.0, 1e-12);
  EXPECT_NEAR(c.rhs, 2.0, 1e-12);
}

TEST(TriangleCase, HoldsOnUniformFeasiblePoints) {
  Rng rng(72);
  for (TriangleKind k : kAllKinds) {
    const TriangleSweep s = sweep_triangle_case(k, 100000, rng);
    EXPECT_EQ(s.failures, 0) << triangle_kind_name(k);
    EXPECT_GE(s.min_slack, -kVerifyTolerance) << triangle_kind_name(k);
  }
}

TEST(TriangleCase, RejectsInfeasiblePoints) {
  EXPECT_THROW(verify_triangle_case(TriangleKind::kPlusPlusMinus, TrianglePoint{0.9, 0.9, 0.0, 0.0}),
               std::invalid_argument);
  EXPECT_THROW(verify_triangle_case(TriangleKind::kMinusMinusMinus, TrianglePoint{0.2, 0.2, 0.2, 0.5}),
               std::invalid_argument);
  EXPECT_THROW(point_from_partitions(0.5, 0.5, 0.5, 0.0, 0.0), std::invalid_argument);
}

TEST(TrianglePointSampler, StaysFeasibleAndCoversTheCorners) {
  Rng rng(73);
  for (int i = 0; i < 1000; ++i) EXPECT_NO_THROW(sample_triangle_point(rng).validate());
  const TrianglePoint apart = point_from_partitions(0, 0, 0, 0, 1);
  EXPECT_EQ(apart.y_ab + apart.y_ac + apart.y_bc, 0.0);
  const TrianglePoint together = point_from_partitions(1, 0, 0, 0, 0);
  EXPECT_EQ(together.y_ab, 1.0);
  EXPECT_EQ(together.y_ac, 1.0);
  EXPECT_EQ(together.y_bc, 1.0);
  // Uniform on the simplex: each weight has mean 1/5.
  double mean_abc = 0.0;
  const int draws = 50000;
  for (int i = 0; i < draws; ++i) mean_abc += sample_triangle_point(rng).y_abc;
  EXPECT_NEAR(mean_abc / draws, 0.2, 0.005);
}

TEST(FConstant, ClearsTheRequirementWithEqualityAtOneHalf) {
  const FConstantCheck c = verify_f_constant(1e-5);
  EXPECT_TRUE(c.ok);
  EXPECT_NEAR(c.gap_at_half, 0.0, 1e-12);
  EXPECT_LT(c.near_tight_gap, 0.01);
  EXPECT_NEAR(f_requirement(0.485), 1.9962, 1e-4);
  EXPECT_LT(f_requirement(0.1), 0.0);
  EXPECT_THROW(verify_f_constant(0.1), std::invalid_argument);
}

TEST(FConstant, WrongConstantFailsNearTheKnee) {
  const FConstantCheck c = verify_f_constant(1e-4, 1.4);
  EXPECT_FALSE(c.ok);
  EXPECT_LT(c.min_gap, -0.1);
  // The gap 1.4 + x - requirement is smallest where the requirement has
  // slope 1, the root of x^3 + 4x - 2.
  EXPECT_NEAR(c.min_gap_at, 0.47347, 1e-4);
  EXPECT_NEAR(c.min_gap_at, 0.485, 0.015);
  EXPECT_NEAR(c.gap_at_half, -0.1, 1e-12);
}

}  // namespace
}  // namespace corrclust
