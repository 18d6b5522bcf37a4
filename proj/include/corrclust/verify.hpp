#pragma once

// Numeric checks of the closed-form parts of the approximation analysis.

#include <cstdint>
#include <optional>
#include <string>

#include "corrclust/random.hpp"
#include "corrclust/round_pivot.hpp"

namespace corrclust {

// Mixing weights in hundredths, so integer-coefficient combinations stay exact.
inline constexpr int kSetWeightHundredths = 42;
inline constexpr int kPivotWeightHundredths = 58;
inline constexpr double kSetWeight = kSetWeightHundredths / 100.0;
inline constexpr double kPivotWeight = kPivotWeightHundredths / 100.0;
inline constexpr double kCombinedRatio = 1.7257;
inline constexpr double kVerifyTolerance = 1e-9;

// Combined per-unit ratio of a + pair at LP value x.
double combined_plus_ratio(double x);
// Combined ratio of a - pair: 0.42 * 1 + 0.58 * 2.
double combined_minus_ratio();

struct FinalRatio {
  double max = 0.0;
  double argmax = 0.0;
  double minus_edge = 0.0;
  bool convex_before_knee = true;    // discrete second differences on [0, 0.485]
  bool decreasing_after_knee = true;  // on [0.485, 1]
  bool ok() const { return max <= kCombinedRatio + 1e-6 && convex_before_knee && decreasing_after_knee; }
};
// Throws std::invalid_argument unless 0 < grid_step <= 1e-3.
FinalRatio verify_final_ratio(double grid_step);

enum class TriangleKind { kPlusPlusPlus, kPlusPlusMinus, kPlusMinusMinus, kMinusMinusMinus };
const char* triangle_kind_name(TriangleKind k);
TriangleKind parse_triangle_kind(const std::string& name);

// Pair and triple values of a three-vertex pseudo-distribution. In the
// mixed kinds, a is the apex: ab, ac carry the shared sign and bc the other.
struct TrianglePoint {
  double y_ab = 0.0;
  double y_ac = 0.0;
  double y_bc = 0.0;
  double y_abc = 0.0;

  double y_ab_c() const { return y_ab - y_abc; }
  double y_ac_b() const { return y_ac - y_abc; }
  double y_a_bc() const { return y_bc - y_abc; }
  double y_a_b_c() const { return 1.0 - (y_ab + y_ac + y_bc) + 2.0 * y_abc; }

  // Throws std::invalid_argument if a partition weight is negative or a
  // value leaves [0, 1].
  void validate(double tol = 1e-12) const;
};

// Uniform point of the simplex over the five partitions of {a, b, c}.
TrianglePoint sample_triangle_point(Rng& rng);
TrianglePoint point_from_partitions(double abc, double ab_c, double ac_b, double a_bc, double a_b_c);

struct TriangleCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};
// Summed cost against summed budget over the three pivot choices. The +++
// kind uses the coefficient-1.5 surrogate for the + budget.
TriangleCheck verify_triangle_case(TriangleKind kind, const TrianglePoint& point);

struct TriangleSweep {
  TriangleKind kind = TriangleKind::kPlusPlusPlus;
  std::int64_t samples = 0;
  std::int64_t failures = 0;
  double min_slack = 0.0;  // smallest rhs - lhs seen
  TrianglePoint tightest;
  std::optional<TrianglePoint> first_failure;
};
TriangleSweep sweep_triangle_case(TriangleKind kind, std::int64_t samples, Rng& rng);

// The ++- equal-arm boundary polynomial -4y^4 + 22y^3 - 32y^2 + 19y - 4.
double case_2c_quartic(double y);

// (-1 + 4x - 2x^2) / x^2, the bound f must clear on (0, 1/2].
double f_requirement(double x);

struct FConstantCheck {
  bool ok = false;
  double min_gap = 0.0;       // min of f(x) - requirement over the grid
  double min_gap_at = 0.0;
  double near_tight_gap = 0.0;  // smallest gap on [0.45, 0.5)
  double gap_at_half = 0.0;
};
// Checks min(c + x, 2) against the requirement, c = 1.515 unless given.
// Throws std::invalid_argument unless 0 < grid_step <= 0.05.
FConstantCheck verify_f_constant(double grid_step, double plus_constant = kPivotPlusConstant);

}  // namespace corrclust
