#include "corrclust/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "corrclust/round_pivot.hpp"

namespace corrclust {

namespace {

constexpr double kKnee = 2.0 - kPivotPlusConstant;

double f(double x) { return PivotBudget::f_plus(x); }

}  // namespace

double combined_plus_ratio(double x) { return kSetWeight * 2.0 / (1.0 + x) + kPivotWeight * f(x); }

double combined_minus_ratio() {
  return (kSetWeightHundredths * 1 + kPivotWeightHundredths * PivotBudget::kMinusCoefficient) / 100.0;
}

FinalRatio verify_final_ratio(double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 1e-3)) throw std::invalid_argument("grid step must be in (0, 1e-3]");
  FinalRatio out;
  out.minus_edge = combined_minus_ratio();
  std::vector<double> xs;
  const auto steps = static_cast<std::int64_t>(std::ceil(1.0 / grid_step));
  for (std::int64_t i = 0; i <= steps; ++i) xs.push_back(std::min(1.0, static_cast<double>(i) * grid_step));
  xs.push_back(0.0);
  xs.push_back(kKnee);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  out.max = -1.0;
  for (double x : xs) {
    const double g = combined_plus_ratio(x);
    if (g > out.max) {
      out.max = g;
      out.argmax = x;
    }
  }
  // Shape checks on uniform sub-grids either side of the knee.
  auto uniform = [&](double a, double b) {
    std::vector<double> v;
    const auto k = std::max<std::int64_t>(2, static_cast<std::int64_t>(std::ceil((b - a) / grid_step)));
    for (std::int64_t i = 0; i <= k; ++i) v.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(k));
    return v;
  };
  const auto left = uniform(0.0, kKnee);
  for (std::size_t i = 1; i + 1 < left.size(); ++i) {
    const double second =
        combined_plus_ratio(left[i - 1]) - 2.0 * combined_plus_ratio(left[i]) + combined_plus_ratio(left[i + 1]);
    if (second < -1e-12) out.convex_before_knee = false;
  }
  const auto right = uniform(kKnee, 1.0);
  for (std::size_t i = 1; i < right.size(); ++i)
    if (combined_plus_ratio(right[i]) > combined_plus_ratio(right[i - 1]) + 1e-15) out.decreasing_after_knee = false;
  return out;
}

const char* triangle_kind_name(TriangleKind k) {
  switch (k) {
    case TriangleKind::kPlusPlusPlus: return "+++";
    case TriangleKind::kPlusPlusMinus: return "++-";
    case TriangleKind::kPlusMinusMinus: return "+--";
    case TriangleKind::kMinusMinusMinus: return "---";
  }
  return "?";
}

TriangleKind parse_triangle_kind(const std::string& name) {
  for (TriangleKind k : {TriangleKind::kPlusPlusPlus, TriangleKind::kPlusPlusMinus, TriangleKind::kPlusMinusMinus,
                         TriangleKind::kMinusMinusMinus})
    if (name == triangle_kind_name(k)) return k;
  throw std::invalid_argument("unknown triangle kind: " + name);
}

void TrianglePoint::validate(double tol) const {
  for (double v : {y_ab, y_ac, y_bc, y_abc})
    if (!(v >= -tol && v <= 1.0 + tol)) throw std::invalid_argument("triangle value outside [0, 1]");
  for (double v : {y_ab_c(), y_ac_b(), y_a_bc(), y_a_b_c()})
    if (!(v >= -tol)) throw std::invalid_argument("negative partition weight");
}

TrianglePoint point_from_partitions(double abc, double ab_c, double ac_b, double a_bc, double a_b_c) {
  const double total = abc + ab_c + ac_b + a_bc + a_b_c;
  if (!(std::abs(total - 1.0) <= 1e-9)) throw std::invalid_argument("partition weights must sum to 1");
  TrianglePoint p{ab_c + abc, ac_b + abc, a_bc + abc, abc};
  p.validate();
  return p;
}

TrianglePoint sample_triangle_point(Rng& rng) {
  // Normalized exponentials are uniform on the simplex.
  std::array<double, 5> w{};
  double total = 0.0;
  for (double& v : w) {
    v = -std::log1p(-uniform01(rng));
    total += v;
  }
  for (double& v : w) v /= total;
  return TrianglePoint{w[1] + w[0], w[2] + w[0], w[3] + w[0], w[0]};
}

TriangleCheck verify_triangle_case(TriangleKind kind, const TrianglePoint& pt) {
  pt.validate(1e-9);
  const double ab = pt.y_ab, ac = pt.y_ac, bc = pt.y_bc, abc = pt.y_abc;
  // Pr[at least one of the other two joins | pivot], pairwise form.
  auto either = [](double p, double q) { return p + q - p * q; };
  TriangleCheck c;
  switch (kind) {
    case TriangleKind::kPlusPlusPlus: {
      c.lhs = 2.0 * (ab + ac + bc) - 6.0 * abc;
      c.rhs = 1.5 * ((1.0 - bc) * (ab + ac - abc) + (1.0 - ac) * (ab + bc - abc) + (1.0 - ab) * (ac + bc - abc));
      break;
    }
    case TriangleKind::kPlusPlusMinus: {
      c.lhs = abc + ab + ac + 2.0 * bc - 2.0 * (ab + ac) * bc;
      c.rhs = 2.0 * (ab + ac - abc) * bc + f(1.0 - ac) * either(ab, bc) * (1.0 - ac) +
              f(1.0 - ab) * either(ac, bc) * (1.0 - ab);
      break;
    }
    case TriangleKind::kPlusMinusMinus: {
      const double x_bc = 1.0 - bc;
      c.lhs = (2.0 - x_bc) * (ab + ac) - 2.0 * ab * ac;
      c.rhs = either(ab, ac) * x_bc + 2.0 * either(ab, bc) * ac + 2.0 * either(ac, bc) * ab;
      break;
    }
    case TriangleKind::kMinusMinusMinus: {
      c.lhs = ab * ac + ab * bc + ac * bc;
      c.rhs = either(ab, ac) * bc + either(ab, bc) * ac + either(ac, bc) * ab;
      break;
    }
  }
  c.ok = c.lhs <= c.rhs + kVerifyTolerance;
  return c;
}

TriangleSweep sweep_triangle_case(TriangleKind kind, std::int64_t samples, Rng& rng) {
  TriangleSweep s;
  s.kind = kind;
  s.samples = samples;
  s.min_slack = INFINITY;
  for (std::int64_t i = 0; i < samples; ++i) {
    const TrianglePoint pt = sample_triangle_point(rng);
    const TriangleCheck c = verify_triangle_case(kind, pt);
    if (c.rhs - c.lhs < s.min_slack) {
      s.min_slack = c.rhs - c.lhs;
      s.tightest = pt;
    }
    if (!c.ok) {
      ++s.failures;
      if (!s.first_failure) s.first_failure = pt;
    }
  }
  return s;
}

double case_2c_quartic(double y) { return (((-4.0 * y + 22.0) * y - 32.0) * y + 19.0) * y - 4.0; }

double f_requirement(double x) { return (-1.0 + 4.0 * x - 2.0 * x * x) / (x * x); }

FConstantCheck verify_f_constant(double grid_step, double plus_constant) {
  if (!(grid_step > 0.0 && grid_step <= 0.05)) throw std::invalid_argument("grid step must be in (0, 0.05]");
  const auto fc = [&](double x) { return std::min(plus_constant + x, 2.0); };
  const double knee = 2.0 - plus_constant;
  FConstantCheck out;
  out.min_gap = INFINITY;
  out.near_tight_gap = INFINITY;
  const auto steps = static_cast<std::int64_t>(std::ceil(0.5 / grid_step));
  std::vector<double> xs;
  for (std::int64_t i = 1; i <= steps; ++i) xs.push_back(std::min(0.5, static_cast<double>(i) * grid_step));
  if (knee > 0.0 && knee <= 0.5) xs.push_back(knee);
  for (double x : xs) {
    const double gap = fc(x) - f_requirement(x);
    if (gap < out.min_gap) {
      out.min_gap = gap;
      out.min_gap_at = x;
    }
    if (x >= 0.45 && x < 0.5) out.near_tight_gap = std::min(out.near_tight_gap, gap);
  }
  out.gap_at_half = fc(0.5) - f_requirement(0.5);
  out.ok = out.min_gap >= -kVerifyTolerance && out.near_tight_gap < 0.01 && std::abs(out.gap_at_half) <= 1e-12;
  return out;
}

}  // namespace corrclust
