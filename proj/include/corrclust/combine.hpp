#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "corrclust/core.hpp"
#include "corrclust/precluster.hpp"
#include "corrclust/random.hpp"
#include "corrclust/rounding.hpp"

namespace corrclust {

// Pivot on a uniform remaining vertex and take all its remaining + neighbors.
Clustering acn_pivot(const SignedGraph& g, Rng& rng);

// Per-pair comparison of 0.42 * (set budget) + 0.58 * (pivot budget) with
// 1.7257 times the pair's LP cost, over the LP parts of both budgets.
struct EdgeBoundCheck {
  std::int64_t pairs = 0;
  std::int64_t violations = 0;
  double max_excess = 0.0;  // largest combined - 1.7257 * lp, or 0
  double combined = 0.0;    // summed combined bound
  double lp = 0.0;          // summed LP cost
  bool ok() const { return violations == 0; }
};
EdgeBoundCheck combined_edge_bound(const SignedGraph& g, const Metric& x);

struct CombinedReport {
  RoundingReport set;
  RoundingReport pivot;
  std::string chosen;  // "pivot" or "set"; ties go to pivot
  Clustering clustering;
  std::int64_t cost = 0;
  EdgeBoundCheck edge_check;
  // Larger of the two measured correlated-rounding errors.
  double measured_eps_r() const;
};

using CombinedOutcome = std::variant<CombinedReport, lp::SeparationCertificate>;

// Runs both roundings (concurrently) and keeps the cheaper clustering. A
// certificate from either side is returned instead, set side first.
CombinedOutcome combined_round(const SignedGraph& g, const PreclusteredInstance& p, const Metric& x,
                               const RoundingParams& params);

struct PipelineParams {
  AgreementParams agreement;
  RoundingParams rounding;
  int oracle_limit = 16;
  // Separation planes folded back into the triangle LP before giving up; 0
  // returns the first certificate.
  int max_cuts = 8;

  void validate() const;
};

struct PipelineReport {
  int n = 0;
  std::int64_t pairs = 0;
  std::int64_t admissible = 0;
  int atoms = 0;
  double triangle_lp_cost = 0.0;  // before any cuts
  double lp_cost = 0.0;           // cost(x) of the metric that was rounded
  int cuts = 0;
  std::vector<std::string> cut_provenance;
  std::optional<CombinedReport> combined;
  std::optional<lp::SeparationCertificate> certificate;  // when rounding never succeeded
  std::optional<std::int64_t> opt;
  std::int64_t cost = 0;
  // cost / opt and cost / cost(x); 1 for 0 / 0, empty for c / 0 with c > 0.
  std::optional<double> ratio_to_opt;
  std::optional<double> ratio_to_lp;
  // 1.73 opt + (eps + eps_r) |E_adm|, with cost(x) standing in for opt
  // above the oracle limit.
  double guarantee_bound = 0.0;
  bool guarantee_ok = false;

  bool certified() const { return certificate.has_value(); }
};

inline constexpr double kPipelineRatio = 1.73;

// precluster, triangle LP, combined rounding; a certificate is added to the
// LP as a cut and the LP solved again, up to max_cuts times. Throws
// std::runtime_error on a solver failure.
PipelineReport full_pipeline(const SignedGraph& g, const PipelineParams& params, std::uint64_t seed);

}  // namespace corrclust
