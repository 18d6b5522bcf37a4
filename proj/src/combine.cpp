#include "corrclust/combine.hpp"

#include <algorithm>
#include <future>
#include <stdexcept>

#include "corrclust/exact.hpp"
#include "corrclust/lp/relaxations.hpp"
#include "corrclust/round_pivot.hpp"
#include "corrclust/round_set.hpp"
#include "corrclust/verify.hpp"

namespace corrclust {

Clustering acn_pivot(const SignedGraph& g, Rng& rng) {
  const int n = g.size();
  std::vector<int> label(n, -1);
  std::vector<Vertex> remaining(n);
  for (Vertex v = 0; v < n; ++v) remaining[v] = v;
  int next = 0;
  while (!remaining.empty()) {
    const Vertex pivot = remaining[uniform_below(rng, remaining.size())];
    for (Vertex v : remaining)
      if (v == pivot || g.is_plus(pivot, v)) label[v] = next;
    std::erase_if(remaining, [&](Vertex v) { return label[v] == next; });
    ++next;
  }
  return Clustering(label);
}

EdgeBoundCheck combined_edge_bound(const SignedGraph& g, const Metric& x) {
  EdgeBoundCheck c;
  const int n = g.size();
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) {
      const Sign s = g.sign(u, v);
      const double xv = x(u, v);
      const double lp = s == Sign::kPlus ? xv : 1.0 - xv;
      const double combined = kSetWeight * set_lp_budget(s, xv) + kPivotWeight * PivotBudget::lp(s, xv);
      const double excess = combined - kCombinedRatio * lp;
      ++c.pairs;
      c.combined += combined;
      c.lp += lp;
      if (excess > 1e-12) ++c.violations;
      c.max_excess = std::max(c.max_excess, excess);
    }
  return c;
}

double CombinedReport::measured_eps_r() const { return std::max(set.measured_eps_r, pivot.measured_eps_r); }

CombinedOutcome combined_round(const SignedGraph& g, const PreclusteredInstance& p, const Metric& x,
                               const RoundingParams& params) {
  params.validate();
  auto set_side = std::async(std::launch::async, [&] { return set_based_round(g, p, x, params); });
  RoundOutcome pivot = pivot_based_round(g, p, x, params);
  RoundOutcome set = set_side.get();
  if (auto* c = std::get_if<lp::SeparationCertificate>(&set)) return std::move(*c);
  if (auto* c = std::get_if<lp::SeparationCertificate>(&pivot)) return std::move(*c);

  CombinedReport out;
  out.set = std::move(std::get<RoundingReport>(set));
  out.pivot = std::move(std::get<RoundingReport>(pivot));
  const bool pivot_wins = out.pivot.cost <= out.set.cost;
  const RoundingReport& best = pivot_wins ? out.pivot : out.set;
  out.chosen = pivot_wins ? "pivot" : "set";
  out.clustering = best.clustering;
  out.cost = best.cost;
  out.edge_check = combined_edge_bound(g, x);
  return out;
}

void PipelineParams::validate() const {
  agreement.validate();
  rounding.validate();
  if (oracle_limit < 0) throw std::invalid_argument("oracle limit must be >= 0");
  if (max_cuts < 0) throw std::invalid_argument("max cuts must be >= 0");
}

namespace {

std::optional<double> ratio(double num, double den) {
  if (den > 1e-9) return num / den;
  if (num <= 1e-9) return 1.0;
  return std::nullopt;
}

}  // namespace

PipelineReport full_pipeline(const SignedGraph& g, const PipelineParams& params, std::uint64_t seed) {
  params.validate();
  PipelineReport rep;
  const int n = g.size();
  rep.n = n;
  rep.pairs = pair_count(n);
  const PreclusteredInstance p = precluster(g, params.agreement);
  rep.admissible = p.admissible_count();
  rep.atoms = static_cast<int>(p.atoms().size());

  RoundingParams rp = params.rounding;
  rp.seed = seed;
  lp::LinearProgram triangle = lp::build_triangle_lp(g, p);
  for (;;) {
    const lp::LpResult r = lp::solve(triangle);
    if (!r.optimal())
      throw std::runtime_error(std::string("triangle LP solve failed: ") + lp::lp_status_name(r.status));
    const Metric x = lp::metric_from_solution(n, r.values);
    rep.lp_cost = fractional_cost(g, x);
    if (rep.cuts == 0) rep.triangle_lp_cost = rep.lp_cost;
    CombinedOutcome o = combined_round(g, p, x, rp);
    if (auto* c = std::get_if<CombinedReport>(&o)) {
      rep.combined = std::move(*c);
      break;
    }
    auto& cert = std::get<lp::SeparationCertificate>(o);
    if (rep.cuts >= params.max_cuts) {
      rep.certificate = std::move(cert);
      break;
    }
    lp::add_cut(triangle, cert);
    rep.cut_provenance.push_back(cert.provenance);
    ++rep.cuts;
  }

  if (n <= params.oracle_limit) rep.opt = brute_force_opt(g, params.oracle_limit).cost;
  if (!rep.combined) return rep;
  rep.cost = rep.combined->cost;
  const double reference = rep.opt ? static_cast<double>(*rep.opt) : rep.lp_cost;
  if (rep.opt) rep.ratio_to_opt = ratio(static_cast<double>(rep.cost), static_cast<double>(*rep.opt));
  rep.ratio_to_lp = ratio(static_cast<double>(rep.cost), rep.lp_cost);
  rep.guarantee_bound = kPipelineRatio * reference +
                        (rp.epsilon + rep.combined->measured_eps_r()) * static_cast<double>(rep.admissible);
  rep.guarantee_ok = static_cast<double>(rep.cost) <= rep.guarantee_bound + 1e-9;
  return rep;
}

}  // namespace corrclust
