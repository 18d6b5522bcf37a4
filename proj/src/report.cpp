#include "corrclust/report.hpp"

#include <cmath>

namespace corrclust {

namespace {

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json trace_json(const IterationTrace& t, bool set_method) {
  Json j;
  j["pivot"] = t.pivot;
  if (set_method) j["s"] = t.size;
  j["cluster_size"] = t.cluster_size;
  if (!set_method) {
    j["minus_taken"] = t.minus_taken;
    j["plus_taken"] = t.plus_taken;
    j["cleanup"] = t.cleanup;
  }
  return j;
}

}  // namespace

Json to_json(const Clustering& c) {
  Json out = Json::array();
  for (const auto& cl : c.clusters()) out.push_back(cl);
  return out;
}

Json to_json(const BudgetTotals& b) {
  Json j;
  j["lp"] = b.lp;
  j["error"] = b.error;
  j["difference"] = b.difference;
  j["total"] = b.total();
  return j;
}

Json to_json(const RoundingReport& r) {
  const bool set_method = r.method == "set";
  Json j;
  j["method"] = r.method;
  j["cost"] = r.cost;
  j["mean_trial_cost"] = r.mean_cost();
  j["clustering"] = to_json(r.clustering);
  j["released"] = to_json(r.released);
  j["ceiling"] = to_json(r.ceiling);
  j["ledger_gap"] = r.ledger_gap();
  j["ledger_complete"] = r.ledger_complete(r.clustering.size());
  j["measured_eps_r"] = r.measured_eps_r;
  j["lp_solves"] = r.lp_solves;
  j["trial_costs"] = Json::array();
  for (const auto& t : r.trials) j["trial_costs"].push_back(t.cost);
  j["trace"] = Json::array();
  for (const auto& t : r.trace) j["trace"].push_back(trace_json(t, set_method));
  if (set_method) {
    j["iteration_checks"] = Json::array();
    for (const auto& c : r.checks) {
      Json k;
      k["remaining"] = c.remaining;
      k["y_empty"] = c.y_empty;
      k["clustered_deviation"] = c.clustered_deviation;
      k["expected_cost"] = c.expected_cost;
      k["expected_budget"] = to_json(c.expected_budget);
      k["pair_error"] = c.pair_error;
      k["eps_r"] = c.eps_r;
      k["analytic_gap"] = c.analytic_gap;
      j["iteration_checks"].push_back(std::move(k));
    }
  } else {
    j["error_charges"] = Json::array();
    for (const auto& c : r.error_charges) {
      Json k;
      k["atom"] = c.atom;
      k["neighbors"] = c.neighbors;
      k["alg"] = c.alg;
      k["delta"] = c.delta;
      k["charged"] = c.charged();
      j["error_charges"].push_back(std::move(k));
    }
  }
  return j;
}

Json to_json(const EdgeBoundCheck& c) {
  Json j;
  j["pairs"] = c.pairs;
  j["violations"] = c.violations;
  j["max_excess"] = c.max_excess;
  j["combined"] = c.combined;
  j["lp"] = c.lp;
  j["ratio"] = kCombinedRatio;
  j["ok"] = c.ok();
  return j;
}

Json to_json(const CombinedReport& r) {
  Json j;
  j["chosen"] = r.chosen;
  j["cost"] = r.cost;
  j["clustering"] = to_json(r.clustering);
  j["measured_eps_r"] = r.measured_eps_r();
  j["edge_bound"] = to_json(r.edge_check);
  j["set"] = to_json(r.set);
  j["pivot"] = to_json(r.pivot);
  return j;
}

Json to_json(const lp::SeparationCertificate& c) {
  Json j;
  j["provenance"] = c.provenance;
  j["b"] = c.b;
  j["slack_at_rejected"] = c.slack(c.rejected);
  j["w"] = vector_json(c.w);
  j["rejected"] = vector_json(c.rejected);
  return j;
}

Json to_json(const PipelineReport& r) {
  Json j;
  j["n"] = r.n;
  j["pairs"] = r.pairs;
  j["admissible_pairs"] = r.admissible;
  j["atoms"] = r.atoms;
  j["triangle_lp_cost"] = r.triangle_lp_cost;
  j["lp_cost"] = r.lp_cost;
  j["cuts"] = r.cuts;
  j["cut_provenance"] = r.cut_provenance;
  j["opt"] = r.opt ? Json(*r.opt) : Json(nullptr);
  if (r.certified()) {
    j["outcome"] = "certificate";
    j["certificate"] = to_json(*r.certificate);
    return j;
  }
  j["outcome"] = "clustering";
  j["cost"] = r.cost;
  j["ratio_to_opt"] = optional_number(r.ratio_to_opt);
  j["ratio_to_lp"] = optional_number(r.ratio_to_lp);
  j["guarantee_bound"] = r.guarantee_bound;
  j["guarantee_ok"] = r.guarantee_ok;
  if (r.combined) j["rounding"] = to_json(*r.combined);
  return j;
}

Json to_json(const FinalRatio& r) {
  Json j;
  j["max"] = r.max;
  j["argmax"] = r.argmax;
  j["bound"] = kCombinedRatio;
  j["minus_edge"] = r.minus_edge;
  j["convex_before_knee"] = r.convex_before_knee;
  j["decreasing_after_knee"] = r.decreasing_after_knee;
  j["ok"] = r.ok();
  return j;
}

Json to_json(const TrianglePoint& p) {
  Json j;
  j["y_ab"] = p.y_ab;
  j["y_ac"] = p.y_ac;
  j["y_bc"] = p.y_bc;
  j["y_abc"] = p.y_abc;
  return j;
}

Json to_json(const TriangleSweep& s) {
  Json j;
  j["kind"] = triangle_kind_name(s.kind);
  j["samples"] = s.samples;
  j["failures"] = s.failures;
  j["min_slack"] = s.min_slack;
  j["tightest"] = to_json(s.tightest);
  if (s.first_failure) j["first_failure"] = to_json(*s.first_failure);
  j["ok"] = s.failures == 0;
  return j;
}

Json to_json(const FConstantCheck& c) {
  Json j;
  j["min_gap"] = c.min_gap;
  j["min_gap_at"] = c.min_gap_at;
  j["near_tight_gap"] = c.near_tight_gap;
  j["gap_at_half"] = c.gap_at_half;
  j["ok"] = c.ok;
  return j;
}

std::string render(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace corrclust
