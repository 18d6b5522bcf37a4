#include "corrclust/round_pivot.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>
#include <string>

#include "corrclust/lp/relaxations.hpp"

namespace corrclust {

double PivotBudget::f_plus(double x) { return std::min(kPivotPlusConstant + x, 2.0); }

double PivotBudget::lp(Sign s, double x) {
  return s == Sign::kPlus ? f_plus(x) * x : kMinusCoefficient * (1.0 - x);
}

BudgetTotals pivot_budget_ceilings(const SignedGraph& g, const PreclusteredInstance& p, const Metric& x,
                                   double epsilon) {
  BudgetTotals t;
  const int n = g.size();
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) t.lp += PivotBudget::lp(g.sign(u, v), x(u, v));
  t.error = epsilon * static_cast<double>(p.admissible_count());
  return t;
}

namespace {

constexpr double kCrossAtomMass = 1e-7;

VertexMask mask_of(const std::vector<Vertex>& vs) {
  VertexMask m = 0;
  for (Vertex v : vs) m |= lp::bit(v);
  return m;
}

std::vector<std::vector<Vertex>> units_in(const PreclusteredInstance& p, VertexMask remaining) {
  std::vector<std::vector<Vertex>> out;
  for (auto& k : p.pseudo_atoms())
    if (remaining & lp::bit(k.front())) out.push_back(std::move(k));
  return out;
}

}  // namespace

CleanupCandidate cleanup_candidate(const SignedGraph& g, const PreclusteredInstance& p, const Metric& x,
                                   VertexMask remaining, const std::vector<Vertex>& atom, double epsilon) {
  CleanupCandidate c;
  c.atom = atom;
  const VertexMask k = mask_of(atom);
  for (Vertex u : atom)
    for (Vertex v : lp::members(remaining)) {
      if (v == u || ((k & lp::bit(v)) && v < u)) continue;
      const Sign s = g.sign(u, v);
      const bool inside = (k & lp::bit(v)) != 0;
      if (inside ? s == Sign::kMinus : s == Sign::kPlus) c.alg += 1.0;
      c.delta += PivotBudget::lp(s, x(u, v));
      if (p.classify(u, v) == PairClass::kAdmissible) c.delta += epsilon;
    }
  return c;
}

std::optional<CleanupCandidate> cleanup(const SignedGraph& g, const PreclusteredInstance& p, const Metric& x,
                                        VertexMask remaining, double epsilon) {
  for (const auto& k : units_in(p, remaining)) {
    CleanupCandidate c = cleanup_candidate(g, p, x, remaining, k, epsilon);
    if (c.delta >= c.alg) return c;
  }
  return std::nullopt;
}

PivotUnits pivot_units(const SignedGraph& g, const PreclusteredInstance& p, const lp::LiftedSolution& y,
                       Vertex pivot, VertexMask remaining) {
  PivotUnits out;
  const int own = p.atom_members(pivot).front();
  for (auto& k : units_in(p, remaining)) {
    if (k.front() == own) continue;
    if (p.classify(pivot, k.front()) == PairClass::kNonAdmissible) {
      if (y.y(lp::bit(pivot) | lp::bit(k.front())) > kCrossAtomMass)
        throw std::logic_error("pivot lift puts mass on a non-admissible pair");
      continue;
    }
    const bool plus = std::any_of(k.begin(), k.end(), [&](Vertex v) { return g.is_plus(pivot, v); });
    (plus ? out.plus : out.minus).push_back(std::move(k));
  }
  return out;
}

PivotDraw pivot_cluster(const SignedGraph& g, const PreclusteredInstance& p, const lp::LiftedSolution& y,
                        Vertex pivot, VertexMask remaining, int depth, Rng& rng) {
  PivotUnits units = pivot_units(g, p, y, pivot, remaining);
  PivotDraw d;
  d.cluster = p.atom_members(pivot);
  for (const auto& k : units.minus)
    if (bernoulli(rng, y.y(lp::bit(pivot) | lp::bit(k.front())))) {
      d.cluster.insert(d.cluster.end(), k.begin(), k.end());
      ++d.minus_taken;
    }
  if (!units.plus.empty()) {
    const ConditionedMarginals m = condition_pivot(y, pivot, std::move(units.plus));
    const ItemMask taken = rt_sample(m, depth < 0 ? max_depth(m) : depth, rng);
    const auto vs = m.expand(taken);
    d.cluster.insert(d.cluster.end(), vs.begin(), vs.end());
    d.plus_taken = std::popcount(taken);
  }
  std::sort(d.cluster.begin(), d.cluster.end());
  return d;
}

std::vector<AtomErrorCharge> error_charge_diagnostics(const SignedGraph& g, const PreclusteredInstance& p,
                                                      const Metric& x, VertexMask remaining, double epsilon,
                                                      double eps_r) {
  std::vector<AtomErrorCharge> out;
  for (const auto& k : units_in(p, remaining)) {
    AtomErrorCharge c;
    c.atom = k;
    std::vector<Vertex> nbrs;
    for (Vertex v : p.admissible_neighbors(k.front()))
      if (remaining & lp::bit(v)) nbrs.push_back(v);
    c.neighbors = static_cast<int>(nbrs.size());
    auto plus_adm = [&](Vertex u, Vertex v) { return g.is_plus(u, v) && p.is_admissible(u, v); };
    std::int64_t wedges = 0;
    for (Vertex u : k)
      for (std::size_t a = 0; a < nbrs.size(); ++a)
        for (std::size_t b = a + 1; b < nbrs.size(); ++b)
          if (plus_adm(u, nbrs[a]) && plus_adm(u, nbrs[b])) ++wedges;
    c.alg = eps_r * static_cast<double>(wedges);
    for (Vertex u : nbrs)
      for (Vertex v : k)
        for (Vertex w : nbrs) c.delta += epsilon * (1.0 - std::min(x(u, v), x(u, w)));
    out.push_back(std::move(c));
  }
  return out;
}

RoundOutcome pivot_based_round(const SignedGraph& g, const PreclusteredInstance& p, const Metric& x,
                               const RoundingParams& params) {
  params.validate();
  const int n = g.size();
  if (p.size() != n || x.size() != n) throw std::invalid_argument("instance size mismatch");
  if (n > 64) throw std::invalid_argument("pivot rounding supports at most 64 vertices");

  RoundingReport report;
  report.method = "pivot";
  report.ceiling = pivot_budget_ceilings(g, p, x, params.epsilon);
  const lp::LiftProgram prog = lp::build_pivot_lp(g, p, x, params.r);
  const lp::LpResult r = lp::solve(prog.program);
  report.lp_solves = 1;
  if (r.infeasible()) return lp::separation_from_infeasibility(prog.program, r, "pivot");
  if (!r.optimal())
    throw std::runtime_error(std::string("pivot relaxation solve failed: ") + lp::lp_status_name(r.status));
  const lp::LiftedSolution y = prog.extract(r.values);

  const VertexMask all = n == 0 ? 0 : (n == 64 ? ~VertexMask{0} : (VertexMask{1} << n) - 1);
  // Exact pair error of each (pivot, remaining) conditioning met so far.
  std::map<std::pair<Vertex, VertexMask>, double> seen;
  std::optional<TrialSummary> best;
  for (int trial = 0; trial < params.trials; ++trial) {
    Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(trial)));
    BudgetLedger ledger(n);
    for (Vertex v = 0; v < n; ++v) ledger.release_vertex(v, 0.0);
    std::vector<IterationTrace> trace;
    std::vector<std::vector<Vertex>> clusters;
    for (VertexMask remaining = all; remaining != 0;) {
      std::vector<Vertex> cluster;
      IterationTrace step;
      if (auto k = cleanup(g, p, x, remaining, params.epsilon)) {
        cluster = k->atom;
        step.pivot = cluster.front();
        step.cleanup = true;
      } else {
        const auto verts = lp::members(remaining);
        const Vertex pivot = verts[uniform_below(rng, verts.size())];
        const PivotDraw d = pivot_cluster(g, p, y, pivot, remaining, params.depth, rng);
        if (auto [it, fresh] = seen.try_emplace({pivot, remaining}, 0.0); fresh) {
          PivotUnits units = pivot_units(g, p, y, pivot, remaining);
          if (!units.plus.empty()) {
            const ConditionedMarginals m = condition_pivot(y, pivot, std::move(units.plus));
            it->second = exact_pairwise_error(m, params.depth < 0 ? max_depth(m) : params.depth);
          }
          report.measured_eps_r = std::max(report.measured_eps_r, it->second);
        }
        cluster = d.cluster;
        step.pivot = pivot;
        step.minus_taken = d.minus_taken;
        step.plus_taken = d.plus_taken;
      }
      const VertexMask cmask = mask_of(cluster);
      if ((cmask & ~remaining) != 0) throw std::logic_error("cluster leaves the remaining vertices");
      for (Vertex v : cluster)
        for (Vertex w : lp::members(remaining)) {
          if (w == v || ((cmask & lp::bit(w)) && w < v)) continue;
          const Sign s = g.sign(v, w);
          const bool together = (cmask & lp::bit(w)) != 0;
          const bool wrong = s == Sign::kPlus ? !together : together;
          ledger.release_pair(v, w, PivotBudget::lp(s, x(v, w)),
                              p.classify(v, w) == PairClass::kAdmissible ? params.epsilon : 0.0, wrong ? 1.0 : 0.0);
        }
      step.cluster_size = static_cast<int>(cluster.size());
      trace.push_back(step);
      clusters.push_back(std::move(cluster));
      remaining &= ~cmask;
    }

    const Clustering result = Clustering::from_clusters(n, clusters);
    TrialSummary summary{clustering_cost(g, result), ledger.released(), ledger.released_pairs(),
                         ledger.released_vertices()};
    if (static_cast<double>(summary.cost) != ledger.realized_cost())
      throw std::logic_error("ledger cost disagrees with the clustering cost");
    report.trials.push_back(summary);
    if (!best || summary.cost < best->cost) {
      best = summary;
      report.clustering = result;
      report.cost = summary.cost;
      report.released = summary.released;
      report.trace = std::move(trace);
    }
  }
  report.error_charges = error_charge_diagnostics(g, p, x, all, params.epsilon, report.measured_eps_r);
  return report;
}

}  // namespace corrclust
