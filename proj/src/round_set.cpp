#include "corrclust/round_set.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>

#include "corrclust/lp/relaxations.hpp"

namespace corrclust {

double set_lp_budget(Sign s, double x) {
  return s == Sign::kPlus ? 2.0 * x / (1.0 + x) : (1.0 - x) / (1.0 + x);
}

BudgetTotals set_budget_ceilings(const SignedGraph& g, const PreclusteredInstance& p, const Metric& x,
                                 double epsilon) {
  BudgetTotals t;
  const int n = g.size();
  for (Vertex u = 0; u < n; ++u) {
    t.difference += 2.0 * epsilon * p.admissible_degree(u);
    for (Vertex v = u + 1; v < n; ++v) t.lp += set_lp_budget(g.sign(u, v), x(u, v));
  }
  t.error = epsilon * static_cast<double>(p.admissible_count());
  return t;
}

std::vector<SetBranch> set_branches(const lp::LiftedSolution& y) {
  if (y.kind() != lp::LiftKind::kSet) throw std::invalid_argument("set branches need a set lift");
  const double y_empty = y.y(VertexMask{0});
  if (!(y_empty > 0.0)) throw std::invalid_argument("set lift with no cluster mass");
  std::vector<SetBranch> out;
  for (int s = 1; s <= y.max_size(); ++s)
    for (Vertex u : y.vertices()) {
      const double ys = y.y(s, lp::bit(u));
      if (ys > kMinBranchMass) out.push_back({s, u, ys / (s * y_empty)});
    }
  if (out.empty()) throw std::invalid_argument("set lift with no sampleable branch");
  return out;
}

namespace {

// Pseudo-atoms of p inside the vertex list, by smallest member; atoms lie
// wholly inside or outside every V' the rounding visits.
std::vector<std::vector<Vertex>> units_within(const PreclusteredInstance& p, const std::vector<Vertex>& vertices) {
  std::vector<std::vector<Vertex>> out;
  for (Vertex v : vertices) {
    auto k = p.atom_members(v);
    if (k.front() == v) out.push_back(std::move(k));
  }
  return out;
}

int resolve_depth(const ConditionedMarginals& m, int depth) { return depth < 0 ? max_depth(m) : depth; }

}  // namespace

ConditionedMarginals set_branch_marginals(const PreclusteredInstance& p, const lp::LiftedSolution& y, int s,
                                          Vertex u) {
  const int own = p.atom_members(u).front();
  auto items = units_within(p, y.vertices());
  std::erase_if(items, [&](const std::vector<Vertex>& k) { return k.front() == own; });
  return condition_set(y, s, u, std::move(items));
}

namespace {

std::vector<Vertex> cluster_of_draw(const PreclusteredInstance& p, const ConditionedMarginals& m, Vertex u,
                                    ItemMask taken) {
  std::vector<Vertex> c = p.atom_members(u);
  const auto rest = m.expand(taken);
  c.insert(c.end(), rest.begin(), rest.end());
  std::sort(c.begin(), c.end());
  return c;
}

std::size_t pick_branch(const std::vector<SetBranch>& branches, Rng& rng) {
  double total = 0.0;
  for (const auto& b : branches) total += b.weight;
  double t = uniform01(rng) * total;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    t -= branches[i].weight;
    if (t < 0.0) return i;
  }
  return branches.size() - 1;
}

}  // namespace

SetClusterDraw set_based_cstr_clst(const PreclusteredInstance& p, const lp::LiftedSolution& y, int depth,
                                   Rng& rng) {
  const auto branches = set_branches(y);
  const SetBranch& b = branches[pick_branch(branches, rng)];
  const ConditionedMarginals m = set_branch_marginals(p, y, b.size, b.u);
  const ItemMask taken = rt_sample(m, resolve_depth(m, depth), rng);
  return {b.size, b.u, cluster_of_draw(p, m, b.u, taken)};
}

ClusterInclusion set_cluster_inclusion(const PreclusteredInstance& p, const lp::LiftedSolution& y, int depth) {
  const int n = y.instance_size();
  ClusterInclusion out{Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n), 0.0};
  const auto& verts = y.vertices();
  std::vector<int> item_of(n, -1);
  std::vector<double> q(n);
  for (const SetBranch& b : set_branches(y)) {
    const ConditionedMarginals m = set_branch_marginals(p, y, b.size, b.u);
    const InclusionTable t = exact_inclusion(m, resolve_depth(m, depth));
    out.eps_r = std::max(out.eps_r, pairwise_error(m, t.joint));
    // -2 marks u's atom, which is always taken.
    for (Vertex v : verts) item_of[v] = -2;
    for (int i = 0; i < m.item_count(); ++i)
      for (Vertex v : m.item(i)) item_of[v] = i;
    for (Vertex v : verts) q[v] = item_of[v] == -2 ? 1.0 : t.marginal[item_of[v]];
    const double base = y.y(b.size, lp::bit(b.u));
    for (std::size_t a = 0; a < verts.size(); ++a) {
      const Vertex v = verts[a];
      out.single[v] += b.weight * q[v];
      for (std::size_t c = a + 1; c < verts.size(); ++c) {
        const Vertex w = verts[c];
        const int iv = item_of[v], iw = item_of[w];
        double both;
        if (iv == -2) both = q[w];
        else if (iw == -2) both = q[v];
        else if (iv == iw) both = q[v];
        else both = t.joint(iv, iw);
        out.joint(v, w) += b.weight * both;
        const VertexMask triple = lp::bit(b.u) | lp::bit(v) | lp::bit(w);
        if (lp::popcount(triple) <= y.order())
          out.pair_error(v, w) += b.weight * std::abs(both - y.y(b.size, triple) / base);
      }
    }
  }
  for (Vertex v : verts) out.joint(v, v) = out.single[v];
  out.joint = out.joint.selfadjointView<Eigen::Upper>();
  out.pair_error = out.pair_error.selfadjointView<Eigen::Upper>();
  return out;
}

SetIterationCheck analyze_set_iteration(const SignedGraph& g, const PreclusteredInstance& p, const Metric& x,
                                        const lp::LiftedSolution& y, double epsilon, int depth) {
  const ClusterInclusion inc = set_cluster_inclusion(p, y, depth);
  SetIterationCheck c;
  const auto& verts = y.vertices();
  c.remaining = static_cast<int>(verts.size());
  c.y_empty = y.y(VertexMask{0});
  c.eps_r = inc.eps_r;
  for (std::size_t a = 0; a < verts.size(); ++a) {
    const Vertex v = verts[a];
    c.clustered_deviation = std::max(c.clustered_deviation, std::abs(inc.single[v] - 1.0 / c.y_empty));
    c.expected_budget.difference += inc.single[v] * 2.0 * epsilon * p.admissible_degree(v);
    for (std::size_t b = a + 1; b < verts.size(); ++b) {
      const Vertex w = verts[b];
      const double both = inc.joint(v, w);
      const double decided = inc.single[v] + inc.single[w] - both;
      const Sign s = g.sign(v, w);
      c.expected_cost += s == Sign::kPlus ? inc.single[v] + inc.single[w] - 2.0 * both : both;
      c.expected_budget.lp += decided * set_lp_budget(s, x(v, w));
      if (p.classify(v, w) == PairClass::kAdmissible) c.expected_budget.error += decided * epsilon;
      c.pair_error += inc.pair_error(v, w);
    }
  }
  c.analytic_gap = c.expected_cost - (c.expected_budget.lp + c.expected_budget.difference + 3.0 * c.pair_error);
  return c;
}

namespace {

std::string mask_label(VertexMask m) {
  std::string s;
  for (Vertex v : lp::members(m)) s += (s.empty() ? "" : ".") + std::to_string(v);
  return s;
}

struct SetEntry {
  lp::LiftedSolution y;
  std::vector<SetBranch> branches;
  std::vector<std::optional<ConditionedMarginals>> marginals;
};

struct SetSolve {
  lp::LiftProgram program;
  lp::LpResult result;
  int solves = 0;
};

// Solves the pruned relaxation. An infeasible answer is confirmed on the full
// program by widening its Farkas witness; the full program is only solved
// directly if that fails.
SetSolve solve_set_relaxation(const std::vector<Vertex>& verts, const PreclusteredInstance& p, const Metric& x,
                              const RoundingParams& params) {
  SetSolve out;
  lp::LiftProgram pruned = lp::build_set_lp(verts, p, x, params.r, params.epsilon, true);
  lp::LpResult r = lp::solve(pruned.program);
  ++out.solves;
  if (r.optimal()) {
    out.program = std::move(pruned);
    out.result = std::move(r);
    return out;
  }
  out.program = lp::build_set_lp(verts, p, x, params.r, params.epsilon);
  if (r.infeasible()) {
    auto widened = lp::widen_pruned_witness(pruned, *r.farkas, out.program, x);
    if (widened && lp::farkas_margin(out.program.program, *widened) > 1e-9) {
      r.farkas = std::move(widened);
      out.result = std::move(r);
      return out;
    }
  }
  out.result = lp::solve(out.program.program);
  ++out.solves;
  return out;
}

}  // namespace

RoundOutcome set_based_round(const SignedGraph& g, const PreclusteredInstance& p, const Metric& x,
                             const RoundingParams& params) {
  params.validate();
  const int n = g.size();
  if (n >= kMaskVertices) throw std::invalid_argument("set rounding supports fewer than 64 vertices");
  if (p.size() != n || x.size() != n) throw std::invalid_argument("instance, preclustering and metric sizes differ");

  RoundingReport report;
  report.method = "set";
  report.ceiling = set_budget_ceilings(g, p, x, params.epsilon);
  std::map<VertexMask, SetEntry> cache;
  std::optional<TrialSummary> best;
  const VertexMask all = n == 0 ? 0 : (VertexMask{1} << n) - 1;

  for (int trial = 0; trial < params.trials; ++trial) {
    Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(trial)));
    BudgetLedger ledger(n);
    std::vector<IterationTrace> trace;
    std::vector<std::vector<Vertex>> clusters;
    std::vector<char> in_c(n, 0);
    for (VertexMask remaining = all; remaining != 0;) {
      auto it = cache.find(remaining);
      if (it == cache.end()) {
        const auto verts = lp::members(remaining);
        SetSolve solved = solve_set_relaxation(verts, p, x, params);
        report.lp_solves += solved.solves;
        const lp::LiftProgram* source = &solved.program;
        lp::LpResult& r = solved.result;
        if (r.infeasible())
          return lp::separation_from_infeasibility(source->program, r, "set V'=" + mask_label(remaining));
        if (!r.optimal())
          throw std::runtime_error(std::string("set relaxation solve failed: ") + lp::lp_status_name(r.status));
        SetEntry e;
        e.y = source->extract(r.values);
        e.branches = set_branches(e.y);
        e.marginals.resize(e.branches.size());
        const SetIterationCheck check = analyze_set_iteration(g, p, x, e.y, params.epsilon, params.depth);
        report.measured_eps_r = std::max(report.measured_eps_r, check.eps_r);
        report.checks.push_back(check);
        it = cache.emplace(remaining, std::move(e)).first;
      }
      SetEntry& e = it->second;
      const std::size_t bi = pick_branch(e.branches, rng);
      const SetBranch& b = e.branches[bi];
      if (!e.marginals[bi]) e.marginals[bi] = set_branch_marginals(p, e.y, b.size, b.u);
      const ConditionedMarginals& m = *e.marginals[bi];
      const auto cluster = cluster_of_draw(p, m, b.u, rt_sample(m, resolve_depth(m, params.depth), rng));

      VertexMask cmask = 0;
      for (Vertex v : cluster) cmask |= lp::bit(v);
      if ((cmask & ~remaining) != 0) throw std::logic_error("sampled cluster leaves the remaining vertices");
      for (Vertex v : cluster) {
        in_c[v] = 1;
        ledger.release_vertex(v, 2.0 * params.epsilon * p.admissible_degree(v));
      }
      const auto verts = lp::members(remaining);
      for (std::size_t a = 0; a < verts.size(); ++a)
        for (std::size_t c = a + 1; c < verts.size(); ++c) {
          const Vertex v = verts[a], w = verts[c];
          if (!in_c[v] && !in_c[w]) continue;
          const Sign s = g.sign(v, w);
          const bool wrong = s == Sign::kPlus ? in_c[v] != in_c[w] : (in_c[v] && in_c[w]);
          ledger.release_pair(v, w, set_lp_budget(s, x(v, w)),
                              p.classify(v, w) == PairClass::kAdmissible ? params.epsilon : 0.0, wrong ? 1.0 : 0.0);
        }
      for (Vertex v : cluster) in_c[v] = 0;
      trace.push_back({b.u, b.size, static_cast<int>(cluster.size()), 0, 0, false});
      clusters.push_back(cluster);
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
  return report;
}

}  // namespace corrclust
