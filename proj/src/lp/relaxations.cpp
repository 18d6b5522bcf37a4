#include "corrclust/lp/relaxations.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace corrclust::lp {

namespace {

std::string mask_name(VertexMask m) {
  if (m == 0) return "e";
  std::string out;
  for (Vertex v : members(m)) {
    if (!out.empty()) out += '.';
    out += std::to_string(v);
  }
  return out;
}

std::string pair_name(const char* prefix, Vertex u, Vertex v) {
  return std::string(prefix) + "_" + std::to_string(u) + "_" + std::to_string(v);
}

bool has_nonadmissible_pair(const PreclusteredInstance& p, const std::vector<Vertex>& ms) {
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j)
      if (p.classify(ms[i], ms[j]) == PairClass::kNonAdmissible) return true;
  return false;
}

// Emits both halves of sum_{T' in T} (-1)^|T'| y(S u T') in [0, y(S)] for
// every nonempty T of every family member U = S u T. `var` maps a family
// index to a variable, or -1 for a variable fixed at 0.
template <typename VarOf>
void add_box_rows(LinearProgram& lp, const SubsetFamily& fam, VarOf var, const std::string& tag) {
  for (int u = 1; u < fam.size(); ++u) {
    const VertexMask whole = fam.mask(u);
    for (VertexMask t = whole; t != 0; t = (t - 1) & whole) {
      const VertexMask s = whole & ~t;
      std::vector<Term> lower;
      std::vector<Term> upper;
      for (VertexMask tp = t;; tp = (tp - 1) & t) {
        const double sign = popcount(tp) % 2 == 0 ? 1.0 : -1.0;
        const VertexMask m = s | tp;
        const int j = var(fam.index(m));
        if (j >= 0) {
          lower.push_back({j, sign});
          if (tp != 0) upper.push_back({j, sign});
        }
        if (tp == 0) break;
      }
      const std::string label = tag + "_" + mask_name(s) + "_" + mask_name(t);
      const bool lower_implied =
          std::all_of(lower.begin(), lower.end(), [](const Term& x) { return x.coef > 0; });
      if (!lower.empty() && !lower_implied)
        lp.add_row(std::move(lower), RowSense::kGreaterEqual, 0.0, label + "_lo");
      const bool upper_implied =
          std::all_of(upper.begin(), upper.end(), [](const Term& x) { return x.coef < 0; });
      if (!upper.empty() && !upper_implied)
        lp.add_row(std::move(upper), RowSense::kLessEqual, 0.0, label + "_hi");
    }
  }
}

}  // namespace

LinearProgram build_triangle_lp(const SignedGraph& g, const PreclusteredInstance& p) {
  const int n = g.size();
  if (p.size() != n) throw std::invalid_argument("preclustering size mismatch");
  LinearProgram lp("triangle", 0);
  double minus = 0.0;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) {
      const bool plus = g.is_plus(u, v);
      if (!plus) minus += 1.0;
      double lo = 0.0, hi = 1.0;
      switch (p.classify(u, v)) {
        case PairClass::kAtomic: hi = 0.0; break;
        case PairClass::kNonAdmissible: lo = 1.0; break;
        case PairClass::kAdmissible: break;
      }
      lp.add_variable(pair_name("x", u, v), lo, hi, plus ? 1.0 : -1.0);
    }
  lp.set_objective_constant(minus);
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b)
      for (Vertex c = b + 1; c < n; ++c) {
        const int ab = static_cast<int>(pair_index(n, a, b));
        const int ac = static_cast<int>(pair_index(n, a, c));
        const int bc = static_cast<int>(pair_index(n, b, c));
        const std::string t = std::to_string(a) + "_" + std::to_string(b) + "_" + std::to_string(c);
        lp.add_row({{ab, 1.0}, {ac, -1.0}, {bc, -1.0}}, RowSense::kLessEqual, 0.0, "tri_ab_" + t);
        lp.add_row({{ac, 1.0}, {ab, -1.0}, {bc, -1.0}}, RowSense::kLessEqual, 0.0, "tri_ac_" + t);
        lp.add_row({{bc, 1.0}, {ab, -1.0}, {ac, -1.0}}, RowSense::kLessEqual, 0.0, "tri_bc_" + t);
      }
  return lp;
}

Metric metric_from_solution(int n, const Eigen::VectorXd& values) {
  if (values.size() < pair_count(n)) throw std::invalid_argument("solution shorter than the pair count");
  return Metric::from_pair_vector(n, values.head(pair_count(n)).cwiseMax(0.0).cwiseMin(1.0));
}

LiftProgram build_set_lp(const std::vector<Vertex>& subset, const PreclusteredInstance& p, const Metric& x,
                         int r, double epsilon, bool prune_separated) {
  if (r < 2) throw std::invalid_argument("set relaxation needs r >= 2");
  if (x.size() != p.size()) throw std::invalid_argument("metric size mismatch");
  const int n = p.size();
  LiftProgram out;
  out.kind = LiftKind::kSet;
  out.n_total = n;
  out.order = r;
  out.family = SubsetFamily(subset, r);
  out.vertices = out.family.vertices();
  const auto& fam = out.family;
  const auto& vs = out.vertices;
  const int np = static_cast<int>(vs.size());
  const int f = fam.size();
  out.program = LinearProgram("set", static_cast<int>(pair_count(n)));
  out.program.set_parameters(x.to_pair_vector());
  LinearProgram& lp = out.program;

  // Size window per vertex: k_u = |K_u n V'| and the atom mask.
  std::vector<int> k(n, 0);
  std::vector<VertexMask> atom_mask(n, 0);
  for (Vertex u : vs) {
    for (Vertex w : p.atom_members(u))
      if (fam.ground() & bit(w)) atom_mask[u] |= bit(w);
    k[u] = popcount(atom_mask[u]);
  }
  // Pairs at distance 1 leave no mass for y^s_S with S holding both, and a
  // size-s cluster through u needs s - 1 partners closer than 1.
  std::vector<VertexMask> far(n, 0);
  int widest = 0;
  if (prune_separated)
    for (Vertex u : vs) {
      for (Vertex v : vs)
        if (v != u && x(u, v) >= 1.0 - kSeparatedTolerance) far[u] |= bit(v);
      widest = std::max(widest, np - popcount(far[u]));
    }
  auto allowed = [&](int s, VertexMask m, const std::vector<Vertex>& ms) {
    if (popcount(m) > s) return false;
    if (prune_separated) {
      if (ms.empty() && s > widest) return false;
      for (Vertex u : ms)
        if ((far[u] & m) != 0 || s > np - popcount(far[u])) return false;
    }
    for (Vertex u : ms) {
      const bool own = s == k[u] && (m & ~atom_mask[u]) == 0;
      if (!own && !(s > k[u] + epsilon * p.admissible_degree(u))) return false;
    }
    return true;
  };

  out.y_var.assign(static_cast<std::size_t>(np + 1) * f, -1);
  for (int i = 0; i < f; ++i) {
    const VertexMask m = fam.mask(i);
    const auto ms = members(m);
    if (has_nonadmissible_pair(p, ms)) continue;
    for (int s = 1; s <= np; ++s) {
      if (!allowed(s, m, ms)) continue;
      // Finite caps implied by y_u = 1 and the size rows.
      const double cap = m == 0 ? static_cast<double>(np) / s : 1.0;
      out.y_var[s * f + i] = lp.add_variable("y" + std::to_string(s) + "_" + mask_name(m), 0.0, cap);
    }
  }
  out.x_tilde_var = Eigen::MatrixXi::Constant(n, n, -1);
  for (int a = 0; a < np; ++a)
    for (int b = a + 1; b < np; ++b) {
      const Vertex u = vs[a], v = vs[b];
      const double hi = p.classify(u, v) == PairClass::kAtomic ? 0.0 : kInfinity;
      // Minimizing the total x~ keeps the lift as close to x as the rows allow.
      out.x_tilde_var(u, v) = out.x_tilde_var(v, u) = lp.add_variable(pair_name("xt", u, v), 0.0, hi, 1.0);
    }

  auto sum_over_sizes = [&](int i) {
    std::vector<Term> t;
    for (int s = 1; s <= np; ++s)
      if (int j = out.y_var[s * f + i]; j >= 0) t.push_back({j, 1.0});
    return t;
  };
  for (Vertex u : vs)
    lp.add_row(sum_over_sizes(fam.index(bit(u))), RowSense::kEqual, 1.0, "cover_" + std::to_string(u));
  std::vector<Term> budget;
  std::vector<Term> budget_param;
  double adm_total = 0.0;
  for (Vertex u : vs) adm_total += p.admissible_degree(u);
  for (int a = 0; a < np; ++a)
    for (int b = a + 1; b < np; ++b) {
      const Vertex u = vs[a], v = vs[b];
      const int xt = out.x_tilde_var(u, v);
      const int theta = static_cast<int>(pair_index(n, u, v));
      auto t = sum_over_sizes(fam.index(bit(u) | bit(v)));
      t.push_back({xt, 1.0});
      lp.add_row(std::move(t), RowSense::kEqual, 1.0, pair_name("sep", u, v));
      lp.add_row({{xt, 1.0}}, RowSense::kGreaterEqual, 0.0, pair_name("dom", u, v), {{theta, 1.0}});
      budget.push_back({xt, 1.0});
      budget_param.push_back({theta, 1.0});
    }
  if (!budget.empty())
    lp.add_row(std::move(budget), RowSense::kLessEqual, epsilon * adm_total, "budget", std::move(budget_param));

  for (int s = 1; s <= np; ++s) {
    // sum_u y^s_{Su} = s y^s_S for |S| <= r - 1.
    for (int i = 0; i < f; ++i) {
      const VertexMask m = fam.mask(i);
      if (popcount(m) > r - 1) break;
      std::vector<Term> t;
      for (Vertex u : vs) {
        if (m & bit(u)) continue;
        if (int j = out.y_var[s * f + fam.index(m | bit(u))]; j >= 0) t.push_back({j, 1.0});
      }
      const int self = out.y_var[s * f + i];
      const double c = popcount(m) - s;
      if (self >= 0 && c != 0.0) t.push_back({self, c});
      if (!t.empty()) lp.add_row(std::move(t), RowSense::kEqual, 0.0, "size" + std::to_string(s) + "_" + mask_name(m));
    }
    add_box_rows(lp, fam, [&](int i) { return out.y_var[s * f + i]; }, "box" + std::to_string(s));
  }
  return out;
}

std::optional<FarkasWitness> widen_pruned_witness(const LiftProgram& pruned, const FarkasWitness& w,
                                                  const LiftProgram& full, const Metric& x) {
  auto moved = transfer_farkas(pruned.program, w, full.program);
  if (!moved) return std::nullopt;
  FarkasWitness& out = *moved;
  const LinearProgram& lp = full.program;
  std::unordered_map<std::string, int> row_of;
  for (int i = 0; i < lp.row_count(); ++i) row_of.emplace(lp.row(i).label, i);
  // Adds delta to the multiplier of a row and keeps the reduced costs in step.
  auto bump = [&](const std::string& label, double delta) {
    auto it = row_of.find(label);
    if (it == row_of.end()) return false;
    out.row_multipliers[it->second] += delta;
    for (const Term& t : lp.row(it->second).terms) out.reduced_costs[t.index] -= delta * t.coef;
    return true;
  };

  const auto& fam = full.family;
  const auto& vs = full.vertices;
  const int np = static_cast<int>(vs.size());
  const int f = fam.size();
  std::vector<VertexMask> far(full.n_total, 0);
  for (Vertex u : vs)
    for (Vertex v : vs)
      if (v != u && x(u, v) >= 1.0 - kSeparatedTolerance) far[u] |= bit(v);
  auto far_pair = [&](VertexMask m) -> std::pair<Vertex, Vertex> {
    for (Vertex u : members(m))
      if (VertexMask hit = far[u] & m) return {u, members(hit).front()};
    return {-1, -1};
  };
  auto oversized = [&](int s, VertexMask m) -> Vertex {
    for (Vertex u : members(m))
      if (s > np - popcount(far[u])) return u;
    return -1;
  };
  constexpr double kTiny = 1e-13;
  auto deficit = [&](int s, int i) {
    const int j = full.y_variable(s, i);
    if (j < 0 || pruned.y_variable(s, i) >= 0) return 0.0;
    return std::max(0.0, -out.reduced_costs[j]);
  };
  auto box = [&](int s, VertexMask keep, Vertex drop) {
    return "box" + std::to_string(s) + "_" + mask_name(keep) + "_" + mask_name(bit(drop)) + "_lo";
  };

  // Every pruned y is pushed down the chain of rows that forces it to zero:
  // box rows shrink the set, size rows move a singleton onto its pairs or the
  // empty set onto singletons, and sep/dom rows absorb the x = 1 pairs.
  for (int size = full.order; size >= 2; --size)
    for (int i = 0; i < f; ++i) {
      const VertexMask m = fam.mask(i);
      if (popcount(m) != size) continue;
      for (int s = 1; s <= np; ++s) {
        const double d = deficit(s, i);
        if (d <= kTiny) continue;
        const auto [a, b] = far_pair(m);
        if (a >= 0 && size == 2) continue;  // left for the sep rows
        Vertex keep_vertex = a >= 0 ? a : oversized(s, m);
        if (keep_vertex < 0) return std::nullopt;
        Vertex drop = -1;
        for (Vertex v : members(m))
          if (v != keep_vertex && v != b) {
            drop = v;
            break;
          }
        if (drop < 0) drop = b;  // size-limited pair {keep_vertex, b}
        if (!bump(box(s, m & ~bit(drop), drop), d)) return std::nullopt;
      }
    }
  for (int s = 1; s <= np; ++s) {
    const double d = deficit(s, fam.index(0));
    if (d > kTiny && !bump("size" + std::to_string(s) + "_e", d / s)) return std::nullopt;
  }
  for (Vertex u : vs)
    for (int s = 1; s <= np; ++s) {
      const double d = deficit(s, fam.index(bit(u)));
      if (d <= kTiny) continue;
      int near = 0;
      for (Vertex v : vs)
        if (v != u && !(far[u] & bit(v)) && full.y_variable(s, fam.index(bit(u) | bit(v))) >= 0) ++near;
      if (s - 1 - near <= 0) return std::nullopt;
      const double gamma = d / (s - 1 - near);
      if (!bump("size" + std::to_string(s) + "_" + mask_name(bit(u)), gamma)) return std::nullopt;
      for (Vertex v : vs)
        if (v != u && !(far[u] & bit(v)) && full.y_variable(s, fam.index(bit(u) | bit(v))) >= 0)
          if (!bump(box(s, bit(u), v), gamma)) return std::nullopt;
    }
  for (int a = 0; a < np; ++a)
    for (int b = a + 1; b < np; ++b) {
      const Vertex u = vs[a], v = vs[b];
      if (!(far[u] & bit(v))) continue;
      const int i = fam.index(bit(u) | bit(v));
      double d = 0.0;
      for (int s = 1; s <= np; ++s) d = std::max(d, deficit(s, i));
      if (d <= kTiny) continue;
      if (!bump(pair_name("sep", u, v), -d) || !bump(pair_name("dom", u, v), d)) return std::nullopt;
    }
  return moved;
}

LiftProgram build_pivot_lp(const SignedGraph& g, const PreclusteredInstance& p, const Metric& x, int r) {
  if (r < 3) throw std::invalid_argument("pivot relaxation needs r >= 3");
  const int n = g.size();
  if (p.size() != n || x.size() != n) throw std::invalid_argument("instance size mismatch");
  LiftProgram out;
  out.kind = LiftKind::kPivot;
  out.n_total = n;
  out.order = r;
  std::vector<Vertex> all(n);
  for (Vertex v = 0; v < n; ++v) all[v] = v;
  out.family = SubsetFamily(all, r);
  out.vertices = all;
  const auto& fam = out.family;
  const int f = fam.size();
  out.program = LinearProgram("pivot", static_cast<int>(pair_count(n)));
  out.program.set_parameters(x.to_pair_vector());
  LinearProgram& lp = out.program;

  // y(empty) counts clusters, as in the set relaxation; pinning it to 1
  // would cut off every integral clustering with two or more clusters.
  out.y_var.assign(f, -1);
  for (int i = 0; i < f; ++i) {
    const VertexMask m = fam.mask(i);
    out.y_var[i] = lp.add_variable("y_" + mask_name(m), 0.0, i == 0 ? static_cast<double>(n) : 1.0);
  }
  for (Vertex u = 0; u < n; ++u)
    lp.add_row({{out.y_var[fam.index(bit(u))], 1.0}}, RowSense::kEqual, 1.0, "cover_" + std::to_string(u));
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      lp.add_row({{out.y_var[fam.index(bit(u) | bit(v))], 1.0}}, RowSense::kEqual, 1.0, pair_name("link", u, v),
                 {{static_cast<int>(pair_index(n, u, v)), -1.0}});
  add_box_rows(lp, fam, [&](int i) { return out.y_var[i]; }, "box");
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b)
      for (Vertex c = b + 1; c < n; ++c) {
        const auto y = [&](VertexMask m) { return out.y_var[fam.index(m)]; };
        lp.add_row({{y(bit(a) | bit(b)), 1.0}, {y(bit(b) | bit(c)), 1.0}, {y(bit(a) | bit(c)), 1.0},
                    {y(bit(a) | bit(b) | bit(c)), -2.0}},
                   RowSense::kLessEqual, 1.0,
                   "apart_" + std::to_string(a) + "_" + std::to_string(b) + "_" + std::to_string(c));
      }
  return out;
}

LiftedSolution LiftProgram::extract(const Eigen::VectorXd& values) const {
  if (values.size() != program.variable_count()) throw std::invalid_argument("solution size mismatch");
  LiftedSolution lift(kind, n_total, vertices, order);
  const int f = family.size();
  auto clamp = [](double v, double hi) { return std::clamp(v, 0.0, hi); };
  if (kind == LiftKind::kSet) {
    const int np = static_cast<int>(vertices.size());
    for (int s = 1; s <= np; ++s)
      for (int i = 0; i < f; ++i)
        if (int j = y_var[s * f + i]; j >= 0)
          lift.set(s, family.mask(i), clamp(values[j], i == 0 ? kInfinity : 1.0));
    for (Vertex u : vertices)
      for (Vertex v : vertices)
        if (u < v) lift.set_x_tilde(u, v, clamp(values[x_tilde_var(u, v)], 1.0));
  } else {
    for (int i = 0; i < f; ++i) lift.set(family.mask(i), clamp(values[y_var[i]], i == 0 ? kInfinity : 1.0));
  }
  return lift;
}

Eigen::VectorXd LiftProgram::encode(const LiftedSolution& lift) const {
  if (lift.kind() != kind || lift.vertices() != vertices || lift.order() != order)
    throw std::invalid_argument("lift does not match the program");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(program.variable_count());
  const int f = family.size();
  if (kind == LiftKind::kSet) {
    const int np = static_cast<int>(vertices.size());
    for (int s = 1; s <= np; ++s)
      for (int i = 0; i < f; ++i)
        if (int j = y_var[s * f + i]; j >= 0) out[j] = lift.y(s, family.mask(i));
    for (Vertex u : vertices)
      for (Vertex v : vertices)
        if (u < v) out[x_tilde_var(u, v)] = lift.x_tilde(u, v);
  } else {
    for (int i = 0; i < f; ++i) out[y_var[i]] = lift.y(family.mask(i));
  }
  return out;
}

double LiftProgram::eliminated_mass(const LiftedSolution& lift) const {
  if (kind != LiftKind::kSet) return 0.0;
  double worst = 0.0;
  const int f = family.size();
  const int np = static_cast<int>(vertices.size());
  for (int s = 1; s <= np; ++s)
    for (int i = 0; i < f; ++i)
      if (y_var[s * f + i] < 0) worst = std::max(worst, std::abs(lift.y(s, family.mask(i))));
  return worst;
}

SeparationCertificate separation_from_infeasibility(const LinearProgram& lp, const LpResult& r,
                                                    std::string provenance) {
  if (!r.infeasible() || !r.farkas) throw std::invalid_argument("separation needs an infeasible result");
  const FarkasWitness& fw = *r.farkas;
  const double margin = farkas_margin(lp, fw);
  if (!(margin > 0.0) || !std::isfinite(margin)) throw std::runtime_error("Farkas witness does not certify infeasibility");
  constexpr double kZero = 1e-11;
  // margin(theta) = constant + w_raw . theta; positive at the rejected point,
  // nonpositive wherever the program is feasible.
  double constant = 0.0;
  for (int j = 0; j < lp.variable_count(); ++j) {
    const double d = fw.reduced_costs[j];
    if (std::abs(d) <= kZero) continue;
    constant += d * (d > 0 ? lp.variable(j).lower : lp.variable(j).upper);
  }
  Eigen::VectorXd w_raw = Eigen::VectorXd::Zero(lp.parameter_count());
  for (int i = 0; i < lp.row_count(); ++i) {
    const double pi = fw.row_multipliers[i];
    if (std::abs(pi) <= kZero) continue;
    constant += pi * lp.row(i).rhs;
    for (const Term& t : lp.row(i).rhs_param) w_raw[t.index] += pi * t.coef;
  }
  SeparationCertificate c;
  c.provenance = std::move(provenance);
  c.rejected = lp.parameters();
  c.w = -w_raw / margin;
  c.b = constant / margin;
  c.row_multipliers = fw.row_multipliers / margin;
  c.bound_multipliers = fw.reduced_costs / margin;
  const CertificateAudit audit = audit_certificate(lp, c);
  if (!audit.ok(1e-6)) throw std::runtime_error("separation certificate failed its audit");
  return c;
}

CertificateAudit audit_certificate(const LinearProgram& lp, const SeparationCertificate& c) {
  CertificateAudit a;
  constexpr double kZero = 1e-11;
  Eigen::VectorXd combo = c.bound_multipliers;
  double at_rejected = 0.0;
  for (int i = 0; i < lp.row_count(); ++i) {
    const double pi = c.row_multipliers[i];
    if (std::abs(pi) <= kZero) continue;
    const Row& row = lp.row(i);
    if ((pi > 0 && row.sense == RowSense::kLessEqual) || (pi < 0 && row.sense == RowSense::kGreaterEqual))
      a.valid_sides = false;
    for (const Term& t : row.terms) combo[t.index] += pi * t.coef;
    double rhs = row.rhs;
    for (const Term& t : row.rhs_param) rhs += t.coef * c.rejected[t.index];
    at_rejected += pi * rhs;
  }
  for (int j = 0; j < lp.variable_count(); ++j) {
    const double d = c.bound_multipliers[j];
    if (std::abs(d) <= kZero) continue;
    const double bound = d > 0 ? lp.variable(j).lower : lp.variable(j).upper;
    if (!std::isfinite(bound)) {
      a.valid_sides = false;
      continue;
    }
    at_rejected += d * bound;
  }
  a.combination_residual = combo.size() ? combo.cwiseAbs().maxCoeff() : 0.0;
  // The scaled margin is 1 at the rejected point, i.e. w . x = b - 1.
  a.normalization_error = std::max(std::abs(at_rejected - 1.0), std::abs(c.slack(c.rejected) + 1.0));
  return a;
}

void add_cut(LinearProgram& triangle_lp, const SeparationCertificate& c) {
  if (c.w.size() > triangle_lp.variable_count()) throw std::invalid_argument("cut wider than the program");
  std::vector<Term> terms;
  for (int k = 0; k < c.w.size(); ++k)
    if (c.w[k] != 0.0) terms.push_back({k, c.w[k]});
  triangle_lp.add_row(std::move(terms), RowSense::kGreaterEqual, c.b,
                      "cut_" + std::to_string(triangle_lp.row_count()) + "_" + c.provenance);
}

}  // namespace corrclust::lp
