#include "corrclust/precluster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace corrclust {

double AgreementParams::epsilon() const { return std::sqrt(epsilon_q); }

double AgreementParams::epsilon_a() const { return std::pow(epsilon_q, 6) / 2.0; }

void AgreementParams::validate() const {
  auto open_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!open_unit(epsilon_q) || !open_unit(beta) || !open_unit(lambda))
    throw std::invalid_argument("agreement parameters must lie in (0, 1)");
}

int compare_scaled(std::int64_t a, double s, std::int64_t b) {
  if (!std::isfinite(s)) throw std::invalid_argument("non-finite scale");
  int exp = 0;
  const double mant = std::frexp(s, &exp);
  // s = m * 2^e with integer m.
  const auto m = static_cast<__int128>(std::ldexp(mant, 53));
  const int e = exp - 53;
  __int128 lhs = a;
  __int128 rhs = m * b;
  if (e >= 0) {
    if (e > 40) throw std::invalid_argument("scale too large");
    rhs <<= e;
  } else {
    if (-e > 100) {
      // s * b is below 2^-47 * |b|; only its sign matters against an integer.
      return a > 0 ? 1 : (a < 0 ? -1 : (rhs > 0 ? -1 : (rhs < 0 ? 1 : 0)));
    }
    lhs <<= -e;
  }
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

namespace {

int symmetric_difference(const SignedGraph& g, Vertex u, Vertex v) {
  int count = 0;
  for (Vertex w = 0; w < g.size(); ++w) {
    const bool in_u = w == u || g.is_plus(u, w);
    const bool in_v = w == v || g.is_plus(v, w);
    count += in_u != in_v;
  }
  return count;
}

}  // namespace

bool in_weak_agreement(const SignedGraph& g, Vertex u, Vertex v, int i, double beta) {
  if (u == v) return true;
  const int diff = symmetric_difference(g, u, v);
  const int larger = std::max(g.degree(u), g.degree(v));
  return compare_scaled(diff, beta, std::int64_t{i} * larger) < 0;
}

bool degree_similar(const SignedGraph& g, Vertex u, Vertex v, double epsilon_q) {
  const int du = g.degree(u), dv = g.degree(v);
  return compare_scaled(du, epsilon_q, dv) >= 0 && compare_scaled(dv, epsilon_q, du) >= 0;
}

std::vector<std::vector<Vertex>> atomic_preclustering(const SignedGraph& g,
                                                      const AgreementParams& params) {
  params.validate();
  const int n = g.size();
  // Step 1: keep + edges whose endpoints agree.
  std::vector<std::vector<Vertex>> kept(n);
  std::vector<int> lost(n, 0);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (!g.is_plus(u, v)) continue;
      if (in_weak_agreement(g, u, v, 1, params.beta)) {
        kept[u].push_back(v);
        kept[v].push_back(u);
      } else {
        ++lost[u];
        ++lost[v];
      }
    }
  }
  // Step 2: light vertices lost more than a lambda fraction of N_v.
  std::vector<bool> light(n);
  for (Vertex v = 0; v < n; ++v) light[v] = compare_scaled(lost[v], params.lambda, g.degree(v)) > 0;
  // Steps 3-4: drop light-light edges, components of size >= 2.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Vertex v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v : kept[u])
      if (u < v && !(light[u] && light[v])) parent[find(u)] = find(v);
  std::vector<std::vector<Vertex>> groups(n);
  for (Vertex v = 0; v < n; ++v) groups[find(v)].push_back(v);
  std::vector<std::vector<Vertex>> atoms;
  for (auto& grp : groups)
    if (grp.size() >= 2) atoms.push_back(std::move(grp));
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return atoms;
}

std::vector<VertexPair> admissible_edges(const SignedGraph& g,
                                         const std::vector<std::vector<Vertex>>& atoms,
                                         const AgreementParams& params) {
  params.validate();
  const int n = g.size();
  const double eq = params.epsilon_q;
  std::vector<int> atom_of(n, -1);
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (Vertex v : atoms[i]) atom_of[v] = static_cast<int>(i);

  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> similar(n, n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v) similar(u, v) = degree_similar(g, u, v, eq);

  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> adm =
      Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, false);
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (atom_of[u] >= 0 && atom_of[v] >= 0) continue;
      if (!similar(u, v)) continue;
      std::int64_t common = 0;
      for (Vertex w = 0; w < n; ++w) {
        const bool in_u = w == u || g.is_plus(u, w);
        const bool in_v = w == v || g.is_plus(v, w);
        common += in_u && in_v && similar(w, u) && similar(w, v);
      }
      if (compare_scaled(common, eq, std::min(g.degree(u), g.degree(v))) >= 0)
        adm(u, v) = adm(v, u) = true;
    }
  }
  // Atom members keep only the admissible neighbors they all share.
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& atom : atoms) {
      for (Vertex w = 0; w < n; ++w) {
        bool all = true, any = false;
        for (Vertex u : atom) {
          all = all && adm(u, w);
          any = any || adm(u, w);
        }
        if (any && !all) {
          for (Vertex u : atom) adm(u, w) = adm(w, u) = false;
          changed = true;
        }
      }
    }
  }
  std::vector<VertexPair> out;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (adm(u, v)) out.push_back({u, v});
  return out;
}

PreclusteredInstance precluster(const SignedGraph& g, const AgreementParams& params) {
  auto atoms = atomic_preclustering(g, params);
  auto adm = admissible_edges(g, atoms, params);
  return PreclusteredInstance(g.size(), std::move(atoms), adm, params.epsilon_q);
}

DegreeBoundCheck check_degree_bounds(const SignedGraph& g, const PreclusteredInstance& p) {
  const int n = g.size();
  const double eq = p.epsilon_q();
  DegreeBoundCheck out;
  out.growth_bound = 2.0 / (eq * eq * eq);
  out.ratio_bound = 2.0 / eq;
  for (Vertex v = 0; v < n; ++v) {
    int d_prime = 0;
    for (Vertex u = 0; u < n; ++u) {
      if (u == v || p.classify(u, v) == PairClass::kNonAdmissible) continue;
      ++d_prime;
      out.max_degree_ratio =
          std::max(out.max_degree_ratio, static_cast<double>(g.degree(u)) / g.degree(v));
    }
    out.max_degree_growth = std::max(out.max_degree_growth, static_cast<double>(d_prime) / g.degree(v));
  }
  return out;
}

}  // namespace corrclust
