#pragma once

// Helpers shared by the unit tests.

#include <algorithm>
#include <numeric>
#include <vector>

#include "corrclust/core.hpp"
#include "corrclust/random.hpp"

namespace corrclust::testing {

// Every set partition of {0..n-1}, as restricted growth strings.
template <typename Visit>
void for_each_partition(int n, Visit visit) {
  std::vector<int> a(n, 0);
  auto rec = [&](auto&& self, int i, int used) -> void {
    if (i == n) {
      visit(Clustering(a));
      return;
    }
    for (int c = 0; c <= used; ++c) {
      a[i] = c;
      self(self, i + 1, std::max(used, c + 1));
    }
  };
  if (n == 0) visit(Clustering());
  else rec(rec, 0, 0);
}

inline SignedGraph random_graph(int n, double plus, Rng& rng) {
  SignedGraph g(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (bernoulli(rng, plus)) g.set_sign(u, v, Sign::kPlus);
  return g;
}

// Places pseudo-atoms one by one into a random compatible cluster (or a new
// one), so the result is good for p.
inline Clustering random_good_clustering(const PreclusteredInstance& p, Rng& rng) {
  auto units = p.pseudo_atoms();
  std::shuffle(units.begin(), units.end(), rng);
  std::vector<std::vector<Vertex>> clusters;
  for (const auto& unit : units) {
    std::vector<int> fits;
    for (int c = 0; c < static_cast<int>(clusters.size()); ++c) {
      bool ok = true;
      for (Vertex a : unit)
        for (Vertex b : clusters[c]) ok = ok && p.classify(a, b) != PairClass::kNonAdmissible;
      if (ok) fits.push_back(c);
    }
    const int pick = static_cast<int>(uniform_below(rng, fits.size() + 1));
    if (pick == static_cast<int>(fits.size())) clusters.push_back(unit);
    else clusters[fits[pick]].insert(clusters[fits[pick]].end(), unit.begin(), unit.end());
  }
  return Clustering::from_clusters(p.size(), clusters);
}

// Restricts c to `subset` and splits K_u off any cluster C with
// |K_u| < |C| <= |K_u| + eps * d_adm(u), until no such cluster remains.
// Vertices outside `subset` get their own clusters.
inline Clustering window_refinement(const Clustering& c, const PreclusteredInstance& p,
                                    const std::vector<Vertex>& subset, double eps) {
  const int n = c.size();
  std::vector<char> inside(n, 0);
  for (Vertex v : subset) inside[v] = 1;
  std::vector<std::vector<Vertex>> clusters;
  for (const auto& cl : c.clusters()) {
    std::vector<Vertex> kept;
    for (Vertex v : cl)
      if (inside[v]) kept.push_back(v);
    if (!kept.empty()) clusters.push_back(kept);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < clusters.size() && !changed; ++i) {
      auto& cl = clusters[i];
      for (Vertex u : cl) {
        std::vector<Vertex> k;
        for (Vertex w : p.atom_members(u))
          if (inside[w]) k.push_back(w);
        const double size = static_cast<double>(cl.size());
        if (k.size() < cl.size() && size <= k.size() + eps * p.admissible_degree(u)) {
          std::vector<Vertex> rest;
          for (Vertex w : cl)
            if (std::find(k.begin(), k.end(), w) == k.end()) rest.push_back(w);
          cl = rest;
          clusters.push_back(k);
          changed = true;
          break;
        }
      }
    }
  }
  for (Vertex v = 0; v < n; ++v)
    if (!inside[v]) clusters.push_back({v});
  return Clustering::from_clusters(n, clusters);
}

inline std::vector<Vertex> iota_vertices(int n) {
  std::vector<Vertex> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace corrclust::testing
