#pragma once

#include <cstdint>
#include <vector>

#include "corrclust/core.hpp"

namespace corrclust {

struct AgreementParams {
  double epsilon_q = 0.1;
  double beta = 0.1;    // agreement fraction
  double lambda = 0.1;  // light-vertex fraction

  static AgreementParams from_epsilon_q(double epsilon_q) {
    return {epsilon_q, epsilon_q, epsilon_q};
  }
  // Rounding error parameter derived from the preclustering, sqrt(eps_q).
  double epsilon() const;
  // Lower-bound factor eps_q^6 / 2 relating opt to |E_adm|.
  double epsilon_a() const;
  // Throws std::invalid_argument unless all three lie in (0, 1).
  void validate() const;
};

// Sign of a - s * b, computed exactly for a double s.
int compare_scaled(std::int64_t a, double s, std::int64_t b);

// |N_u xor N_v| < i * beta * max(|N_u|, |N_v|), closed neighborhoods.
bool in_weak_agreement(const SignedGraph& g, Vertex u, Vertex v, int i, double beta);

// eps_q * d_v <= d_u <= d_v / eps_q.
bool degree_similar(const SignedGraph& g, Vertex u, Vertex v, double epsilon_q);

// Atoms (components of size >= 2 of the sparsified + graph), ordered by
// smallest member.
std::vector<std::vector<Vertex>> atomic_preclustering(const SignedGraph& g,
                                                      const AgreementParams& params);

// Admissible pairs after the atom-neighborhood normalization, sorted.
std::vector<VertexPair> admissible_edges(const SignedGraph& g,
                                         const std::vector<std::vector<Vertex>>& atoms,
                                         const AgreementParams& params);

PreclusteredInstance precluster(const SignedGraph& g, const AgreementParams& params);

struct DegreeBoundCheck {
  // Largest d'_v / d_v and largest d_u / d_v over atomic or admissible pairs.
  double max_degree_growth = 0.0;
  double max_degree_ratio = 0.0;
  // Bounds 2 / eps_q^3 and 2 / eps_q.
  double growth_bound = 0.0;
  double ratio_bound = 0.0;
  bool holds() const { return max_degree_growth <= growth_bound && max_degree_ratio <= ratio_bound; }
};

DegreeBoundCheck check_degree_bounds(const SignedGraph& g, const PreclusteredInstance& p);

}  // namespace corrclust
