#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "corrclust/core.hpp"
#include "corrclust/lp/lift.hpp"
#include "corrclust/lp/program.hpp"

namespace corrclust::lp {

inline constexpr int kDefaultSetOrder = 3;
inline constexpr int kDefaultPivotOrder = 3;

// A lifted relaxation together with the map between its variables and a
// LiftedSolution. The metric enters only through right-hand sides, as the
// program's parameter vector over all pairs of the instance.
struct LiftProgram {
  LinearProgram program;
  LiftKind kind = LiftKind::kSet;
  int n_total = 0;
  std::vector<Vertex> vertices;
  int order = 0;
  SubsetFamily family;
  std::vector<int> y_var;                     // [size * |family| + subset] -> variable or -1
  Eigen::MatrixXi x_tilde_var;                // instance-sized, set kind only
  int sizes() const { return kind == LiftKind::kSet ? static_cast<int>(vertices.size()) : 0; }
  int y_variable(int size, int subset) const { return y_var[size * family.size() + subset]; }

  // Reads a lift off a solution vector, clamping tolerance-level noise.
  LiftedSolution extract(const Eigen::VectorXd& values) const;
  // Variable vector of a lift; values on eliminated variables are dropped.
  Eigen::VectorXd encode(const LiftedSolution& lift) const;
  // Largest |value| the lift puts on eliminated variables.
  double eliminated_mass(const LiftedSolution& lift) const;
};

// Triangle LP over all pairs (variable index = pair index) with atomic pairs
// pinned to 0 and non-admissible pairs to 1; objective = fractional cost.
LinearProgram build_triangle_lp(const SignedGraph& g, const PreclusteredInstance& p);
Metric metric_from_solution(int n, const Eigen::VectorXd& values);

inline constexpr double kSeparatedTolerance = 1e-9;

// Size-stratified relaxation over `subset` with all sets of size <= r; the
// objective is the total x~. With prune_separated, variables forced to zero
// by pairs at distance 1 in x are left out: feasibility and optimum are kept,
// but the program is specific to this x, so a Farkas witness from it needs
// widen_pruned_witness before it gives a valid plane.
LiftProgram build_set_lp(const std::vector<Vertex>& subset, const PreclusteredInstance& p,
                         const Metric& x, int r, double epsilon, bool prune_separated = false);

// Carries a Farkas witness of the pruned set program over to the unpruned
// one, adding the rows that force each left-out variable to zero. The result
// still has to pass farkas_margin on full.program.
std::optional<FarkasWitness> widen_pruned_witness(const LiftProgram& pruned, const FarkasWitness& w,
                                                  const LiftProgram& full, const Metric& x);

// Sherali-Adams style relaxation over all vertices with y_uv = 1 - x_uv.
LiftProgram build_pivot_lp(const SignedGraph& g, const PreclusteredInstance& p, const Metric& x,
                           int r);

// Plane w . x' >= b over pair coordinates violated by the rejected x.
struct SeparationCertificate {
  Eigen::VectorXd w;
  double b = 0.0;
  std::string provenance;
  Eigen::VectorXd rejected;  // the x the program was built for
  // Farkas combination, scaled so that it sums to -1 at the rejected x.
  Eigen::VectorXd row_multipliers;
  Eigen::VectorXd bound_multipliers;

  double slack(const Eigen::VectorXd& x) const { return w.dot(x) - b; }
};

// Throws std::invalid_argument unless r is an infeasible result with a
// witness; throws std::runtime_error if the witness does not audit.
SeparationCertificate separation_from_infeasibility(const LinearProgram& lp, const LpResult& r,
                                                    std::string provenance);

struct CertificateAudit {
  double combination_residual = 0.0;  // |u^T A'| in the sup norm
  double normalization_error = 0.0;   // |u^T (c - A x) + 1|
  bool valid_sides = true;            // every multiplier uses a finite bound
  bool ok(double tol = 1e-7) const {
    return valid_sides && combination_residual <= tol && normalization_error <= tol;
  }
};

CertificateAudit audit_certificate(const LinearProgram& lp, const SeparationCertificate& c);

// Appends w . x >= b to a triangle LP (pair-indexed variables).
void add_cut(LinearProgram& triangle_lp, const SeparationCertificate& c);

}  // namespace corrclust::lp
