#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "corrclust/core.hpp"
#include "corrclust/lp/lift.hpp"
#include "corrclust/random.hpp"

namespace corrclust {

// Bit i stands for item i of a ConditionedMarginals.
using ItemMask = std::uint64_t;

inline constexpr int kMaxResamples = 32;
inline constexpr double kMinBranchMass = 1e-12;

// A conditioned pseudo-distribution y' over items, where an item is a group
// of vertices that is always taken whole (an atom, or a single vertex).
// Values exist for item sets of size at most `order`; y'(empty) = 1.
class ConditionedMarginals {
 public:
  ConditionedMarginals() = default;
  // `value` receives item masks of size 1..order.
  ConditionedMarginals(std::vector<std::vector<Vertex>> items, int order,
                       const std::function<double(ItemMask)>& value);

  int item_count() const { return static_cast<int>(items_.size()); }
  int order() const { return family_.order(); }
  const std::vector<Vertex>& item(int i) const { return items_[i]; }
  const std::vector<std::vector<Vertex>>& items() const { return items_; }

  // Zero for masks above the order.
  double value(ItemMask m) const;
  double marginal(int i) const { return value(ItemMask{1} << i); }
  double pair(int i, int j) const { return value((ItemMask{1} << i) | (ItemMask{1} << j)); }
  bool fractional(int i) const { return marginal(i) > 0.0 && marginal(i) < 1.0; }

  // Mass of "every item of `in` taken, no item of `out` taken", by
  // inclusion-exclusion; needs |in| + |out| <= order.
  double pattern_mass(ItemMask in, ItemMask out) const;

  // Largest breach of marginals in [0,1] and pair <= min(marginals).
  double invariant_violation() const;

  // Vertices of the items in m.
  std::vector<Vertex> expand(ItemMask m) const;

 private:
  std::vector<std::vector<Vertex>> items_;
  lp::SubsetFamily family_;
  std::vector<double> values_;
};

// Marginals of a pivot lift conditioned on p being in the cluster:
// y'(S) = y(S + p) over the given candidate items.
ConditionedMarginals condition_pivot(const lp::LiftedSolution& y, Vertex p,
                                     std::vector<std::vector<Vertex>> items);
// Marginals of a set lift conditioned on a size-s cluster containing u:
// y'(S) = y^s(S + u) / y^s(u).
ConditionedMarginals condition_set(const lp::LiftedSolution& y, int s, Vertex u,
                                   std::vector<std::vector<Vertex>> items);

// Largest usable depth for m (one seed level below the order).
inline int max_depth(const ConditionedMarginals& m) { return std::max(0, m.order() - 1); }

// Draws t uniform in {0..depth} seeds uniformly from the items, samples their
// joint pattern from y', then takes every other item independently with its
// pattern-conditioned marginal. Throws std::runtime_error when a branch keeps
// hitting near-zero mass.
ItemMask rt_sample(const ConditionedMarginals& m, int depth, Rng& rng);

// Exact inclusion probabilities of rt_sample, by enumerating every seed set
// and pattern: marginal(i) and joint(i, j) (diagonal = marginal).
struct InclusionTable {
  Eigen::VectorXd marginal;
  Eigen::MatrixXd joint;
};
InclusionTable exact_inclusion(const ConditionedMarginals& m, int depth);

// Mean |Pr[i, j taken] - y'(ij)| over pairs of fractional items; 0 with
// fewer than two fractional items.
double pairwise_error(const ConditionedMarginals& m, const Eigen::MatrixXd& joint);
double exact_pairwise_error(const ConditionedMarginals& m, int depth);
// Same with Pr estimated from `trials` draws.
double measure_pairwise_error(const ConditionedMarginals& m, int depth, int trials, Rng& rng);

}  // namespace corrclust
