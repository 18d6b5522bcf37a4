#pragma once

#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "corrclust/core.hpp"

namespace corrclust::lp {

// All subsets of an ordered vertex list with at most `order` members,
// addressed by global vertex masks.
class SubsetFamily {
 public:
  SubsetFamily() = default;
  SubsetFamily(std::vector<Vertex> vertices, int order);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  VertexMask ground() const { return ground_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(masks_.size()); }
  VertexMask mask(int index) const { return masks_[index]; }
  // -1 when the mask is not a member.
  int index(VertexMask m) const;

 private:
  std::vector<Vertex> vertices_;
  VertexMask ground_ = 0;
  int order_ = 0;
  std::vector<VertexMask> masks_;
  std::unordered_map<VertexMask, int> index_;
};

inline VertexMask bit(Vertex v) { return VertexMask{1} << v; }
inline int popcount(VertexMask m) { return __builtin_popcountll(m); }
std::vector<Vertex> members(VertexMask m);

enum class LiftKind { kSet, kPivot };

// Set-indexed pseudo-distribution. For the set relaxation y(s, S) is the
// size-stratified value y^s_S and y(S) their sum; for the pivot relaxation
// only y(S) exists. In both, y(empty) is the number of clusters.
class LiftedSolution {
 public:
  LiftedSolution() = default;
  LiftedSolution(LiftKind kind, int n_total, std::vector<Vertex> vertices, int order);

  LiftKind kind() const { return kind_; }
  int order() const { return family_.order(); }
  int instance_size() const { return n_total_; }
  const std::vector<Vertex>& vertices() const { return family_.vertices(); }
  const SubsetFamily& family() const { return family_; }
  // Largest cluster size s; 0 for the pivot kind.
  int max_size() const { return kind_ == LiftKind::kSet ? static_cast<int>(vertices().size()) : 0; }

  // Zero for masks outside the family.
  double y(VertexMask s) const;
  double y(int size, VertexMask s) const;
  void set(VertexMask s, double value);
  void set(int size, VertexMask s, double value);

  // x~ for the set kind, 1 - y_uv for the pivot kind.
  double x_tilde(Vertex u, Vertex v) const;
  void set_x_tilde(Vertex u, Vertex v, double value);

  const Eigen::MatrixXd& table() const { return values_; }

 private:
  LiftKind kind_ = LiftKind::kPivot;
  int n_total_ = 0;
  SubsetFamily family_;
  Eigen::MatrixXd values_;   // row s (set kind) or row 0 (pivot kind), column = subset
  Eigen::MatrixXd x_tilde_;  // instance-sized, set kind only
};

// Partition-pattern values of a triple read off a lift.
inline double y_split(const LiftedSolution& y, Vertex a, Vertex b) { return 1.0 - y.y(bit(a) | bit(b)); }
// y_{a|bc}
inline double y_single_pair(const LiftedSolution& y, Vertex a, Vertex b, Vertex c) {
  return y.y(bit(b) | bit(c)) - y.y(bit(a) | bit(b) | bit(c));
}
// y_{a|b|c}
inline double y_all_apart(const LiftedSolution& y, Vertex a, Vertex b, Vertex c) {
  return 1.0 - (y.y(bit(a) | bit(b)) + y.y(bit(b) | bit(c)) + y.y(bit(a) | bit(c))) +
         2.0 * y.y(bit(a) | bit(b) | bit(c));
}

// Indicator lifts of an integral clustering restricted to `vertices`.
LiftedSolution indicator_set_lift(const Clustering& c, const std::vector<Vertex>& vertices, int order);
LiftedSolution indicator_pivot_lift(const Clustering& c, int order);

}  // namespace corrclust::lp
