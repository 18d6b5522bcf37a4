#include "corrclust/lp/lift.hpp"

#include <algorithm>
#include <stdexcept>

namespace corrclust::lp {

SubsetFamily::SubsetFamily(std::vector<Vertex> vertices, int order)
    : vertices_(std::move(vertices)), order_(order) {
  std::sort(vertices_.begin(), vertices_.end());
  if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
    throw std::invalid_argument("repeated vertex in subset family");
  for (Vertex v : vertices_) {
    if (v < 0 || v >= kMaskVertices) throw std::invalid_argument("subset families need vertices below 64");
    ground_ |= bit(v);
  }
  if (order < 0) throw std::invalid_argument("negative subset order");
  // Breadth by cardinality, lexicographic within a size.
  const int k = static_cast<int>(vertices_.size());
  masks_.push_back(0);
  std::vector<std::vector<int>> frontier{{}};
  for (int size = 1; size <= std::min(order, k); ++size) {
    std::vector<std::vector<int>> next;
    for (const auto& combo : frontier) {
      const int start = combo.empty() ? 0 : combo.back() + 1;
      for (int i = start; i < k; ++i) {
        auto grown = combo;
        grown.push_back(i);
        VertexMask m = 0;
        for (int j : grown) m |= bit(vertices_[j]);
        masks_.push_back(m);
        next.push_back(std::move(grown));
      }
    }
    frontier = std::move(next);
  }
  index_.reserve(masks_.size() * 2);
  for (int i = 0; i < size(); ++i) index_.emplace(masks_[i], i);
}

int SubsetFamily::index(VertexMask m) const {
  auto it = index_.find(m);
  return it == index_.end() ? -1 : it->second;
}

std::vector<Vertex> members(VertexMask m) {
  std::vector<Vertex> out;
  for (; m != 0; m &= m - 1) out.push_back(__builtin_ctzll(m));
  return out;
}

LiftedSolution::LiftedSolution(LiftKind kind, int n_total, std::vector<Vertex> vertices, int order)
    : kind_(kind), n_total_(n_total), family_(std::move(vertices), order) {
  const int rows = kind == LiftKind::kSet ? max_size() + 1 : 1;
  values_ = Eigen::MatrixXd::Zero(rows, family_.size());
  if (kind == LiftKind::kSet) x_tilde_ = Eigen::MatrixXd::Zero(n_total, n_total);
}

double LiftedSolution::y(VertexMask s) const {
  const int i = family_.index(s);
  if (i < 0) return 0.0;
  return kind_ == LiftKind::kSet ? values_.col(i).sum() : values_(0, i);
}

double LiftedSolution::y(int size, VertexMask s) const {
  if (kind_ != LiftKind::kSet) throw std::logic_error("size-stratified values need a set lift");
  const int i = family_.index(s);
  if (i < 0 || size < 1 || size > max_size()) return 0.0;
  return values_(size, i);
}

void LiftedSolution::set(VertexMask s, double value) {
  if (kind_ != LiftKind::kPivot) throw std::logic_error("aggregate values are derived for a set lift");
  const int i = family_.index(s);
  if (i < 0) throw std::out_of_range("subset outside the lift family");
  values_(0, i) = value;
}

void LiftedSolution::set(int size, VertexMask s, double value) {
  if (kind_ != LiftKind::kSet) throw std::logic_error("size-stratified values need a set lift");
  const int i = family_.index(s);
  if (i < 0 || size < 1 || size > max_size()) throw std::out_of_range("subset outside the lift family");
  values_(size, i) = value;
}

double LiftedSolution::x_tilde(Vertex u, Vertex v) const {
  if (kind_ == LiftKind::kSet) return x_tilde_(u, v);
  return 1.0 - y(bit(u) | bit(v));
}

void LiftedSolution::set_x_tilde(Vertex u, Vertex v, double value) {
  if (kind_ != LiftKind::kSet) throw std::logic_error("x~ is derived for a pivot lift");
  x_tilde_(u, v) = x_tilde_(v, u) = value;
}

LiftedSolution indicator_set_lift(const Clustering& c, const std::vector<Vertex>& vertices, int order) {
  LiftedSolution lift(LiftKind::kSet, c.size(), vertices, order);
  // Cluster sizes after restriction to the vertex list.
  std::vector<int> size(c.cluster_count(), 0);
  for (Vertex v : lift.vertices()) ++size[c.cluster_of(v)];
  const auto& fam = lift.family();
  for (int i = 0; i < fam.size(); ++i) {
    const auto ms = members(fam.mask(i));
    if (ms.empty()) {
      for (int k : size)
        if (k > 0) lift.set(k, 0, lift.y(k, 0) + 1.0);
      continue;
    }
    const int cl = c.cluster_of(ms[0]);
    if (std::all_of(ms.begin(), ms.end(), [&](Vertex v) { return c.cluster_of(v) == cl; }))
      lift.set(size[cl], fam.mask(i), 1.0);
  }
  for (Vertex u : lift.vertices())
    for (Vertex v : lift.vertices())
      if (u < v) lift.set_x_tilde(u, v, c.together(u, v) ? 0.0 : 1.0);
  return lift;
}

LiftedSolution indicator_pivot_lift(const Clustering& c, int order) {
  std::vector<Vertex> all(c.size());
  for (Vertex v = 0; v < c.size(); ++v) all[v] = v;
  LiftedSolution lift(LiftKind::kPivot, c.size(), all, order);
  const auto& fam = lift.family();
  lift.set(0, c.cluster_count());
  for (int i = 1; i < fam.size(); ++i) {
    const auto ms = members(fam.mask(i));
    const bool together = std::all_of(ms.begin(), ms.end(), [&](Vertex v) { return c.together(v, ms[0]); });
    lift.set(fam.mask(i), together ? 1.0 : 0.0);
  }
  return lift;
}

}  // namespace corrclust::lp
