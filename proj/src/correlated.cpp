#include "corrclust/correlated.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace corrclust {

namespace {

ItemMask item_bit(int i) { return ItemMask{1} << i; }

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

// Next mask with the same popcount (Gosper).
ItemMask next_combination(ItemMask m) {
  const ItemMask c = m & (~m + 1);
  const ItemMask r = m + c;
  return (((r ^ m) >> 2) / c) | r;
}

// Items are fewer than 64, so item_bit(k) does not overflow.
template <typename Visit>
void for_each_combination(int k, int t, Visit visit) {
  if (t > k) return;
  if (t == 0) {
    visit(ItemMask{0});
    return;
  }
  for (ItemMask m = item_bit(t) - 1; m < item_bit(k); m = next_combination(m)) visit(m);
}

std::int64_t binomial(int k, int t) {
  std::int64_t b = 1;
  for (int i = 0; i < t; ++i) b = b * (k - i) / (i + 1);
  return b;
}

}  // namespace

ConditionedMarginals::ConditionedMarginals(std::vector<std::vector<Vertex>> items, int order,
                                           const std::function<double(ItemMask)>& value)
    : items_(std::move(items)) {
  const int k = item_count();
  if (k >= kMaskVertices) throw std::invalid_argument("too many items for a conditioned distribution");
  if (order < 1) throw std::invalid_argument("conditioned order must be at least 1");
  for (const auto& it : items_)
    if (it.empty()) throw std::invalid_argument("empty item");
  std::vector<Vertex> ids(k);
  for (int i = 0; i < k; ++i) ids[i] = i;
  family_ = lp::SubsetFamily(ids, order);
  values_.resize(family_.size());
  values_[0] = 1.0;
  for (int i = 1; i < family_.size(); ++i) values_[i] = value(family_.mask(i));
}

double ConditionedMarginals::value(ItemMask m) const {
  const int i = family_.index(m);
  return i < 0 ? 0.0 : values_[i];
}

double ConditionedMarginals::pattern_mass(ItemMask in, ItemMask out) const {
  if (lp::popcount(in | out) > order()) throw std::invalid_argument("pattern above the conditioned order");
  double mass = 0.0;
  for (ItemMask b = out;; b = (b - 1) & out) {
    mass += (lp::popcount(b) % 2 == 0 ? 1.0 : -1.0) * value(in | b);
    if (b == 0) break;
  }
  return mass;
}

double ConditionedMarginals::invariant_violation() const {
  double worst = 0.0;
  for (int i = 0; i < item_count(); ++i) {
    worst = std::max({worst, -marginal(i), marginal(i) - 1.0});
    if (order() < 2) continue;
    for (int j = i + 1; j < item_count(); ++j)
      worst = std::max(worst, pair(i, j) - std::min(marginal(i), marginal(j)));
  }
  return worst;
}

std::vector<Vertex> ConditionedMarginals::expand(ItemMask m) const {
  std::vector<Vertex> out;
  for (; m != 0; m &= m - 1) {
    const auto& it = items_[__builtin_ctzll(m)];
    out.insert(out.end(), it.begin(), it.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

VertexMask representatives(const std::vector<std::vector<Vertex>>& items, ItemMask m) {
  VertexMask v = 0;
  for (; m != 0; m &= m - 1) v |= lp::bit(items[__builtin_ctzll(m)].front());
  return v;
}

}  // namespace

ConditionedMarginals condition_pivot(const lp::LiftedSolution& y, Vertex p,
                                     std::vector<std::vector<Vertex>> items) {
  if (y.kind() != lp::LiftKind::kPivot) throw std::invalid_argument("pivot conditioning needs a pivot lift");
  const auto reps = items;
  return ConditionedMarginals(std::move(items), y.order() - 1,
                              [&](ItemMask m) { return y.y(representatives(reps, m) | lp::bit(p)); });
}

ConditionedMarginals condition_set(const lp::LiftedSolution& y, int s, Vertex u,
                                   std::vector<std::vector<Vertex>> items) {
  if (y.kind() != lp::LiftKind::kSet) throw std::invalid_argument("size conditioning needs a set lift");
  const double base = y.y(s, lp::bit(u));
  if (!(base > 0.0)) throw std::invalid_argument("conditioning on a zero-mass branch");
  const auto reps = items;
  return ConditionedMarginals(std::move(items), y.order() - 1, [&](ItemMask m) {
    return y.y(s, representatives(reps, m) | lp::bit(u)) / base;
  });
}

ItemMask rt_sample(const ConditionedMarginals& m, int depth, Rng& rng) {
  if (depth < 0 || depth > max_depth(m)) throw std::invalid_argument("rounding depth above the conditioned order");
  const int k = m.item_count();
  std::vector<int> pool(k);
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    const int t = std::min<int>(k, static_cast<int>(uniform_below(rng, depth + 1)));
    for (int i = 0; i < k; ++i) pool[i] = i;
    ItemMask in = 0, out = 0;
    double mass = 1.0;
    bool degenerate = false;
    for (int i = 0; i < t; ++i) {
      const int j = i + static_cast<int>(uniform_below(rng, k - i));
      std::swap(pool[i], pool[j]);
      const ItemMask seed = item_bit(pool[i]);
      const double take = clamp01(m.pattern_mass(in | seed, out) / mass);
      if (bernoulli(rng, take)) in |= seed;
      else out |= seed;
      mass = m.pattern_mass(in, out);
      if (mass < kMinBranchMass) {
        degenerate = true;
        break;
      }
    }
    if (degenerate) continue;
    ItemMask chosen = in;
    for (int v = 0; v < k; ++v) {
      const ItemMask b = item_bit(v);
      if ((in | out) & b) continue;
      const double y = m.marginal(v);
      if (y <= 0.0) continue;
      if (y >= 1.0 || bernoulli(rng, clamp01(m.pattern_mass(in | b, out) / mass))) chosen |= b;
    }
    return chosen;
  }
  throw std::runtime_error("correlated rounding kept drawing near-zero branches");
}

InclusionTable exact_inclusion(const ConditionedMarginals& m, int depth) {
  if (depth < 0 || depth > max_depth(m)) throw std::invalid_argument("rounding depth above the conditioned order");
  const int k = m.item_count();
  InclusionTable table{Eigen::VectorXd::Zero(k), Eigen::MatrixXd::Zero(k, k)};
  Eigen::VectorXd q(k);
  for (int t0 = 0; t0 <= depth; ++t0) {
    const int t = std::min(t0, k);
    const double seed_weight = 1.0 / ((depth + 1) * static_cast<double>(binomial(k, t)));
    for_each_combination(k, t, [&](ItemMask seeds) {
      for (ItemMask in = seeds;; in = (in - 1) & seeds) {
        const ItemMask out = seeds & ~in;
        const double mass = m.pattern_mass(in, out);
        if (mass > 0.0) {
          for (int v = 0; v < k; ++v) {
            const ItemMask b = item_bit(v);
            if (seeds & b) q[v] = (in & b) ? 1.0 : 0.0;
            else if (m.marginal(v) <= 0.0) q[v] = 0.0;
            else if (m.marginal(v) >= 1.0) q[v] = 1.0;
            else q[v] = clamp01(m.pattern_mass(in | b, out) / mass);
          }
          const double w = seed_weight * mass;
          table.marginal += w * q;
          Eigen::MatrixXd outer = q * q.transpose();
          outer.diagonal() = q;
          // Seeds are fixed within a branch, so q_v q_w is exact for them too.
          table.joint += w * outer;
        }
        if (in == 0) break;
      }
    });
  }
  return table;
}

double pairwise_error(const ConditionedMarginals& m, const Eigen::MatrixXd& joint) {
  double total = 0.0;
  long count = 0;
  for (int i = 0; i < m.item_count(); ++i) {
    if (!m.fractional(i)) continue;
    for (int j = i + 1; j < m.item_count(); ++j) {
      if (!m.fractional(j)) continue;
      total += std::abs(joint(i, j) - m.pair(i, j));
      ++count;
    }
  }
  return count == 0 ? 0.0 : total / count;
}

double exact_pairwise_error(const ConditionedMarginals& m, int depth) {
  return pairwise_error(m, exact_inclusion(m, depth).joint);
}

double measure_pairwise_error(const ConditionedMarginals& m, int depth, int trials, Rng& rng) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  const int k = m.item_count();
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(k, k);
  std::vector<int> taken;
  for (int t = 0; t < trials; ++t) {
    taken.clear();
    for (ItemMask c = rt_sample(m, depth, rng); c != 0; c &= c - 1) taken.push_back(__builtin_ctzll(c));
    for (int a : taken)
      for (int b : taken) counts(a, b) += 1.0;
  }
  return pairwise_error(m, counts / trials);
}

}  // namespace corrclust
