#include "corrclust/exact.hpp"

#include <bit>
#include <limits>
#include <string>
#include <vector>

namespace corrclust {

namespace {

constexpr std::int64_t kForbidden = std::numeric_limits<std::int64_t>::max() / 4;

// Ordering used for ties: the cluster holding the earliest differing node wins.
bool precedes(std::uint32_t a, std::uint32_t b) {
  const std::uint32_t diff = a ^ b;
  if (diff == 0) return false;
  return (a & (diff & -diff)) != 0;
}

// Partitions nodes 0..m-1 minimizing the sum of weight[S]. Returns the blocks.
std::vector<std::uint32_t> partition_dp(int m, const std::vector<std::int64_t>& weight) {
  const std::uint32_t full = m == 32 ? ~0u : (1u << m) - 1;
  std::vector<std::int64_t> best(std::size_t{full} + 1, kForbidden);
  best[0] = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const std::uint32_t low = mask & -mask;
    const std::uint32_t rest = mask ^ low;
    std::int64_t value = kForbidden;
    // Submasks of rest, each joined with the anchor.
    for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
      const std::uint32_t s = sub | low;
      if (weight[s] < kForbidden && best[mask ^ s] < kForbidden)
        value = std::min(value, weight[s] + best[mask ^ s]);
      if (sub == 0) break;
    }
    best[mask] = value;
  }
  std::vector<std::uint32_t> blocks;
  for (std::uint32_t mask = full; mask != 0;) {
    const std::uint32_t low = mask & -mask;
    const std::uint32_t rest = mask ^ low;
    std::uint32_t chosen = 0;
    bool found = false;
    for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
      const std::uint32_t s = sub | low;
      if (weight[s] < kForbidden && best[mask ^ s] < kForbidden &&
          weight[s] + best[mask ^ s] == best[mask] && (!found || precedes(s, chosen))) {
        chosen = s;
        found = true;
      }
      if (sub == 0) break;
    }
    blocks.push_back(chosen);
    mask ^= chosen;
  }
  return blocks;
}

void check_limit(int n, int limit, int hard_cap, const char* who) {
  if (limit > hard_cap) throw LimitExceeded(std::string(who) + ": limit above " + std::to_string(hard_cap));
  if (n > limit)
    throw LimitExceeded(std::string(who) + ": n = " + std::to_string(n) + " exceeds limit " +
                        std::to_string(limit));
}

}  // namespace

ExactResult brute_force_opt(const SignedGraph& g, int limit_n) {
  const int n = g.size();
  check_limit(n, limit_n, 20, "brute_force_opt");
  if (n == 0) return {Clustering(), 0};
  // w(S) = #minus pairs inside S - #plus pairs inside S, grown by top vertex.
  std::vector<std::uint32_t> plus(n, 0);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v)
      if (u != v && g.is_plus(u, v)) plus[u] |= 1u << v;
  std::vector<std::int64_t> weight(std::size_t{1} << n, 0);
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    const int top = 31 - std::countl_zero(s);
    const std::uint32_t rest = s ^ (1u << top);
    const int p = std::popcount(plus[top] & rest);
    const int m = std::popcount(rest) - p;
    weight[s] = weight[rest] + m - p;
  }
  std::vector<int> a(n, 0);
  std::int64_t total = g.plus_count();
  const auto blocks = partition_dp(n, weight);
  for (std::size_t c = 0; c < blocks.size(); ++c) {
    total += weight[blocks[c]];
    for (Vertex v = 0; v < n; ++v)
      if (blocks[c] >> v & 1u) a[v] = static_cast<int>(c);
  }
  return {Clustering(std::move(a)), total};
}

ExactResult brute_force_opt_good(const SignedGraph& g, const PreclusteredInstance& p,
                                 int limit_n) {
  const int n = g.size();
  check_limit(n, limit_n, 20, "brute_force_opt_good");
  if (p.size() != n) throw std::invalid_argument("preclustering does not match graph");
  if (n == 0) return {Clustering(), 0};
  const auto nodes = p.pseudo_atoms();
  const int m = static_cast<int>(nodes.size());
  // Pairwise (minus - plus) counts between nodes, internal counts on the diagonal.
  std::vector<std::vector<std::int64_t>> between(m, std::vector<std::int64_t>(m, 0));
  std::vector<std::uint32_t> compatible(m, 0);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      std::int64_t w = 0;
      for (Vertex u : nodes[i])
        for (Vertex v : nodes[j])
          if (u < v || (i != j && u != v)) w += g.is_plus(u, v) ? -1 : 1;
      between[i][j] = between[j][i] = w;
      if (i != j && p.classify(nodes[i][0], nodes[j][0]) == PairClass::kAdmissible) {
        compatible[i] |= 1u << j;
        compatible[j] |= 1u << i;
      }
    }
  }
  std::vector<std::int64_t> weight(std::size_t{1} << m, 0);
  for (std::uint32_t s = 1; s < (1u << m); ++s) {
    const int top = 31 - std::countl_zero(s);
    const std::uint32_t rest = s ^ (1u << top);
    if (weight[rest] >= kForbidden || (compatible[top] & rest) != rest) {
      weight[s] = kForbidden;
      continue;
    }
    std::int64_t w = weight[rest] + between[top][top];
    for (std::uint32_t r = rest; r != 0; r &= r - 1) w += between[top][std::countr_zero(r)];
    weight[s] = w;
  }
  std::vector<int> a(n, 0);
  std::int64_t total = g.plus_count();
  const auto blocks = partition_dp(m, weight);
  for (std::size_t c = 0; c < blocks.size(); ++c) {
    total += weight[blocks[c]];
    for (int i = 0; i < m; ++i)
      if (blocks[c] >> i & 1u)
        for (Vertex v : nodes[i]) a[v] = static_cast<int>(c);
  }
  return {Clustering(std::move(a)), total};
}

std::int64_t naive_opt(const SignedGraph& g, int limit_n) {
  const int n = g.size();
  check_limit(n, limit_n, 12, "naive_opt");
  if (n == 0) return 0;
  // Restricted growth strings: a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
  std::vector<int> a(n, 0), prefix_max(n, 0);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  while (true) {
    std::int64_t cost = 0;
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) cost += g.is_plus(u, v) != (a[u] == a[v]);
    best = std::min(best, cost);
    int i = n - 1;
    while (i > 0 && a[i] > prefix_max[i - 1]) --i;
    if (i == 0) break;
    ++a[i];
    prefix_max[i] = std::max(prefix_max[i - 1], a[i]);
    for (int j = i + 1; j < n; ++j) {
      a[j] = 0;
      prefix_max[j] = prefix_max[j - 1];
    }
  }
  return best;
}

}  // namespace corrclust
