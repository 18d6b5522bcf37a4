#pragma once

#include <cstdint>
#include <stdexcept>

#include "corrclust/core.hpp"

namespace corrclust {

class LimitExceeded : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExactResult {
  Clustering clustering;
  std::int64_t cost = 0;
};

inline constexpr int kDefaultOracleLimit = 16;
inline constexpr int kNaiveOracleLimit = 10;

// Minimum-cost clustering by a 3^n subset DP. Among optimal partitions the
// one whose cluster list (ordered by smallest member) is lexicographically
// first by membership is returned.
ExactResult brute_force_opt(const SignedGraph& g, int limit_n = kDefaultOracleLimit);

// Same, restricted to clusterings that are good for p.
ExactResult brute_force_opt_good(const SignedGraph& g, const PreclusteredInstance& p,
                                 int limit_n = kDefaultOracleLimit);

// Enumerates every set partition. Independent check of the DP.
std::int64_t naive_opt(const SignedGraph& g, int limit_n = kNaiveOracleLimit);

}  // namespace corrclust
