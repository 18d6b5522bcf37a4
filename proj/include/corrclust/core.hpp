#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace corrclust {

using Vertex = int;
// Bit set over at most 64 vertices. Used wherever subsets are enumerated.
using VertexMask = std::uint64_t;

inline constexpr int kMaskVertices = 64;

// Unordered pair stored as (min, max).
struct VertexPair {
  Vertex u = 0;
  Vertex v = 0;

  static VertexPair canonical(Vertex a, Vertex b) {
    return a < b ? VertexPair{a, b} : VertexPair{b, a};
  }
  friend auto operator<=>(const VertexPair&, const VertexPair&) = default;
};

constexpr std::int64_t pair_count(std::int64_t n) { return n * (n - 1) / 2; }

// Position of pair {u, v} in row-major upper-triangular order.
constexpr std::int64_t pair_index(std::int64_t n, Vertex u, Vertex v) {
  if (u > v) std::swap(u, v);
  return u * (2 * n - u - 1) / 2 + (v - u - 1);
}

VertexPair pair_at(int n, std::int64_t index);

enum class Sign : std::int8_t { kMinus = -1, kPlus = 1 };

char sign_char(Sign s);

// Complete signed graph. Every vertex carries an implicit + self-loop, which
// only enters degree and neighborhood computations.
class SignedGraph {
 public:
  SignedGraph() = default;
  explicit SignedGraph(int n, Sign default_sign = Sign::kMinus);

  int size() const { return n_; }
  Sign sign(Vertex u, Vertex v) const;
  bool is_plus(Vertex u, Vertex v) const;
  void set_sign(Vertex u, Vertex v, Sign s);

  // d_v: + neighbors plus the vertex itself.
  int degree(Vertex v) const { return degree_[v]; }
  // Closed + neighborhood N_v, sorted.
  std::vector<Vertex> neighborhood(Vertex v) const;
  VertexMask neighborhood_mask(Vertex v) const;

  std::int64_t plus_count() const;
  std::vector<VertexPair> plus_pairs() const;

  friend bool operator==(const SignedGraph& a, const SignedGraph& b) {
    return a.n_ == b.n_ && (a.plus_ == b.plus_).all();
  }

 private:
  void check_pair(Vertex u, Vertex v) const;

  int n_ = 0;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> plus_;
  std::vector<int> degree_;
};

// Total assignment of vertices to clusters. Cluster ids are renumbered by
// first appearance, so equal partitions compare equal.
class Clustering {
 public:
  Clustering() = default;
  explicit Clustering(std::vector<int> assignment);

  static Clustering from_clusters(int n,
                                  const std::vector<std::vector<Vertex>>& clusters);
  static Clustering singletons(int n);
  static Clustering single_cluster(int n);

  int size() const { return static_cast<int>(assignment_.size()); }
  int cluster_count() const { return clusters_; }
  int cluster_of(Vertex v) const { return assignment_[v]; }
  bool together(Vertex u, Vertex v) const { return assignment_[u] == assignment_[v]; }
  const std::vector<int>& assignment() const { return assignment_; }
  std::vector<std::vector<Vertex>> clusters() const;

  friend bool operator==(const Clustering&, const Clustering&) = default;

 private:
  std::vector<int> assignment_;
  int clusters_ = 0;
};

enum class PairClass { kAtomic, kAdmissible, kNonAdmissible };

const char* pair_class_name(PairClass c);

// Atoms (proper, size >= 2) plus the admissible pairs. Vertices outside every
// proper atom act as singleton pseudo-atoms.
class PreclusteredInstance {
 public:
  PreclusteredInstance() = default;
  // Throws std::invalid_argument unless atoms are disjoint, every admissible
  // pair has an endpoint outside the atoms, and vertices of one atom share
  // their admissible neighborhoods.
  PreclusteredInstance(int n, std::vector<std::vector<Vertex>> atoms,
                       const std::vector<VertexPair>& admissible,
                       double epsilon_q);

  // No atoms, every pair admissible.
  static PreclusteredInstance trivial(int n, double epsilon_q = 0.1);

  int size() const { return n_; }
  double epsilon_q() const { return epsilon_q_; }

  const std::vector<std::vector<Vertex>>& atoms() const { return atoms_; }
  int atom_of(Vertex v) const { return atom_of_[v]; }
  bool in_atom(Vertex v) const { return atom_of_[v] >= 0; }
  // K_v: the atom of v, or {v}.
  std::vector<Vertex> atom_members(Vertex v) const;
  // Proper atoms and singletons, ordered by smallest member.
  std::vector<std::vector<Vertex>> pseudo_atoms() const;

  bool is_admissible(Vertex u, Vertex v) const;
  PairClass classify(Vertex u, Vertex v) const;
  std::vector<VertexPair> admissible_pairs() const;
  std::int64_t admissible_count() const { return admissible_count_; }
  int admissible_degree(Vertex v) const { return adm_degree_[v]; }
  std::vector<Vertex> admissible_neighbors(Vertex v) const;

 private:
  int n_ = 0;
  double epsilon_q_ = 0.0;
  std::vector<std::vector<Vertex>> atoms_;
  std::vector<int> atom_of_;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> adm_;
  std::vector<int> adm_degree_;
  std::int64_t admissible_count_ = 0;
};

// Fractional distances over pairs; zero on the diagonal.
class Metric {
 public:
  Metric() = default;
  explicit Metric(int n, double fill = 0.0);

  static Metric from_clustering(const Clustering& c);
  static Metric from_pair_vector(int n, const Eigen::VectorXd& values);

  int size() const { return static_cast<int>(x_.rows()); }
  double operator()(Vertex u, Vertex v) const { return x_(u, v); }
  void set(Vertex u, Vertex v, double value);
  const Eigen::MatrixXd& matrix() const { return x_; }
  Eigen::VectorXd to_pair_vector() const;

  // Largest x_uv - x_uw - x_wv over all triples, or 0.
  double max_triangle_violation() const;

 private:
  Eigen::MatrixXd x_;
};

inline constexpr double kMetricTolerance = 1e-9;

// Throws std::invalid_argument if x leaves [0,1], breaks a triangle
// inequality or the pinning of p (atomic -> 0, non-admissible -> 1).
void validate_metric(const Metric& x, const PreclusteredInstance& p,
                     double tol = kMetricTolerance);

std::int64_t clustering_cost(const SignedGraph& g, const Clustering& c);
double fractional_cost(const SignedGraph& g, const Metric& x);

PairClass classify_pair(const PreclusteredInstance& p, Vertex u, Vertex v);
bool is_good_clustering(const PreclusteredInstance& p, const Clustering& c);

enum class InstanceKind { kUniformRandom, kPlantedCliques, kAdversarialMix };

struct GeneratorParams {
  double plus_probability = 0.5;   // uniform_random
  std::vector<int> clique_sizes;   // planted_cliques, adversarial_mix
  double noise = 0.0;              // sign flip probability
  int hubs = 0;                    // adversarial_mix: vertices + to everyone
};

// planted_cliques needs clique sizes summing to n. adversarial_mix plants
// cliques on the first n - hubs vertices (sizes default to threes) and makes
// the remaining hub vertices + to everything before noise is applied.
SignedGraph generate_instance(InstanceKind kind, int n, const GeneratorParams& params,
                              std::uint64_t seed);

InstanceKind parse_instance_kind(const std::string& name);
const char* instance_kind_name(InstanceKind kind);

}  // namespace corrclust
