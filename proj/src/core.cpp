#include "corrclust/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "corrclust/random.hpp"

namespace corrclust {

VertexPair pair_at(int n, std::int64_t index) {
  if (index < 0 || index >= pair_count(n)) throw std::out_of_range("pair index out of range");
  Vertex u = 0;
  std::int64_t row = n - 1;
  while (index >= row) {
    index -= row;
    --row;
    ++u;
  }
  return {u, static_cast<Vertex>(u + 1 + index)};
}

char sign_char(Sign s) { return s == Sign::kPlus ? '+' : '-'; }

SignedGraph::SignedGraph(int n, Sign default_sign) : n_(n) {
  if (n < 0) throw std::invalid_argument("negative vertex count");
  plus_.setConstant(n, n, default_sign == Sign::kPlus);
  plus_.matrix().diagonal().setConstant(true);
  degree_.assign(n, default_sign == Sign::kPlus ? n : 1);
}

void SignedGraph::check_pair(Vertex u, Vertex v) const {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) throw std::out_of_range("vertex out of range");
  if (u == v) throw std::invalid_argument("pair needs two distinct vertices");
}

Sign SignedGraph::sign(Vertex u, Vertex v) const {
  return is_plus(u, v) ? Sign::kPlus : Sign::kMinus;
}

bool SignedGraph::is_plus(Vertex u, Vertex v) const {
  check_pair(u, v);
  return plus_(u, v);
}

void SignedGraph::set_sign(Vertex u, Vertex v, Sign s) {
  check_pair(u, v);
  const bool plus = s == Sign::kPlus;
  if (plus_(u, v) == plus) return;
  plus_(u, v) = plus_(v, u) = plus;
  const int delta = plus ? 1 : -1;
  degree_[u] += delta;
  degree_[v] += delta;
}

std::vector<Vertex> SignedGraph::neighborhood(Vertex v) const {
  std::vector<Vertex> out;
  out.reserve(degree_[v]);
  for (Vertex w = 0; w < n_; ++w)
    if (plus_(v, w)) out.push_back(w);
  return out;
}

VertexMask SignedGraph::neighborhood_mask(Vertex v) const {
  if (n_ > kMaskVertices) throw std::invalid_argument("mask needs at most 64 vertices");
  VertexMask m = 0;
  for (Vertex w = 0; w < n_; ++w)
    if (plus_(v, w)) m |= VertexMask{1} << w;
  return m;
}

std::int64_t SignedGraph::plus_count() const {
  return (std::accumulate(degree_.begin(), degree_.end(), std::int64_t{0}) - n_) / 2;
}

std::vector<VertexPair> SignedGraph::plus_pairs() const {
  std::vector<VertexPair> out;
  for (Vertex u = 0; u < n_; ++u)
    for (Vertex v = u + 1; v < n_; ++v)
      if (plus_(u, v)) out.push_back({u, v});
  return out;
}

Clustering::Clustering(std::vector<int> assignment) : assignment_(std::move(assignment)) {
  std::vector<int> relabel;
  for (int& id : assignment_) {
    if (id < 0) throw std::invalid_argument("negative cluster id");
    if (static_cast<std::size_t>(id) >= relabel.size()) relabel.resize(id + 1, -1);
    if (relabel[id] < 0) relabel[id] = clusters_++;
    id = relabel[id];
  }
}

Clustering Clustering::from_clusters(int n, const std::vector<std::vector<Vertex>>& clusters) {
  std::vector<int> a(n, -1);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (Vertex v : clusters[c]) {
      if (v < 0 || v >= n) throw std::out_of_range("vertex out of range");
      if (a[v] >= 0) throw std::invalid_argument("vertex in two clusters");
      a[v] = static_cast<int>(c);
    }
  }
  if (std::find(a.begin(), a.end(), -1) != a.end())
    throw std::invalid_argument("clustering is not total");
  return Clustering(std::move(a));
}

Clustering Clustering::singletons(int n) {
  std::vector<int> a(n);
  std::iota(a.begin(), a.end(), 0);
  return Clustering(std::move(a));
}

Clustering Clustering::single_cluster(int n) { return Clustering(std::vector<int>(n, 0)); }

std::vector<std::vector<Vertex>> Clustering::clusters() const {
  std::vector<std::vector<Vertex>> out(clusters_);
  for (Vertex v = 0; v < size(); ++v) out[assignment_[v]].push_back(v);
  return out;
}

const char* pair_class_name(PairClass c) {
  switch (c) {
    case PairClass::kAtomic: return "atomic";
    case PairClass::kAdmissible: return "admissible";
    case PairClass::kNonAdmissible: return "non_admissible";
  }
  return "?";
}

PreclusteredInstance::PreclusteredInstance(int n, std::vector<std::vector<Vertex>> atoms,
                                           const std::vector<VertexPair>& admissible,
                                           double epsilon_q)
    : n_(n), epsilon_q_(epsilon_q), atom_of_(n, -1), adm_degree_(n, 0) {
  for (auto& a : atoms) {
    std::sort(a.begin(), a.end());
    if (a.size() < 2) throw std::invalid_argument("proper atoms need two or more vertices");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  atoms_ = std::move(atoms);
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    for (Vertex v : atoms_[i]) {
      if (v < 0 || v >= n) throw std::out_of_range("atom vertex out of range");
      if (atom_of_[v] >= 0) throw std::invalid_argument("atoms are not disjoint");
      atom_of_[v] = static_cast<int>(i);
    }
  }
  adm_.setConstant(n, n, false);
  for (auto [u, v] : admissible) {
    if (u < 0 || v < 0 || u >= n || v >= n || u == v)
      throw std::invalid_argument("bad admissible pair");
    if (atom_of_[u] >= 0 && atom_of_[v] >= 0)
      throw std::invalid_argument("admissible pair with both endpoints in atoms");
    if (adm_(u, v)) continue;
    adm_(u, v) = adm_(v, u) = true;
    ++adm_degree_[u];
    ++adm_degree_[v];
    ++admissible_count_;
  }
  for (const auto& a : atoms_)
    for (std::size_t i = 1; i < a.size(); ++i)
      if ((adm_.row(a[0]) != adm_.row(a[i])).any())
        throw std::invalid_argument("atom members differ in admissible neighbors");
}

PreclusteredInstance PreclusteredInstance::trivial(int n, double epsilon_q) {
  std::vector<VertexPair> all;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) all.push_back({u, v});
  return PreclusteredInstance(n, {}, all, epsilon_q);
}

std::vector<Vertex> PreclusteredInstance::atom_members(Vertex v) const {
  if (atom_of_[v] < 0) return {v};
  return atoms_[atom_of_[v]];
}

std::vector<std::vector<Vertex>> PreclusteredInstance::pseudo_atoms() const {
  std::vector<std::vector<Vertex>> out;
  for (Vertex v = 0; v < n_; ++v) {
    if (atom_of_[v] < 0) out.push_back({v});
    else if (atoms_[atom_of_[v]].front() == v) out.push_back(atoms_[atom_of_[v]]);
  }
  return out;
}

bool PreclusteredInstance::is_admissible(Vertex u, Vertex v) const { return adm_(u, v); }

PairClass PreclusteredInstance::classify(Vertex u, Vertex v) const {
  if (u == v) throw std::invalid_argument("classify_pair needs u != v");
  if (u < 0 || v < 0 || u >= n_ || v >= n_) throw std::out_of_range("vertex out of range");
  if (atom_of_[u] >= 0 && atom_of_[u] == atom_of_[v]) return PairClass::kAtomic;
  if (adm_(u, v)) return PairClass::kAdmissible;
  return PairClass::kNonAdmissible;
}

std::vector<VertexPair> PreclusteredInstance::admissible_pairs() const {
  std::vector<VertexPair> out;
  for (Vertex u = 0; u < n_; ++u)
    for (Vertex v = u + 1; v < n_; ++v)
      if (adm_(u, v)) out.push_back({u, v});
  return out;
}

std::vector<Vertex> PreclusteredInstance::admissible_neighbors(Vertex v) const {
  std::vector<Vertex> out;
  for (Vertex w = 0; w < n_; ++w)
    if (adm_(v, w)) out.push_back(w);
  return out;
}

Metric::Metric(int n, double fill) : x_(Eigen::MatrixXd::Constant(n, n, fill)) {
  x_.diagonal().setZero();
}

Metric Metric::from_clustering(const Clustering& c) {
  Metric m(c.size(), 1.0);
  for (Vertex u = 0; u < c.size(); ++u)
    for (Vertex v = u + 1; v < c.size(); ++v)
      if (c.together(u, v)) m.set(u, v, 0.0);
  return m;
}

Metric Metric::from_pair_vector(int n, const Eigen::VectorXd& values) {
  if (values.size() != pair_count(n)) throw std::invalid_argument("pair vector size mismatch");
  Metric m(n);
  std::int64_t k = 0;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) m.set(u, v, values[k++]);
  return m;
}

void Metric::set(Vertex u, Vertex v, double value) {
  if (u == v) throw std::invalid_argument("metric diagonal is fixed at 0");
  x_(u, v) = x_(v, u) = value;
}

Eigen::VectorXd Metric::to_pair_vector() const {
  const int n = size();
  Eigen::VectorXd out(pair_count(n));
  std::int64_t k = 0;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) out[k++] = x_(u, v);
  return out;
}

double Metric::max_triangle_violation() const {
  const int n = size();
  double worst = 0.0;
  for (Vertex w = 0; w < n; ++w) {
    // x_uv - x_uw - x_wv for all u, v at once.
    Eigen::MatrixXd slack =
        x_ - x_.col(w).replicate(1, n) - x_.row(w).replicate(n, 1);
    worst = std::max(worst, slack.maxCoeff());
  }
  return worst;
}

void validate_metric(const Metric& x, const PreclusteredInstance& p, double tol) {
  const int n = x.size();
  if (n != p.size()) throw std::invalid_argument("metric and instance sizes differ");
  if (x.matrix().minCoeff() < -tol || x.matrix().maxCoeff() > 1.0 + tol)
    throw std::invalid_argument("metric value outside [0,1]");
  if (x.max_triangle_violation() > tol)
    throw std::invalid_argument("metric violates a triangle inequality");
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      const PairClass c = p.classify(u, v);
      if (c == PairClass::kAtomic && x(u, v) > tol)
        throw std::invalid_argument("atomic pair with positive distance");
      if (c == PairClass::kNonAdmissible && x(u, v) < 1.0 - tol)
        throw std::invalid_argument("non-admissible pair with distance below 1");
    }
  }
}

std::int64_t clustering_cost(const SignedGraph& g, const Clustering& c) {
  if (c.size() != g.size()) throw std::invalid_argument("clustering does not cover the graph");
  std::int64_t cost = 0;
  for (Vertex u = 0; u < g.size(); ++u)
    for (Vertex v = u + 1; v < g.size(); ++v)
      cost += g.is_plus(u, v) != c.together(u, v);
  return cost;
}

double fractional_cost(const SignedGraph& g, const Metric& x) {
  if (x.size() != g.size()) throw std::invalid_argument("metric does not cover the graph");
  double cost = 0.0;
  for (Vertex u = 0; u < g.size(); ++u)
    for (Vertex v = u + 1; v < g.size(); ++v)
      cost += g.is_plus(u, v) ? x(u, v) : 1.0 - x(u, v);
  return cost;
}

PairClass classify_pair(const PreclusteredInstance& p, Vertex u, Vertex v) {
  return p.classify(u, v);
}

bool is_good_clustering(const PreclusteredInstance& p, const Clustering& c) {
  if (c.size() != p.size()) throw std::invalid_argument("clustering does not cover the instance");
  for (Vertex u = 0; u < p.size(); ++u) {
    for (Vertex v = u + 1; v < p.size(); ++v) {
      const PairClass k = p.classify(u, v);
      if (k == PairClass::kAtomic && !c.together(u, v)) return false;
      if (k == PairClass::kNonAdmissible && c.together(u, v)) return false;
    }
  }
  return true;
}

namespace {

void plant(SignedGraph& g, const std::vector<int>& sizes, int offset) {
  int start = offset;
  for (int s : sizes) {
    for (Vertex u = start; u < start + s; ++u)
      for (Vertex v = u + 1; v < start + s; ++v) g.set_sign(u, v, Sign::kPlus);
    start += s;
  }
}

void flip_with_noise(SignedGraph& g, double noise, Rng& rng) {
  if (noise <= 0.0) return;
  for (Vertex u = 0; u < g.size(); ++u)
    for (Vertex v = u + 1; v < g.size(); ++v)
      if (bernoulli(rng, noise))
        g.set_sign(u, v, g.is_plus(u, v) ? Sign::kMinus : Sign::kPlus);
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0,1]");
}

}  // namespace

SignedGraph generate_instance(InstanceKind kind, int n, const GeneratorParams& params,
                              std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("instance needs n >= 1");
  check_probability(params.noise, "noise");
  Rng rng(seed);
  SignedGraph g(n, Sign::kMinus);
  switch (kind) {
    case InstanceKind::kUniformRandom: {
      check_probability(params.plus_probability, "plus probability");
      for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
          if (bernoulli(rng, params.plus_probability)) g.set_sign(u, v, Sign::kPlus);
      break;
    }
    case InstanceKind::kPlantedCliques: {
      const auto& sizes = params.clique_sizes;
      if (std::any_of(sizes.begin(), sizes.end(), [](int s) { return s < 1; }) ||
          std::accumulate(sizes.begin(), sizes.end(), 0) != n)
        throw std::invalid_argument("clique sizes must be positive and sum to n");
      plant(g, sizes, 0);
      flip_with_noise(g, params.noise, rng);
      break;
    }
    case InstanceKind::kAdversarialMix: {
      if (params.hubs < 0 || params.hubs >= n)
        throw std::invalid_argument("hub count must lie in [0, n)");
      const int body = n - params.hubs;
      std::vector<int> sizes = params.clique_sizes;
      if (sizes.empty()) {
        for (int left = body; left > 0; left -= 3) sizes.push_back(std::min(3, left));
      }
      if (std::any_of(sizes.begin(), sizes.end(), [](int s) { return s < 1; }) ||
          std::accumulate(sizes.begin(), sizes.end(), 0) != body)
        throw std::invalid_argument("clique sizes must be positive and sum to n - hubs");
      plant(g, sizes, 0);
      for (Vertex h = body; h < n; ++h)
        for (Vertex v = 0; v < n; ++v)
          if (v != h) g.set_sign(h, v, Sign::kPlus);
      flip_with_noise(g, params.noise, rng);
      break;
    }
  }
  return g;
}

InstanceKind parse_instance_kind(const std::string& name) {
  if (name == "uniform" || name == "uniform_random") return InstanceKind::kUniformRandom;
  if (name == "planted" || name == "planted_cliques") return InstanceKind::kPlantedCliques;
  if (name == "adversarial" || name == "adversarial_mix") return InstanceKind::kAdversarialMix;
  throw std::invalid_argument("unknown instance kind: " + name);
}

const char* instance_kind_name(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kUniformRandom: return "uniform_random";
    case InstanceKind::kPlantedCliques: return "planted_cliques";
    case InstanceKind::kAdversarialMix: return "adversarial_mix";
  }
  return "?";
}

}  // namespace corrclust
