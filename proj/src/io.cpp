#include "corrclust/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace corrclust {

namespace {

// Next non-empty line with comments stripped; false at end of input.
bool next_line(std::istream& in, std::string& line, int& number) {
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

Sign parse_sign(const std::string& token, int line) {
  if (token == "+") return Sign::kPlus;
  if (token == "-") return Sign::kMinus;
  throw ParseError(line, "expected + or -, got '" + token + "'");
}

bool at_end(std::istringstream& s) {
  std::string rest;
  return !(s >> rest);
}

}  // namespace

SignedGraph parse_instance(std::istream& in) {
  std::string line;
  int number = 0;
  if (!next_line(in, line, number)) throw ParseError(number, "missing header");
  std::istringstream header(line);
  std::string key;
  long long n = -1;
  if (!(header >> key >> n) || key != "n" || n < 0)
    throw ParseError(number, "header must start with 'n <count>'");
  if (n > 100000) throw ParseError(number, "vertex count too large");
  bool has_default = false;
  Sign fallback = Sign::kMinus;
  if (header >> key) {
    std::string token;
    if (key != "default" || !(header >> token)) throw ParseError(number, "expected 'default <+|->'");
    fallback = parse_sign(token, number);
    has_default = true;
  }
  if (!at_end(header)) throw ParseError(number, "trailing tokens in header");

  const int size = static_cast<int>(n);
  SignedGraph g(size, fallback);
  std::vector<bool> seen(static_cast<std::size_t>(pair_count(size)), false);
  while (next_line(in, line, number)) {
    std::istringstream row(line);
    long long u = 0, v = 0;
    std::string token;
    if (!(row >> u >> v >> token) || !at_end(row)) throw ParseError(number, "expected '<u> <v> <+|->'");
    if (u < 0 || v >= size || u >= v) throw ParseError(number, "pair must satisfy 0 <= u < v < n");
    auto k = static_cast<std::size_t>(pair_index(size, static_cast<Vertex>(u), static_cast<Vertex>(v)));
    if (seen[k]) throw ParseError(number, "duplicate pair");
    seen[k] = true;
    g.set_sign(static_cast<Vertex>(u), static_cast<Vertex>(v), parse_sign(token, number));
  }
  if (!has_default) {
    for (std::size_t k = 0; k < seen.size(); ++k) {
      if (!seen[k]) {
        VertexPair p = pair_at(size, static_cast<std::int64_t>(k));
        throw ParseError(number, "missing pair " + std::to_string(p.u) + " " + std::to_string(p.v) +
                                     " and no default sign");
      }
    }
  }
  return g;
}

SignedGraph read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_instance(in);
}

void write_instance(std::ostream& out, const SignedGraph& g) {
  const int n = g.size();
  const bool plus_default = 2 * g.plus_count() > pair_count(n);
  const Sign fallback = plus_default ? Sign::kPlus : Sign::kMinus;
  out << "n " << n << " default " << sign_char(fallback) << '\n';
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (g.sign(u, v) != fallback) out << u << ' ' << v << ' ' << sign_char(g.sign(u, v)) << '\n';
}

Clustering parse_clustering(std::istream& in, int n) {
  std::vector<int> a(n, -1);
  std::string line;
  int number = 0;
  while (next_line(in, line, number)) {
    std::istringstream row(line);
    long long v = 0, c = 0;
    if (!(row >> v >> c) || !at_end(row)) throw ParseError(number, "expected '<vertex> <cluster-id>'");
    if (v < 0 || v >= n) throw ParseError(number, "vertex out of range");
    if (c < 0 || c > 1000000000) throw ParseError(number, "bad cluster id");
    if (a[v] >= 0) throw ParseError(number, "vertex assigned twice");
    a[v] = static_cast<int>(c);
  }
  for (int v = 0; v < n; ++v)
    if (a[v] < 0) throw ParseError(number, "vertex " + std::to_string(v) + " unassigned");
  return Clustering(std::move(a));
}

void write_clustering(std::ostream& out, const Clustering& c) {
  for (Vertex v = 0; v < c.size(); ++v) out << v << ' ' << c.cluster_of(v) << '\n';
}

void write_preclustering(std::ostream& out, const PreclusteredInstance& p) {
  for (std::size_t i = 0; i < p.atoms().size(); ++i) {
    out << "atom " << i << ':';
    for (Vertex v : p.atoms()[i]) out << ' ' << v;
    out << '\n';
  }
  for (auto [u, v] : p.admissible_pairs()) out << "adm: " << u << ' ' << v << '\n';
}

PreclusteredInstance parse_preclustering(std::istream& in, int n, double epsilon_q) {
  std::vector<std::vector<Vertex>> atoms;
  std::vector<VertexPair> adm;
  std::string line;
  int number = 0;
  while (next_line(in, line, number)) {
    std::istringstream row(line);
    std::string key;
    row >> key;
    if (key == "atom") {
      std::string id;
      row >> id;
      if (id.empty() || id.back() != ':') throw ParseError(number, "expected 'atom <id>:'");
      std::vector<Vertex> atom;
      long long v = 0;
      while (row >> v) {
        if (v < 0 || v >= n) throw ParseError(number, "vertex out of range");
        atom.push_back(static_cast<Vertex>(v));
      }
      if (!row.eof()) throw ParseError(number, "bad atom member");
      atoms.push_back(std::move(atom));
    } else if (key == "adm:") {
      long long u = 0, v = 0;
      if (!(row >> u >> v) || !at_end(row)) throw ParseError(number, "expected 'adm: <u> <v>'");
      if (u < 0 || v < 0 || u >= n || v >= n || u == v) throw ParseError(number, "bad pair");
      adm.push_back(VertexPair::canonical(static_cast<Vertex>(u), static_cast<Vertex>(v)));
    } else {
      throw ParseError(number, "unknown record '" + key + "'");
    }
  }
  try {
    return PreclusteredInstance(n, std::move(atoms), adm, epsilon_q);
  } catch (const std::invalid_argument& e) {
    throw ParseError(number, e.what());
  }
}

}  // namespace corrclust
