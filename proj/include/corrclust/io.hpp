#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "corrclust/core.hpp"

namespace corrclust {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Instance text:
//   n <count> [default <+|->]
//   <u> <v> <+|->        one per overriding pair, u < v
// Without a default every pair must be listed. '#' starts a comment.
SignedGraph parse_instance(std::istream& in);
SignedGraph read_instance_file(const std::string& path);
// Lists the pairs whose sign differs from the majority sign.
void write_instance(std::ostream& out, const SignedGraph& g);

// `<vertex> <cluster-id>` per line.
Clustering parse_clustering(std::istream& in, int n);
void write_clustering(std::ostream& out, const Clustering& c);

// `atom <id>: v1 v2 ...` lines, then `adm: u v` lines.
void write_preclustering(std::ostream& out, const PreclusteredInstance& p);
PreclusteredInstance parse_preclustering(std::istream& in, int n, double epsilon_q);

}  // namespace corrclust
