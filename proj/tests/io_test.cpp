#include "corrclust/io.hpp"

#include <sstream>

#include <gtest/gtest.h>

namespace corrclust {
namespace {

SignedGraph parse(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

TEST(InstanceIo, RoundTripsK5AndRandomGraphs) {
  SignedGraph k5(5, Sign::kPlus);
  std::ostringstream out;
  write_instance(out, k5);
  EXPECT_EQ(out.str(), "n 5 default +\n");
  EXPECT_EQ(parse(out.str()), k5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SignedGraph g = generate_instance(InstanceKind::kUniformRandom, 9, {}, seed);
    std::ostringstream text;
    write_instance(text, g);
    EXPECT_EQ(parse(text.str()), g);
  }
}

TEST(InstanceIo, DefaultCompletesComplement) {
  SignedGraph g = parse("# two plus pairs\nn 4 default -\n0 1 +\n2 3 +  # trailing\n");
  EXPECT_TRUE(g.is_plus(0, 1));
  EXPECT_TRUE(g.is_plus(2, 3));
  EXPECT_FALSE(g.is_plus(0, 2));
  EXPECT_EQ(g.plus_count(), 2);
}

TEST(InstanceIo, RejectsMalformedInput) {
  EXPECT_THROW(parse("n 3 default -\n0 1 +\n0 1 -\n"), ParseError);   // duplicate
  EXPECT_THROW(parse("n 3\n0 1 +\n0 2 -\n"), ParseError);             // missing pair
  EXPECT_THROW(parse("n 3 default -\n1 0 +\n"), ParseError);          // u > v
  EXPECT_THROW(parse("n 3 default -\n0 3 +\n"), ParseError);          // out of range
  EXPECT_THROW(parse("n 3 default *\n"), ParseError);
  EXPECT_THROW(parse("n 3 default -\n0 1 + extra\n"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
  try {
    parse("n 3 default -\n0 1 +\n0 1 +\n");
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(InstanceIo, FullListingWithoutDefault) {
  SignedGraph g = parse("n 3\n0 1 +\n0 2 -\n1 2 +\n");
  EXPECT_TRUE(g.is_plus(1, 2));
  EXPECT_FALSE(g.is_plus(0, 2));
}

TEST(ClusteringIo, RoundTrips) {
  Clustering c({0, 1, 0, 2, 1});
  std::ostringstream out;
  write_clustering(out, c);
  std::istringstream in(out.str());
  EXPECT_EQ(parse_clustering(in, 5), c);
  std::istringstream missing("0 0\n1 0\n");
  EXPECT_THROW(parse_clustering(missing, 3), ParseError);
}

TEST(PreclusteringIo, RoundTrips) {
  PreclusteredInstance p(5, {{0, 1}}, {{0, 4}, {1, 4}, {2, 3}}, 0.1);
  std::ostringstream out;
  write_preclustering(out, p);
  EXPECT_EQ(out.str(), "atom 0: 0 1\nadm: 0 4\nadm: 1 4\nadm: 2 3\n");
  std::istringstream in(out.str());
  PreclusteredInstance q = parse_preclustering(in, 5, 0.1);
  EXPECT_EQ(q.atoms(), p.atoms());
  EXPECT_EQ(q.admissible_pairs(), p.admissible_pairs());
  std::istringstream bad("atom 0: 0 1\nadm: 0 1\n");
  EXPECT_THROW(parse_preclustering(bad, 5, 0.1), ParseError);
}

}  // namespace
}  // namespace corrclust
