#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <vector>

#include "gossip/alias_table.hpp"
#include "gossip/graph.hpp"
#include "gossip/interaction.hpp"
#include "gossip/rng.hpp"

using namespace gossip;

namespace {

GraphParams desk_params() {
  GraphParams params;
  params.n = 10;
  params.regular_fraction = 0.8;
  params.intra_weight = 0.5;
  params.inter_weight = 0.1;
  params.stubborn = UniformStubborn{0.2};
  return params;
}

}  // namespace

TEST_CASE("rng streams are reproducible and distinct", "[sampling]") {
  Rng a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t word = a.next_u64();
    CHECK(word == b.next_u64());
    CHECK(word != c.next_u64());
    CHECK(word != d.next_u64());
  }
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("alias table reproduces its input distribution", "[sampling]") {
  const std::vector<double> weights = {1.0, 2.0, 3.0, 0.5};
  AliasTable table(weights);
  REQUIRE(table.size() == 4);
  double total = 0.0;
  for (double p : table.probabilities()) total += p;
  CHECK(total == Catch::Approx(1.0).margin(1e-14));
  CHECK(table.probabilities()[2] == Catch::Approx(3.0 / 6.5));

  const int draws = 400000;
  Rng rng(7);
  std::vector<int> counts(4, 0);
  for (int i = 0; i < draws; ++i) ++counts[table.sample(rng)];
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double p = table.probabilities()[k];
    const double sigma = std::sqrt(draws * p * (1.0 - p));
    CHECK(std::abs(counts[k] - draws * p) <= 5.0 * sigma);
  }
}

TEST_CASE("alias table input validation", "[sampling]") {
  CHECK_THROWS_AS(AliasTable(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(AliasTable({1.0, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(AliasTable({0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("interaction distribution edges and probabilities", "[sampling]") {
  const auto graph = build_graph(desk_params());
  const InteractionDistribution dist(graph);

  // 12 intra + 16 inter + 16 regular-stubborn pairs, nothing else.
  REQUIRE(dist.edges().size() == 44);
  double total = 0.0;
  for (double p : dist.probabilities()) total += p;
  CHECK(std::abs(total - 1.0) <= 1e-12);

  for (std::size_t k = 0; k < dist.edges().size(); ++k) {
    const Edge edge = dist.edges()[k];
    CHECK(edge.i < edge.j);
    CHECK(graph.weight(edge.i, edge.j) > 0.0);
    CHECK(dist.probabilities()[k] ==
          Catch::Approx(graph.weight(edge.i, edge.j) / graph.alpha()));
    if (edge.i == 0 && edge.j == 1)
      CHECK(dist.probabilities()[k] == Catch::Approx(0.5 / 9.2));
  }
}

TEST_CASE("all-regular graph has uniform edge probabilities", "[sampling]") {
  GraphParams params;
  params.n = 4;
  params.regular_fraction = 1.0;
  params.intra_weight = 0.5;
  params.inter_weight = 0.5;
  const InteractionDistribution dist(build_graph(params));
  REQUIRE(dist.edges().size() == 6);
  for (double p : dist.probabilities()) CHECK(p == Catch::Approx(1.0 / 6.0));
}

TEST_CASE("edge sampling frequencies match the probabilities", "[sampling]") {
  const auto graph = build_graph(desk_params());
  const InteractionDistribution dist(graph);
  const int draws = 1000000;
  Rng rng(2024);
  std::map<std::pair<int, int>, int> counts;
  for (int i = 0; i < draws; ++i) {
    const Edge edge = dist.sample(rng);
    ++counts[{edge.i, edge.j}];
  }
  for (std::size_t k = 0; k < dist.edges().size(); ++k) {
    const Edge edge = dist.edges()[k];
    const double p = dist.probabilities()[k];
    const double sigma = std::sqrt(draws * p * (1.0 - p));
    CHECK(std::abs(counts[{edge.i, edge.j}] - draws * p) <= 5.0 * sigma);
  }
}
