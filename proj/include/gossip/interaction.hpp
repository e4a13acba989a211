#pragma once

#include <utility>
#include <vector>

#include "gossip/alias_table.hpp"
#include "gossip/graph.hpp"
#include "gossip/rng.hpp"

namespace gossip {

/// Undirected edge {i, j} with i < j, 0-based agent indices.
struct Edge {
  int i = 0;
  int j = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Edge-selection distribution w_ij = a(i,j) / alpha over the positive-weight
/// pairs, with a precomputed alias table for constant-time draws.
/// Immutable after construction; shared read-only across replicates.
class InteractionDistribution {
 public:
  explicit InteractionDistribution(const TwoCommunityGraph& graph)
      : table_(build_weights(graph)) {}

  const std::vector<Edge>& edges() const { return edges_; }

  /// Selection probabilities aligned with edges(); they sum to one.
  const std::vector<double>& probabilities() const {
    return table_.probabilities();
  }

  Edge sample(Rng& rng) const { return edges_[table_.sample(rng)]; }

 private:
  std::vector<double> build_weights(const TwoCommunityGraph& graph) {
    const int n = graph.total_agents();
    std::vector<double> weights;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double a = graph.weight(i, j);
        if (a > 0.0) {
          edges_.push_back({i, j});
          weights.push_back(a);
        }
      }
    }
    return weights;
  }

  std::vector<Edge> edges_;
  AliasTable table_;
};

}  // namespace gossip
