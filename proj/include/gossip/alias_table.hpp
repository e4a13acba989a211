#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "gossip/rng.hpp"

namespace gossip {

/// Walker alias table for O(1) sampling from a fixed discrete distribution.
class AliasTable {
 public:
  /// Builds the table from unnormalized nonnegative weights.
  explicit AliasTable(const std::vector<double>& weights) {
    const std::size_t n = weights.size();
    if (n == 0) throw std::invalid_argument("AliasTable: empty weight vector");
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw std::invalid_argument("AliasTable: negative weight");
      total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("AliasTable: zero total weight");

    probabilities_.resize(n);
    for (std::size_t i = 0; i < n; ++i) probabilities_[i] = weights[i] / total;

    threshold_.resize(n);
    alias_.assign(n, 0);
    std::vector<std::size_t> small, large;
    small.reserve(n);
    large.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      threshold_[i] = probabilities_[i] * static_cast<double>(n);
      (threshold_[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
      const std::size_t s = small.back();
      const std::size_t l = large.back();
      small.pop_back();
      large.pop_back();
      alias_[s] = l;
      threshold_[l] -= 1.0 - threshold_[s];
      (threshold_[l] < 1.0 ? small : large).push_back(l);
    }
    // Leftovers are numerically ~1; clamp so they always draw themselves.
    for (std::size_t s : small) threshold_[s] = 1.0;
    for (std::size_t l : large) threshold_[l] = 1.0;
  }

  std::size_t sample(Rng& rng) const {
    const std::size_t slot = static_cast<std::size_t>(rng.below(threshold_.size()));
    return rng.uniform01() < threshold_[slot] ? slot : alias_[slot];
  }

  std::size_t size() const { return threshold_.size(); }

  /// Normalized probabilities, aligned with the input weights.
  const std::vector<double>& probabilities() const { return probabilities_; }

 private:
  std::vector<double> probabilities_;
  std::vector<double> threshold_;
  std::vector<std::size_t> alias_;
};

}  // namespace gossip
