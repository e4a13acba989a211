#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gossip/interaction.hpp"
#include "gossip/rng.hpp"
#include "gossip/trajectory.hpp"

namespace gossip {

/// Full state of the gossip process at one event tick. Regular states x
/// evolve; stubborn states zs never change.
struct GossipState {
  Eigen::VectorXd x;
  Eigen::VectorXd zs;
  long t = 0;
};

/// One gossip update: the regular members of the drawn pair move to the
/// midpoint of the pre-update values; everyone else is untouched.
inline void step(GossipState& state, const Edge& pair, int regular_count) {
  const auto value_of = [&](int agent) {
    return agent < regular_count ? state.x[agent]
                                 : state.zs[agent - regular_count];
  };
  const double midpoint = 0.5 * (value_of(pair.i) + value_of(pair.j));
  if (pair.i < regular_count) state.x[pair.i] = midpoint;
  if (pair.j < regular_count) state.x[pair.j] = midpoint;
  ++state.t;
}

namespace detail {

inline void check_dimensions(const TwoCommunityGraph& graph,
                             const Eigen::VectorXd& x0,
                             const Eigen::VectorXd& zs) {
  if (x0.size() != graph.regular_count())
    throw std::invalid_argument(
        "x0 has dimension " + std::to_string(x0.size()) + ", graph has " +
        std::to_string(graph.regular_count()) + " regular agents");
  if (zs.size() != graph.stubborn_count())
    throw std::invalid_argument(
        "zs has dimension " + std::to_string(zs.size()) + ", graph has " +
        std::to_string(graph.stubborn_count()) + " stubborn agents");
  const double cx = graph.state_bound();
  if ((x0.array().abs() > cx).any() || (zs.array().abs() > cx).any())
    throw std::invalid_argument("initial states must satisfy |value| <= c_x");
}

inline TrajectoryBundle run_stream(const TwoCommunityGraph& graph,
                                   const InteractionDistribution& dist,
                                   const Eigen::VectorXd& x0,
                                   const Eigen::VectorXd& zs,
                                   const RunConfig& cfg, Rng rng) {
  const long stride = cfg.effective_stride();
  TrajectoryBundle bundle;
  bundle.kind = TrajectoryKind::single_run;
  bundle.seed = cfg.seed;
  bundle.times = recording_times(cfg.horizon, stride);
  bundle.values.reserve(bundle.times.size());

  GossipState state{x0, zs, 0};
  std::size_t next_record = 0;
  for (long t = 0; t <= cfg.horizon; ++t) {
    if (next_record < bundle.times.size() && bundle.times[next_record] == t) {
      bundle.values.push_back(state.x);
      ++next_record;
    }
    if (t == cfg.horizon) break;
    step(state, dist.sample(rng), graph.regular_count());
  }
  return bundle;
}

}  // namespace detail

/// Runs the stochastic gossip process once. Deterministic given cfg.seed;
/// the edge stream is replicate stream 0, so a single run coincides with
/// Monte Carlo replicate 0 for the same seed.
inline TrajectoryBundle run(const TwoCommunityGraph& graph,
                            const Eigen::VectorXd& x0,
                            const Eigen::VectorXd& zs, const RunConfig& cfg) {
  cfg.validate();
  detail::check_dimensions(graph, x0, zs);
  const InteractionDistribution dist(graph);
  return detail::run_stream(graph, dist, x0, zs, cfg, Rng(cfg.seed, 0));
}

/// Monte Carlo estimate of the expected trajectory over cfg.replicates
/// independent runs. Replicate r draws from stream (seed, r); replicates
/// execute concurrently in batches, and the mean/stderr reduction always
/// folds in replicate order, so results do not depend on scheduling.
inline TrajectoryBundle monte_carlo_mean(const TwoCommunityGraph& graph,
                                         const Eigen::VectorXd& x0,
                                         const Eigen::VectorXd& zs,
                                         const RunConfig& cfg) {
  cfg.validate();
  detail::check_dimensions(graph, x0, zs);
  const InteractionDistribution dist(graph);
  const int replicates = cfg.replicates;
  const long stride = cfg.effective_stride();
  const std::vector<long> times = recording_times(cfg.horizon, stride);
  const int dim = graph.regular_count();

  // Welford accumulators per recorded entry.
  std::vector<Eigen::VectorXd> mean(times.size(), Eigen::VectorXd::Zero(dim));
  std::vector<Eigen::VectorXd> m2(times.size(), Eigen::VectorXd::Zero(dim));

  const int batch = std::max(1u, std::thread::hardware_concurrency());
  std::vector<TrajectoryBundle> results(batch);
  for (int first = 0; first < replicates; first += batch) {
    const int count = std::min(batch, replicates - first);
    std::vector<std::thread> workers;
    workers.reserve(count);
    for (int k = 0; k < count; ++k) {
      workers.emplace_back([&, k] {
        results[k] = detail::run_stream(graph, dist, x0, zs, cfg,
                                        Rng(cfg.seed, first + k));
      });
    }
    for (auto& w : workers) w.join();
    for (int k = 0; k < count; ++k) {
      const double r = first + k + 1;
      for (std::size_t row = 0; row < times.size(); ++row) {
        const Eigen::VectorXd delta = results[k].values[row] - mean[row];
        mean[row] += delta / r;
        m2[row] += delta.cwiseProduct(results[k].values[row] - mean[row]);
      }
    }
  }

  TrajectoryBundle bundle;
  bundle.kind = TrajectoryKind::mc_mean;
  bundle.seed = cfg.seed;
  bundle.replicates = replicates;
  bundle.times = times;
  bundle.values = std::move(mean);
  bundle.standard_errors.resize(times.size());
  for (std::size_t row = 0; row < times.size(); ++row) {
    if (replicates > 1) {
      bundle.standard_errors[row] =
          (m2[row] / (replicates - 1.0)).cwiseSqrt() / std::sqrt(replicates);
    } else {
      bundle.standard_errors[row] = Eigen::VectorXd::Zero(dim);
    }
  }
  return bundle;
}

}  // namespace gossip
