// Acceptance suite: one check per release criterion, each printing a single
// [PASS]/[FAIL] line. Run with no arguments for the full suite or with a list
// of criterion numbers (1-9).

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gossip/config.hpp"
#include "gossip/graph.hpp"
#include "gossip/interaction.hpp"
#include "gossip/rng.hpp"
#include "gossip/simulation.hpp"
#include "gossip/spectral.hpp"
#include "gossip/transient.hpp"

using namespace gossip;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", id,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

GraphParams desk_params() {
  GraphParams params;
  params.n = 10;
  params.regular_fraction = 0.8;
  params.intra_weight = 0.5;
  params.inter_weight = 0.1;
  params.stubborn = UniformStubborn{0.2};
  return params;
}

GraphParams scaled_n100_params() {
  return scaling_regime(100, 0.9, 3.0, 1.0, 1.0, 1.0,
                        StubbornConvention::row_sum);
}

struct PresetData {
  TwoCommunityGraph graph;
  SpectralSummary summary;
  SpectralProjections proj;
  Eigen::VectorXd x0;
  Eigen::VectorXd zs;
};

PresetData resolve_preset(const std::string& name) {
  const ExperimentConfig config = preset_config(name);
  TwoCommunityGraph graph = build_graph(config.graph);
  Eigen::VectorXd x0 = sample_x0(config.x0, graph, config.run.seed);
  Eigen::VectorXd zs = sample_zs(config.zs, graph, config.run.seed);
  SpectralSummary summary = spectral_summary(graph);
  SpectralProjections proj = projections(summary, graph, x0, zs);
  return {std::move(graph), std::move(summary), proj, std::move(x0),
          std::move(zs)};
}

double eigen_residuals(const TwoCommunityGraph& graph, Rng& rng) {
  const SpectralSummary summary = spectral_summary(graph);
  const MeanDynamics dynamics(graph);
  double worst =
      (dynamics.apply_qbar(summary.eta) - (1.0 - summary.lambda1) * summary.eta)
          .norm();
  worst = std::max(
      worst,
      (dynamics.apply_qbar(summary.xi) - (1.0 - summary.lambda2) * summary.xi)
          .norm());
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd w(graph.regular_count());
    for (int i = 0; i < w.size(); ++i) w[i] = rng.uniform(-1.0, 1.0);
    w -= summary.eta.dot(w) * summary.eta;
    w -= summary.xi.dot(w) * summary.xi;
    w.normalize();
    worst = std::max(
        worst,
        (dynamics.apply_qbar(w) - (1.0 - summary.lambda3) * w).norm());
  }
  return worst;
}

// 1. Eigen-structure residuals at n = 10, 100, 500.
void criterion1() {
  Rng rng(1001, 0);
  double worst = 0.0;
  worst = std::max(worst, eigen_residuals(build_graph(desk_params()), rng));
  worst = std::max(worst, eigen_residuals(build_graph(scaled_n100_params()), rng));
  worst = std::max(
      worst,
      eigen_residuals(build_graph(preset_config("fig2_expected_local").graph),
                      rng));
  std::ostringstream detail;
  detail << "eigen-structure residuals at n=10,100,500: max " << worst
         << " (limit 1e-10)";
  report(1, worst <= 1e-10, detail.str());
}

// 2. Closed form vs recursion on the benchmark graphs, all t <= 5000.
void criterion2() {
  double worst = 0.0;
  for (const char* name : {"fig2_expected_local", "fig3_expected_global"}) {
    const PresetData data = resolve_preset(name);
    const MeanDynamics dynamics(data.graph);
    const auto recursion =
        expected_state_recursion(dynamics, data.x0, data.zs, 5000);
    for (std::size_t r = 0; r < recursion.times.size(); ++r) {
      const Eigen::VectorXd closed = expected_state_closed_form(
          data.summary, data.proj, dynamics, data.x0, data.zs,
          recursion.times[r]);
      worst = std::max(worst,
                       (closed - recursion.values[r]).cwiseAbs().maxCoeff());
    }
  }
  std::ostringstream detail;
  detail << "closed form vs recursion, t<=5000: max |diff| " << worst
         << " (limit 1e-8)";
  report(2, worst <= 1e-8, detail.str());
}

// 3. Sign agreement over (500, 3107) on the local benchmark.
void criterion3() {
  const PresetData data = resolve_preset("fig2_expected_local");
  const MeanDynamics dynamics(data.graph);
  const auto exact =
      expected_state_recursion(dynamics, data.x0, data.zs, 3107);
  const int sign = data.proj.c_xi_x > 0.0 ? 1 : -1;
  const auto check =
      check_signs(exact, data.graph.community_size(), sign, 500.0, 3107.0);
  const long expected_entries = (3106 - 501 + 1) * 450L;
  const bool pass = check.pass && check.indeterminate == 0 &&
                    check.checked_entries == expected_entries &&
                    check.agreements == expected_entries;
  std::ostringstream detail;
  detail << "sign agreement on (500,3107): " << check.agreements << "/"
         << expected_entries << " agree, " << check.disagreements
         << " disagree, " << check.indeterminate << " indeterminate";
  report(3, pass, detail.str());
}

// 4. Local consensus envelope on the local benchmark, all t <= 5000.
void criterion4() {
  const PresetData data = resolve_preset("fig2_expected_local");
  const MeanDynamics dynamics(data.graph);
  const auto exact =
      expected_state_recursion(dynamics, data.x0, data.zs, 5000);
  const auto bound = make_local_bound(data.summary, data.graph, data.x0);
  const auto check = check_bound(bound, exact);
  std::ostringstream detail;
  detail << "local envelope, t<=5000: " << check.violations
         << " violations, max excess " << check.max_excess;
  report(4, check.pass && check.times_checked == 5001, detail.str());
}

// 5. Global consensus envelope on the global benchmark, all t <= 5000.
void criterion5() {
  const PresetData data = resolve_preset("fig3_expected_global");
  const MeanDynamics dynamics(data.graph);
  const auto exact =
      expected_state_recursion(dynamics, data.x0, data.zs, 5000);
  const auto bound = make_global_bound(data.summary, data.graph, data.x0);
  const auto check = check_bound(bound, exact);
  std::ostringstream detail;
  detail << "global envelope, t<=5000: " << check.violations
         << " violations, max excess " << check.max_excess;
  report(5, check.pass && check.times_checked == 5001, detail.str());
}

// 6. Monte Carlo consistency with the exact expectation at n = 100.
void criterion6() {
  const GraphParams params = scaled_n100_params();
  const auto graph = build_graph(params);
  const std::uint64_t seed = 606;
  X0Spec x0_spec;  // community-split uniform sample
  ZsSpec zs_spec;
  const Eigen::VectorXd x0 = sample_x0(x0_spec, graph, seed);
  const Eigen::VectorXd zs = sample_zs(zs_spec, graph, seed);

  RunConfig cfg;
  cfg.horizon = 1000;
  cfg.record_every = 100;
  cfg.seed = seed;
  cfg.replicates = 1000;
  const auto mc = monte_carlo_mean(graph, x0, zs, cfg);
  const auto exact = expected_state_recursion(MeanDynamics(graph), x0, zs,
                                              cfg.horizon, 100);

  bool pass = true;
  std::ostringstream detail;
  detail << "mc (M=1000) vs exact at t=100,500,1000:";
  for (long t : {100L, 500L, 1000L}) {
    const long row = mc.index_of(t);
    int within = 0;
    for (int i = 0; i < 90; ++i) {
      const double gap = std::abs(mc.values[row][i] - exact.values[row][i]);
      if (gap <= 5.0 * mc.standard_errors[row][i]) ++within;
    }
    const double fraction = within / 90.0;
    detail << " " << within << "/90";
    if (fraction < 0.99) pass = false;
  }
  detail << " within 5 stderr (need >=99%)";
  report(6, pass, detail.str());
}

// 7. Total edge weight arithmetic and the benchmark horizon endpoint.
void criterion7() {
  Rng rng(707, 0);
  double worst_rel = 0.0;
  int draws = 0;
  while (draws < 50) {
    GraphParams params;
    params.n = 4 + 2 * static_cast<int>(rng.below(200));
    const int stubborn = static_cast<int>(rng.below(1 + params.n / 4));
    const int regular = params.n - stubborn;
    if (regular < 2 || regular % 2 != 0) continue;
    params.regular_fraction = static_cast<double>(regular) / params.n;
    params.intra_weight = rng.uniform(0.01, 0.99);
    params.inter_weight = rng.uniform(0.01, 0.99);
    params.stubborn =
        UniformStubborn{stubborn > 0 ? rng.uniform(0.05, 3.0) : 0.0};
    const auto graph = build_graph(params);
    const double closed = alpha_closed_form(params);
    worst_rel = std::max(worst_rel,
                         std::abs(graph.alpha() - closed) / std::abs(closed));
    ++draws;
  }
  const long endpoint = reference_interval(500).second;
  const bool pass = worst_rel <= 1e-12 && endpoint == 3107;
  std::ostringstream detail;
  detail << "alpha direct-vs-closed-form rel err " << worst_rel
         << " over 50 draws (limit 1e-12); round(500 ln 500) = " << endpoint;
  report(7, pass, detail.str());
}

// 8. Per-step simulation invariants over 100 seeded runs at n = 100.
void criterion8() {
  const auto graph = build_graph(scaled_n100_params());
  const InteractionDistribution dist(graph);
  const double cx = graph.state_bound();
  const int regular = graph.regular_count();

  long range_violations = 0;
  long locality_violations = 0;
  double worst_sum_drift = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Eigen::VectorXd x0 = sample_x0(X0Spec{}, graph, seed);
    const Eigen::VectorXd zs = sample_zs(ZsSpec{}, graph, seed);
    GossipState state{x0, zs, 0};
    Rng rng(seed, 0);
    for (long t = 0; t < 1000; ++t) {
      const Eigen::VectorXd before = state.x;
      const Edge edge = dist.sample(rng);
      const bool regular_pair = edge.i < regular && edge.j < regular;
      const double pair_before =
          (edge.i < regular ? before[edge.i] : 0.0) +
          (edge.j < regular ? before[edge.j] : 0.0);
      step(state, edge, regular);

      if (state.x.cwiseAbs().maxCoeff() > cx) ++range_violations;
      int changed = 0;
      for (int i = 0; i < regular; ++i)
        if (state.x[i] != before[i]) ++changed;
      if (changed > 2) ++locality_violations;
      if (regular_pair) {
        const double pair_after = state.x[edge.i] + state.x[edge.j];
        worst_sum_drift =
            std::max(worst_sum_drift, std::abs(pair_after - pair_before));
      }
    }
  }
  const bool pass = range_violations == 0 && locality_violations == 0 &&
                    worst_sum_drift <= 1e-12;
  std::ostringstream detail;
  detail << "100 runs x 1000 steps: " << range_violations
         << " range violations, " << locality_violations
         << " locality violations, regular-pair sum drift "
         << worst_sum_drift;
  report(8, pass, detail.str());
}

// 9. Two-point scaling check: the in-window deviation from the community
// averages shrinks from n = 100 to n = 500 in the local benchmark regime.
void criterion9() {
  auto max_window_deviation = [](int n) {
    const GraphParams params =
        scaling_regime(n, 0.9, 3.0, 1.0, 1.0, 1.0, StubbornConvention::per_edge);
    const auto graph = build_graph(params);
    const Eigen::VectorXd x0 = sample_x0(X0Spec{}, graph, kPresetSeedFig2);
    const Eigen::VectorXd zs = sample_zs(ZsSpec{}, graph, kPresetSeedFig2);
    const auto interval = reference_interval(n);
    const auto exact = expected_state_recursion(MeanDynamics(graph), x0, zs,
                                                interval.second);
    const int m = graph.community_size();
    Eigen::VectorXd reference(graph.regular_count());
    reference.head(m).setConstant(x0.head(m).mean());
    reference.tail(m).setConstant(x0.tail(m).mean());
    double worst = 0.0;
    for (long t = interval.first + 1; t < interval.second; ++t)
      worst = std::max(worst, (exact.values[exact.index_of(t)] - reference)
                                  .cwiseAbs()
                                  .maxCoeff());
    return worst;
  };
  const double at_100 = max_window_deviation(100);
  const double at_500 = max_window_deviation(500);
  std::ostringstream detail;
  detail << "max in-window deviation from community averages: " << at_100
         << " at n=100 vs " << at_500 << " at n=500 (must shrink)";
  report(9, at_500 < at_100, detail.str());
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int a = 1; a < argc; ++a) {
    const int id = std::atoi(argv[a]);
    if (id < 1 || id > 9) {
      std::fprintf(stderr, "usage: %s [criterion 1-9]...\n", argv[0]);
      return 2;
    }
    selected.insert(id);
  }
  auto wants = [&](int id) { return selected.empty() || selected.count(id); };

  if (wants(1)) criterion1();
  if (wants(2)) criterion2();
  if (wants(3)) criterion3();
  if (wants(4)) criterion4();
  if (wants(5)) criterion5();
  if (wants(6)) criterion6();
  if (wants(7)) criterion7();
  if (wants(8)) criterion8();
  if (wants(9)) criterion9();
  return failures;
}
