#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gossip/graph.hpp"
#include "gossip/spectral.hpp"
#include "gossip/trajectory.hpp"

namespace gossip {

constexpr double kIndeterminateTol = 1e-12;

/// The transient interval (t_lower, t_upper) on which every expected regular
/// state has the sign of its community: sgn(c_xi_x) on the first community,
/// the opposite on the second. Requires intra weights larger than inter
/// weights. All logarithms are natural.
struct SignWindow {
  double t_lower = std::numeric_limits<double>::infinity();
  double t_upper = std::numeric_limits<double>::infinity();
  /// The four candidate upper-bound terms (initial-average, stubborn
  /// consensus drift, stubborn split drift, stubborn tail), min-reduced
  /// into t_upper. Degenerate log arguments give +infinity.
  std::array<double, 4> upper_terms{};
  bool nonempty = false;
  int community_size = 0;
  int sign_first_community = 0;  // sgn(c_xi_x)

  int predicted_sign(int agent) const {
    return agent < community_size ? sign_first_community
                                  : -sign_first_community;
  }
};

inline SignWindow sign_window(const SpectralSummary& summary,
                              const SpectralProjections& proj,
                              const TwoCommunityGraph& graph) {
  if (graph.intra_weight() <= graph.inter_weight())
    throw std::invalid_argument(
        "sign window requires intra-community weight > inter-community weight");

  const double inf = std::numeric_limits<double>::infinity();
  const int dim = graph.regular_count();
  const double cx = graph.state_bound();
  const double root_rn = std::sqrt(static_cast<double>(dim));
  const double c_xi = std::abs(proj.c_xi_x);
  const double c_eta = std::abs(proj.c_eta_x);
  const double z1 = std::abs(proj.zeta1);
  const double z2 = std::abs(proj.zeta2);
  const double l_total = graph.stubborn_row_sum();
  const double ld_rn = graph.inter_weight() * dim;
  const double ls_ld_half = (graph.intra_weight() + graph.inter_weight()) * dim / 2.0;

  SignWindow window;
  window.community_size = graph.community_size();
  window.sign_first_community =
      proj.c_xi_x > 0.0 ? 1 : (proj.c_xi_x < 0.0 ? -1 : 0);
  if (c_xi == 0.0) return window;  // empty: t_lower stays +infinity

  const double log_23 = std::log((1.0 - summary.lambda2) / (1.0 - summary.lambda3));
  const double log_12 = std::log((1.0 - summary.lambda1) / (1.0 - summary.lambda2));
  const double log_2 = std::log(1.0 / (1.0 - summary.lambda2));

  window.t_lower = std::log(15.0 * cx * root_rn / c_xi) / log_23;
  window.upper_terms[0] =
      c_eta == 0.0 ? inf : std::log(c_xi / (5.0 * c_eta)) / log_12;
  window.upper_terms[1] = z1 == 0.0 ? inf : std::log(c_xi / (5.0 * z1)) / log_2;
  window.upper_terms[2] =
      (z2 == 0.0 || l_total == 0.0)
          ? inf
          : std::log((ld_rn + l_total) * c_xi / (5.0 * l_total * z2) + 1.0) / log_2;
  window.upper_terms[3] =
      l_total == 0.0
          ? inf
          : std::log((ls_ld_half + l_total) * c_xi /
                     (15.0 * l_total * cx * root_rn)) /
                log_2;
  window.t_upper = *std::min_element(window.upper_terms.begin(),
                                     window.upper_terms.end());
  window.nonempty = window.t_lower < window.t_upper;
  return window;
}

struct SignCheckRow {
  long t = 0;
  int agreements = 0;
  int disagreements = 0;
  int indeterminate = 0;
};

struct SignCheckReport {
  double t_lower = 0.0;
  double t_upper = 0.0;
  long checked_entries = 0;
  long agreements = 0;
  long disagreements = 0;
  long indeterminate = 0;
  bool pass = false;  // every determinate entry agrees and none disagree
  std::vector<SignCheckRow> rows;
  std::vector<std::pair<long, int>> sample_violations;  // (t, agent), first few
};

/// Checks sgn(x_i(t)) against the community prediction for every integer t
/// strictly inside (t_lower, t_upper). The trajectory must contain each such
/// integer. Entries with |x_i(t)| < 1e-12 count as indeterminate, not pass.
inline SignCheckReport check_signs(const TrajectoryBundle& trajectory,
                                   int community_size, int sign_first_community,
                                   double t_lower, double t_upper) {
  SignCheckReport report;
  report.t_lower = t_lower;
  report.t_upper = t_upper;
  if (!(t_lower < t_upper)) {
    report.pass = true;  // vacuous: empty window
    return report;
  }
  if (!std::isfinite(t_upper))
    throw std::invalid_argument("cannot scan an unbounded sign window");
  const long first = static_cast<long>(std::floor(t_lower)) + 1;
  const long last = static_cast<long>(std::ceil(t_upper)) - 1;
  if (trajectory.times.empty() || trajectory.times.back() < last)
    throw std::invalid_argument(
        "trajectory horizon " +
        std::to_string(trajectory.times.empty() ? -1 : trajectory.times.back()) +
        " does not cover the sign window up to t=" + std::to_string(last));

  for (long t = first; t <= last; ++t) {
    const long row_index = trajectory.index_of(t);
    if (row_index < 0)
      throw std::invalid_argument("trajectory is missing t=" + std::to_string(t) +
                                  "; record at stride 1 over the window");
    const Eigen::VectorXd& x = trajectory.values[row_index];
    SignCheckRow row;
    row.t = t;
    for (int i = 0; i < x.size(); ++i) {
      const int predicted =
          i < community_size ? sign_first_community : -sign_first_community;
      if (std::abs(x[i]) < kIndeterminateTol) {
        ++row.indeterminate;
      } else if ((x[i] > 0.0 ? 1 : -1) == predicted) {
        ++row.agreements;
      } else {
        ++row.disagreements;
        if (report.sample_violations.size() < 10)
          report.sample_violations.emplace_back(t, i);
      }
    }
    report.agreements += row.agreements;
    report.disagreements += row.disagreements;
    report.indeterminate += row.indeterminate;
    report.checked_entries += x.size();
    report.rows.push_back(row);
  }
  report.pass = report.disagreements == 0;
  return report;
}

/// Sign check over the window's own interval; vacuous pass when empty.
inline SignCheckReport check_sign_theorem(const SignWindow& window,
                                          const TrajectoryBundle& trajectory) {
  if (!window.nonempty) {
    SignCheckReport report;
    report.t_lower = window.t_lower;
    report.t_upper = window.t_upper;
    report.pass = true;
    return report;
  }
  return check_signs(trajectory, window.community_size,
                     window.sign_first_community, window.t_lower,
                     window.t_upper);
}

/// Longest run of consecutive recorded times on which all agents carry their
/// predicted sign; the empirical counterpart of the conservative window.
inline std::optional<std::pair<long, long>> empirical_sign_window(
    const TrajectoryBundle& trajectory, int community_size,
    int sign_first_community) {
  std::optional<std::pair<long, long>> best;
  std::optional<long> run_start;
  long previous = 0;
  auto close_run = [&](long end) {
    if (!run_start) return;
    if (!best || end - *run_start > best->second - best->first)
      best = std::make_pair(*run_start, end);
    run_start.reset();
  };
  for (std::size_t r = 0; r < trajectory.times.size(); ++r) {
    const Eigen::VectorXd& x = trajectory.values[r];
    bool all_match = true;
    for (int i = 0; i < x.size() && all_match; ++i) {
      const int predicted =
          i < community_size ? sign_first_community : -sign_first_community;
      all_match = std::abs(x[i]) >= kIndeterminateTol &&
                  (x[i] > 0.0 ? 1 : -1) == predicted;
    }
    if (all_match) {
      if (!run_start) run_start = trajectory.times[r];
    } else {
      close_run(previous);
    }
    previous = trajectory.times[r];
  }
  close_run(previous);
  return best;
}

enum class BoundMode { local, global };

/// Finite-n envelope of the transient consensus theorem: per-agent distance
/// to the community initial average (local) or the global initial average
/// (global), bounded by an explicit function of t and the eigenvalues.
class ConsensusBound {
 public:
  ConsensusBound(BoundMode mode, const SpectralSummary& summary, double cx,
                 Eigen::VectorXd reference)
      : mode_(mode),
        lambda1_(summary.lambda1),
        lambda2_(summary.lambda2),
        lambda3_(summary.lambda3),
        cx_(cx),
        reference_(std::move(reference)) {}

  BoundMode mode() const { return mode_; }
  const Eigen::VectorXd& reference() const { return reference_; }

  double bound_at(long t) const {
    const double td = static_cast<double>(t);
    const double tail = std::pow(1.0 - lambda3_, td);
    if (mode_ == BoundMode::local)
      return ((4.0 * lambda1_ + lambda2_) * td + tail) * cx_;
    return (4.0 * lambda1_ * td + 2.0 * tail) * cx_;
  }

 private:
  BoundMode mode_;
  double lambda1_, lambda2_, lambda3_, cx_;
  Eigen::VectorXd reference_;
};

inline ConsensusBound make_local_bound(const SpectralSummary& summary,
                                       const TwoCommunityGraph& graph,
                                       const Eigen::VectorXd& x0) {
  if (graph.intra_weight() <= graph.inter_weight())
    throw std::invalid_argument(
        "local consensus bound requires intra weight > inter weight");
  const int m = graph.community_size();
  const double avg1 = x0.head(m).mean();
  const double avg2 = x0.tail(m).mean();
  Eigen::VectorXd reference(2 * m);
  reference.head(m).setConstant(avg1);
  reference.tail(m).setConstant(avg2);
  return ConsensusBound(BoundMode::local, summary, graph.state_bound(),
                        std::move(reference));
}

inline ConsensusBound make_global_bound(const SpectralSummary& summary,
                                        const TwoCommunityGraph& graph,
                                        const Eigen::VectorXd& x0) {
  if (graph.intra_weight() > graph.inter_weight())
    throw std::invalid_argument(
        "global consensus bound requires intra weight <= inter weight");
  return ConsensusBound(
      BoundMode::global, summary, graph.state_bound(),
      Eigen::VectorXd::Constant(x0.size(), x0.mean()));
}

struct BoundCheckRow {
  long t = 0;
  double max_deviation = 0.0;
  double envelope = 0.0;
  bool pass = true;
};

struct BoundCheckReport {
  long times_checked = 0;
  long violations = 0;
  /// max over checked entries of (deviation - envelope); negative when the
  /// envelope holds everywhere.
  double max_excess = -std::numeric_limits<double>::infinity();
  bool pass = false;
  std::vector<BoundCheckRow> rows;
};

/// Scans every recorded time of the trajectory against the envelope, with a
/// 1e-10 numerical slack.
inline BoundCheckReport check_bound(const ConsensusBound& bound,
                                    const TrajectoryBundle& trajectory,
                                    double slack = 1e-10) {
  BoundCheckReport report;
  for (std::size_t r = 0; r < trajectory.times.size(); ++r) {
    BoundCheckRow row;
    row.t = trajectory.times[r];
    row.envelope = bound.bound_at(row.t);
    row.max_deviation =
        (trajectory.values[r] - bound.reference()).cwiseAbs().maxCoeff();
    row.pass = row.max_deviation <= row.envelope + slack;
    report.max_excess = std::max(report.max_excess, row.max_deviation - row.envelope);
    if (!row.pass) ++report.violations;
    ++report.times_checked;
    report.rows.push_back(row);
  }
  report.pass = report.violations == 0;
  return report;
}

enum class StubbornConvention {
  row_sum,   // l^(s) = (log n)^beta3
  per_edge,  // every regular-stubborn edge weighs (log n)^beta3 / n
};

/// Graph parameters of the benchmark scaling regime:
/// l_s = (log n)^beta1 / n, l_d = (log n)^beta2 / n, and stubborn influence
/// (log n)^beta3 interpreted per the chosen convention.
inline GraphParams scaling_regime(int n, double r0, double beta1, double beta2,
                                  double beta3, double cx,
                                  StubbornConvention convention =
                                      StubbornConvention::row_sum) {
  if (n < 2) throw std::invalid_argument("need at least 2 agents");
  const double log_n = std::log(static_cast<double>(n));
  GraphParams params;
  params.n = n;
  params.regular_fraction = r0;
  params.state_bound = cx;
  params.intra_weight = std::pow(log_n, beta1) / n;
  params.inter_weight = std::pow(log_n, beta2) / n;
  const double regular = std::round(r0 * n);
  const double stubborn = n - regular;
  const double influence = std::pow(log_n, beta3);
  params.stubborn = UniformStubborn{
      convention == StubbornConvention::row_sum ? influence
                                                : stubborn * influence / n};
  return params;
}

/// The reference check interval (n, [n log n]) used by the benchmark
/// experiments; [.] rounds to the nearest integer.
inline std::pair<long, long> reference_interval(int n) {
  return {static_cast<long>(n),
          std::llround(n * std::log(static_cast<double>(n)))};
}

}  // namespace gossip
