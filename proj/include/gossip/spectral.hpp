#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "gossip/graph.hpp"
#include "gossip/trajectory.hpp"

namespace gossip {

/// Expected one-step update of the regular states:
///   E{X(t+1)} = Qbar E{X(t)} + Rbar z^s,
/// with Qbar = I - L/(2 alpha) for the Laplacian-style block L of the full
/// weighted graph restricted to regular rows, and Rbar = M~/(2 alpha).
///
/// Qbar is rank-3-plus-identity under the two-community structure, so
/// products use an O(n) structured form; the dense matrix is materialized
/// only on demand for moderate sizes (debugging and residual checks).
class MeanDynamics {
 public:
  explicit MeanDynamics(const TwoCommunityGraph& graph) : graph_(graph) {
    const int dim = graph.regular_count();
    degrees_.resize(dim);
    for (int i = 0; i < dim; ++i) degrees_[i] = graph.regular_degree(i);
  }

  int dim() const { return graph_.regular_count(); }
  const TwoCommunityGraph& graph() const { return graph_; }

  /// y = Qbar x in O(n) using the community block structure.
  Eigen::VectorXd apply_qbar(const Eigen::VectorXd& x) const {
    const int dim = graph_.regular_count();
    if (x.size() != dim)
      throw std::invalid_argument("apply_qbar: dimension mismatch");
    const int m = graph_.community_size();
    const double ls = graph_.intra_weight();
    const double ld = graph_.inter_weight();
    const double sum1 = x.head(m).sum();
    const double sum2 = x.tail(m).sum();
    const double inv2a = 1.0 / (2.0 * graph_.alpha());

    Eigen::VectorXd y(dim);
    for (int i = 0; i < dim; ++i) {
      const bool first = i < m;
      const double own = first ? sum1 : sum2;
      const double other = first ? sum2 : sum1;
      const double row = ls * (own - x[i]) + ld * other;  // (A_rr x)_i
      y[i] = x[i] - inv2a * (degrees_[i] * x[i] - row);
    }
    return y;
  }

  /// Rbar z^s = M~ z^s / (2 alpha).
  Eigen::VectorXd rbar_times(const Eigen::VectorXd& zs) const {
    return graph_.stubborn_block_times(zs) / (2.0 * graph_.alpha());
  }

  Eigen::MatrixXd dense_qbar() const {
    const int dim = graph_.regular_count();
    check_dense(dim);
    const double inv2a = 1.0 / (2.0 * graph_.alpha());
    Eigen::MatrixXd q(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        q(i, j) = i == j ? 1.0 - degrees_[i] * inv2a
                         : graph_.weight(i, j) * inv2a;
      }
    }
    return q;
  }

  /// Dense Rbar; empty (dim x 0) when there are no stubborn agents.
  Eigen::MatrixXd dense_rbar() const {
    const int dim = graph_.regular_count();
    const int stubborn = graph_.stubborn_count();
    check_dense(dim);
    const double inv2a = 1.0 / (2.0 * graph_.alpha());
    Eigen::MatrixXd r(dim, stubborn);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < stubborn; ++j)
        r(i, j) = graph_.stubborn_weight(i, j) * inv2a;
    return r;
  }

 private:
  static void check_dense(int dim) {
    if (dim > 2000)
      throw std::invalid_argument(
          "dense materialization is limited to 2000 regular agents; use the "
          "structured products");
  }

  TwoCommunityGraph graph_;
  Eigen::VectorXd degrees_;
};

/// Eigenstructure of Qbar under the two-community structure: eigenvalue
/// 1 - lambda1 along the consensus direction eta, 1 - lambda2 along the
/// community-split direction xi, and 1 - lambda3 on their orthogonal
/// complement.
struct SpectralSummary {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  Eigen::VectorXd eta;
  Eigen::VectorXd xi;
};

inline SpectralSummary spectral_summary(const TwoCommunityGraph& graph) {
  const int dim = graph.regular_count();
  const int m = graph.community_size();
  const double two_alpha = 2.0 * graph.alpha();
  const double l_total = graph.stubborn_row_sum();

  SpectralSummary summary;
  summary.lambda1 = l_total / two_alpha;
  summary.lambda2 = (graph.inter_weight() * dim + l_total) / two_alpha;
  summary.lambda3 =
      ((graph.intra_weight() + graph.inter_weight()) * dim / 2.0 + l_total) /
      two_alpha;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  summary.eta = Eigen::VectorXd::Constant(dim, scale);
  summary.xi = Eigen::VectorXd::Constant(dim, scale);
  summary.xi.tail(m) *= -1.0;
  return summary;
}

/// Projections of the initial condition and the stubborn drift onto the
/// eta / xi directions.
struct SpectralProjections {
  double c_eta_x = 0.0;  // eta^T X(0)
  double c_xi_x = 0.0;   // xi^T X(0)
  double zeta1 = 0.0;    // eta^T M~ z^s / l^(s)
  double zeta2 = 0.0;    // xi^T M~ z^s / l^(s)
};

inline SpectralProjections projections(const SpectralSummary& summary,
                                       const TwoCommunityGraph& graph,
                                       const Eigen::VectorXd& x0,
                                       const Eigen::VectorXd& zs) {
  if (x0.size() != graph.regular_count())
    throw std::invalid_argument("projections: x0 dimension mismatch");
  SpectralProjections proj;
  proj.c_eta_x = summary.eta.dot(x0);
  proj.c_xi_x = summary.xi.dot(x0);
  const double l_total = graph.stubborn_row_sum();
  if (graph.stubborn_count() > 0 && l_total > 0.0) {
    const Eigen::VectorXd drift = graph.stubborn_block_times(zs);
    proj.zeta1 = summary.eta.dot(drift) / l_total;
    proj.zeta2 = summary.xi.dot(drift) / l_total;
  }
  return proj;
}

/// Exact expected trajectory by iterating x(t+1) = Qbar x(t) + Rbar z^s.
/// This is the ground-truth oracle for the closed form below.
inline TrajectoryBundle expected_state_recursion(const MeanDynamics& dynamics,
                                                 const Eigen::VectorXd& x0,
                                                 const Eigen::VectorXd& zs,
                                                 long horizon,
                                                 long record_every = 1) {
  if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
  if (x0.size() != dynamics.dim())
    throw std::invalid_argument("x0 dimension mismatch");
  const Eigen::VectorXd drift = dynamics.rbar_times(zs);

  TrajectoryBundle bundle;
  bundle.kind = TrajectoryKind::exact_expectation;
  bundle.times = recording_times(horizon, record_every);
  bundle.values.reserve(bundle.times.size());

  Eigen::VectorXd x = x0;
  std::size_t next_record = 0;
  for (long t = 0; t <= horizon; ++t) {
    if (next_record < bundle.times.size() && bundle.times[next_record] == t) {
      bundle.values.push_back(x);
      ++next_record;
    }
    if (t == horizon) break;
    x = dynamics.apply_qbar(x) + drift;
  }
  return bundle;
}

namespace detail {

/// Partial geometric sum (1 - (1-lambda)^t) / lambda, continued as t at
/// lambda = 0 (no stubborn agents).
inline double geometric_factor(double lambda, long t) {
  if (lambda == 0.0) return static_cast<double>(t);
  return (1.0 - std::pow(1.0 - lambda, static_cast<double>(t))) / lambda;
}

}  // namespace detail

/// Expected state at time t from the three-term spectral form. The
/// lambda3 eigenspace enters only through the orthogonal projector
/// P = I - eta eta^T - xi xi^T; no eigenbasis is materialized.
inline Eigen::VectorXd expected_state_closed_form(
    const SpectralSummary& summary, const SpectralProjections& proj,
    const MeanDynamics& dynamics, const Eigen::VectorXd& x0,
    const Eigen::VectorXd& zs, long t) {
  if (t < 0) throw std::invalid_argument("time must be nonnegative");
  const Eigen::VectorXd drift = dynamics.rbar_times(zs);  // Rbar z^s
  const double drift_eta = summary.eta.dot(drift);
  const double drift_xi = summary.xi.dot(drift);

  const double decay1 = std::pow(1.0 - summary.lambda1, static_cast<double>(t));
  const double decay2 = std::pow(1.0 - summary.lambda2, static_cast<double>(t));
  const double decay3 = std::pow(1.0 - summary.lambda3, static_cast<double>(t));

  const double coef_eta =
      decay1 * proj.c_eta_x + detail::geometric_factor(summary.lambda1, t) * drift_eta;
  const double coef_xi =
      decay2 * proj.c_xi_x + detail::geometric_factor(summary.lambda2, t) * drift_xi;

  const Eigen::VectorXd x0_rest =
      x0 - proj.c_eta_x * summary.eta - proj.c_xi_x * summary.xi;
  const Eigen::VectorXd drift_rest =
      drift - drift_eta * summary.eta - drift_xi * summary.xi;

  return coef_eta * summary.eta + coef_xi * summary.xi + decay3 * x0_rest +
         detail::geometric_factor(summary.lambda3, t) * drift_rest;
}

}  // namespace gossip
