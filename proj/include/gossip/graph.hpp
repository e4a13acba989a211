#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

namespace gossip {

enum class Community { first, second, stubborn };

/// Stubborn influence split uniformly: every regular-stubborn edge carries
/// total / (number of stubborn agents).
struct UniformStubborn {
  double total = 0.0;  // common row sum l^(s)
};

/// One weight per (regular, stubborn) pair; rows must share a common sum.
struct ExplicitStubborn {
  Eigen::MatrixXd weights;  // regular_count x stubborn_count
};

using StubbornWeights = std::variant<UniformStubborn, ExplicitStubborn>;

/// Parameters of the two-community weighted complete graph.
///
/// Regular agents split into two equal communities. Edges inside a community
/// have weight intra_weight, edges across have inter_weight, and each regular
/// agent is tied to the stubborn agents by weights with a common row sum.
/// Stubborn agents have no edges among themselves.
struct GraphParams {
  int n = 0;                     // total agent count
  double regular_fraction = 1.0; // r0 in (0, 1]
  double intra_weight = 0.0;     // l_s^(r) in (0, 1)
  double inter_weight = 0.0;     // l_d^(r) in (0, 1)
  StubbornWeights stubborn = UniformStubborn{0.0};
  double state_bound = 1.0;      // c_x > 0
};

namespace detail {

inline int checked_int(double value, const char* what) {
  const double r = std::round(value);
  if (std::abs(value - r) > 1e-6)
    throw std::invalid_argument(std::string(what) + " must be an integer, got " +
                                std::to_string(value));
  return static_cast<int>(r);
}

}  // namespace detail

/// Returns the common stubborn row sum l^(s). Explicit matrices must have
/// every row sum within 1e-9 of the first; offending rows are named.
inline double verify_stubborn_row_sums(const GraphParams& params) {
  const int regular = detail::checked_int(params.regular_fraction * params.n,
                                          "regular agent count r0*n");
  const int stubborn = params.n - regular;
  if (stubborn == 0) return 0.0;
  if (const auto* uniform = std::get_if<UniformStubborn>(&params.stubborn))
    return uniform->total;

  const auto& m = std::get<ExplicitStubborn>(params.stubborn).weights;
  if (m.rows() != regular || m.cols() != stubborn)
    throw std::invalid_argument(
        "stubborn weight matrix must be " + std::to_string(regular) + "x" +
        std::to_string(stubborn) + ", got " + std::to_string(m.rows()) + "x" +
        std::to_string(m.cols()));
  if ((m.array() < 0.0).any())
    throw std::invalid_argument("stubborn weights must be nonnegative");
  const double reference = m.row(0).sum();
  for (Eigen::Index i = 1; i < m.rows(); ++i) {
    const double row_sum = m.row(i).sum();
    if (std::abs(row_sum - reference) > 1e-9)
      throw std::invalid_argument(
          "stubborn row sums must be equal: row " + std::to_string(i + 1) +
          " sums to " + std::to_string(row_sum) + ", row 1 sums to " +
          std::to_string(reference));
  }
  return reference;
}

/// The weighted two-community graph. Adjacency is never stored densely;
/// a(i,j) is derived from community labels plus the stubborn weight block.
/// Immutable after construction and safe to share across threads.
class TwoCommunityGraph {
 public:
  static TwoCommunityGraph build(const GraphParams& params) {
    if (params.n < 2) throw std::invalid_argument("need at least 2 agents");
    if (params.regular_fraction <= 0.0 || params.regular_fraction > 1.0)
      throw std::invalid_argument("regular fraction must be in (0, 1]");
    const int regular = detail::checked_int(
        params.regular_fraction * params.n, "regular agent count r0*n");
    if (regular <= 0 || regular % 2 != 0)
      throw std::invalid_argument("regular agent count r0*n must be a positive "
                                  "even integer, got " + std::to_string(regular));
    if (params.intra_weight <= 0.0 || params.intra_weight >= 1.0)
      throw std::invalid_argument("intra-community weight must be in (0, 1)");
    if (params.inter_weight <= 0.0 || params.inter_weight >= 1.0)
      throw std::invalid_argument("inter-community weight must be in (0, 1)");
    if (params.state_bound <= 0.0)
      throw std::invalid_argument("state bound c_x must be positive");

    const int stubborn = params.n - regular;
    if (stubborn > 0) {
      if (const auto* uniform = std::get_if<UniformStubborn>(&params.stubborn)) {
        if (uniform->total <= 0.0)
          throw std::invalid_argument("uniform stubborn row sum must be positive");
      }
    }
    const double row_sum = verify_stubborn_row_sums(params);
    return TwoCommunityGraph(params, regular, stubborn, row_sum);
  }

  int total_agents() const { return params_.n; }
  int regular_count() const { return regular_; }
  int stubborn_count() const { return stubborn_; }
  int community_size() const { return regular_ / 2; }
  double state_bound() const { return params_.state_bound; }
  double intra_weight() const { return params_.intra_weight; }
  double inter_weight() const { return params_.inter_weight; }
  const GraphParams& params() const { return params_; }

  /// Common stubborn row sum l^(s) (0 when there are no stubborn agents).
  double stubborn_row_sum() const { return stubborn_row_sum_; }

  bool uniform_stubborn() const {
    return std::holds_alternative<UniformStubborn>(params_.stubborn);
  }

  Community community_of(int agent) const {
    check_agent(agent);
    if (agent < community_size()) return Community::first;
    if (agent < regular_) return Community::second;
    return Community::stubborn;
  }

  /// Edge weight a(i, j); agents are 0-based over all of V.
  double weight(int i, int j) const {
    check_agent(i);
    check_agent(j);
    if (i == j) return 0.0;
    const bool i_regular = i < regular_;
    const bool j_regular = j < regular_;
    if (i_regular && j_regular) {
      const bool same = (i < community_size()) == (j < community_size());
      return same ? params_.intra_weight : params_.inter_weight;
    }
    if (!i_regular && !j_regular) return 0.0;
    const int reg = i_regular ? i : j;
    const int stub = (i_regular ? j : i) - regular_;
    return stubborn_weight(reg, stub);
  }

  /// Weight between regular agent i and stubborn agent j (both 0-based
  /// within their own ranges), i.e. the (i, j) entry of the block M~.
  double stubborn_weight(int regular_i, int stubborn_j) const {
    if (regular_i < 0 || regular_i >= regular_ || stubborn_j < 0 ||
        stubborn_j >= stubborn_)
      throw std::out_of_range("stubborn_weight: index out of range");
    if (const auto* uniform = std::get_if<UniformStubborn>(&params_.stubborn))
      return uniform->total / stubborn_;
    return std::get<ExplicitStubborn>(params_.stubborn).weights(regular_i,
                                                                stubborn_j);
  }

  /// Total edge weight alpha = sum over pairs i<j of a(i, j).
  double alpha() const { return alpha_; }

  /// Degree d_i = sum_j a(i, j) of a regular agent. Identical for every
  /// regular agent up to the row-sum tolerance; explicit matrices use the
  /// agent's own row.
  double regular_degree(int regular_i) const {
    const int m = community_size();
    double row = stubborn_row_sum_;
    if (!uniform_stubborn() && stubborn_ > 0)
      row = std::get<ExplicitStubborn>(params_.stubborn)
                .weights.row(regular_i)
                .sum();
    return params_.intra_weight * (m - 1) + params_.inter_weight * m + row;
  }

  /// M~ z^s without materializing the block in uniform mode.
  Eigen::VectorXd stubborn_block_times(const Eigen::VectorXd& zs) const {
    if (zs.size() != stubborn_)
      throw std::invalid_argument("stubborn state vector has wrong dimension");
    if (stubborn_ == 0) return Eigen::VectorXd::Zero(regular_);
    if (const auto* uniform = std::get_if<UniformStubborn>(&params_.stubborn)) {
      const double value = uniform->total / stubborn_ * zs.sum();
      return Eigen::VectorXd::Constant(regular_, value);
    }
    return std::get<ExplicitStubborn>(params_.stubborn).weights * zs;
  }

 private:
  TwoCommunityGraph(GraphParams params, int regular, int stubborn,
                    double row_sum)
      : params_(std::move(params)),
        regular_(regular),
        stubborn_(stubborn),
        stubborn_row_sum_(row_sum) {
    alpha_ = direct_alpha();
  }

  // Direct pairwise sum with Kahan compensation, so alpha_closed_form can
  // be checked against it at 1e-12 relative tolerance.
  double direct_alpha() const {
    double total = 0.0;
    double carry = 0.0;
    for (int i = 0; i < params_.n; ++i) {
      for (int j = i + 1; j < params_.n; ++j) {
        const double y = weight(i, j) - carry;
        const double t = total + y;
        carry = (t - total) - y;
        total = t;
      }
    }
    return total;
  }

  void check_agent(int agent) const {
    if (agent < 0 || agent >= params_.n)
      throw std::out_of_range("agent index out of range");
  }

  GraphParams params_;
  int regular_ = 0;
  int stubborn_ = 0;
  double stubborn_row_sum_ = 0.0;
  double alpha_ = 0.0;
};

inline TwoCommunityGraph build_graph(const GraphParams& params) {
  return TwoCommunityGraph::build(params);
}

/// Closed form for alpha under uniform stubborn weights:
/// r0*n * [(l_s + l_d) r0*n + 4 l^(s) - 2 l_s] / 4.
inline double alpha_closed_form(const GraphParams& params) {
  if (!std::holds_alternative<UniformStubborn>(params.stubborn))
    throw std::invalid_argument("closed form requires uniform stubborn weights");
  const double rn = std::round(params.regular_fraction * params.n);
  const double ls = params.intra_weight;
  const double ld = params.inter_weight;
  const double l_total =
      params.n - rn > 0 ? std::get<UniformStubborn>(params.stubborn).total : 0.0;
  return rn * ((ls + ld) * rn + 4.0 * l_total - 2.0 * ls) / 4.0;
}

}  // namespace gossip
