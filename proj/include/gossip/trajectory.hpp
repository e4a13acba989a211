#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gossip {

enum class TrajectoryKind { single_run, mc_mean, exact_expectation };

inline const char* to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::single_run: return "single_run";
    case TrajectoryKind::mc_mean: return "mc_mean";
    case TrajectoryKind::exact_expectation: return "exact_expectation";
  }
  return "unknown";
}

/// Simulation horizon and recording plan. record_every == 0 means the
/// default stride max(1, horizon / 2000).
struct RunConfig {
  long horizon = 0;
  long record_every = 1;
  std::uint64_t seed = 0;
  int replicates = 1;

  long effective_stride() const {
    if (record_every < 0) throw std::invalid_argument("record stride must be >= 0");
    if (record_every == 0) return horizon >= 2000 ? horizon / 2000 : 1;
    return record_every;
  }

  void validate() const {
    if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
    if (record_every > 0 && horizon > 0 && record_every > horizon)
      throw std::invalid_argument("record stride exceeds horizon");
    if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  }
};

/// Time-indexed per-agent values from one source: a single stochastic run,
/// a Monte Carlo mean (with per-entry standard errors), or the exact
/// expectation of the mean dynamics.
struct TrajectoryBundle {
  std::vector<long> times;
  std::vector<Eigen::VectorXd> values;  // one vector of regular states per time
  TrajectoryKind kind = TrajectoryKind::single_run;
  std::uint64_t seed = 0;
  int replicates = 0;
  std::vector<Eigen::VectorXd> standard_errors;  // mc_mean only, same shape

  int dim() const { return values.empty() ? 0 : static_cast<int>(values.front().size()); }

  /// Index of time t in times, or -1 if not recorded.
  long index_of(long t) const {
    auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.end() || *it != t) return -1;
    return it - times.begin();
  }
};

/// Recording instants: 0, s, 2s, ... plus the horizon itself.
inline std::vector<long> recording_times(long horizon, long stride) {
  if (stride < 1) throw std::invalid_argument("record stride must be positive");
  if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
  std::vector<long> times;
  for (long t = 0; t <= horizon; t += stride) times.push_back(t);
  if (times.back() != horizon) times.push_back(horizon);
  return times;
}

namespace detail {

inline std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

inline void write_rows(std::ostream& out, const std::vector<long>& times,
                       const std::vector<Eigen::VectorXd>& rows) {
  const int dim = rows.empty() ? 0 : static_cast<int>(rows.front().size());
  out << "t";
  for (int a = 1; a <= dim; ++a) out << ",agent_" << a;
  out << "\n";
  for (std::size_t r = 0; r < times.size(); ++r) {
    out << times[r];
    for (int a = 0; a < dim; ++a) out << ',' << format_double(rows[r][a]);
    out << "\n";
  }
}

}  // namespace detail

/// Writes the bundle as CSV (header t,agent_1,...). Monte Carlo means also
/// get a parallel <stem>_stderr.csv with identical shape.
inline void write_trajectory_csv(const TrajectoryBundle& bundle,
                                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  detail::write_rows(out, bundle.times, bundle.values);
  if (bundle.kind == TrajectoryKind::mc_mean) {
    std::string stem = path;
    if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv")
      stem = stem.substr(0, stem.size() - 4);
    const std::string err_path = stem + "_stderr.csv";
    std::ofstream err_out(err_path);
    if (!err_out)
      throw std::runtime_error("cannot open " + err_path + " for writing");
    detail::write_rows(err_out, bundle.times, bundle.standard_errors);
  }
}

/// Reads a trajectory CSV back. The kind is not part of the file format and
/// is supplied by the caller.
inline TrajectoryBundle read_trajectory_csv(
    const std::string& path, TrajectoryKind kind = TrajectoryKind::single_run) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  TrajectoryBundle bundle;
  bundle.kind = kind;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ": missing header");
  long columns = std::count(line.begin(), line.end(), ',');
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    if (!std::getline(row, cell, ','))
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": empty row");
    bundle.times.push_back(std::stol(cell));
    Eigen::VectorXd values(columns);
    for (long c = 0; c < columns; ++c) {
      if (!std::getline(row, cell, ','))
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": expected " + std::to_string(columns) +
                                 " agent columns");
      values[c] = std::stod(cell);
    }
    bundle.values.push_back(std::move(values));
  }
  return bundle;
}

}  // namespace gossip
