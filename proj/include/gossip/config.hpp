#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gossip/graph.hpp"
#include "gossip/rng.hpp"
#include "gossip/trajectory.hpp"
#include "gossip/transient.hpp"

namespace gossip {

enum class Analysis { simulate, mc_mean, exact, window, local_bound, global_bound };

// Default preset seeds. Each preset draws its own initial conditions from
// its seed, so the two expected-state presets use independent samples. The
// local-regime seed gives a nonempty theorem window inside the default
// horizon, so the preset demonstrates the window check end to end.
inline constexpr std::uint64_t kPresetSeedFig2 = 2010;
inline constexpr std::uint64_t kPresetSeedFig3 = 2002;
inline constexpr std::uint64_t kPresetSeedFig4a = 2003;
inline constexpr std::uint64_t kPresetSeedFig4b = 2004;

inline const char* to_string(Analysis analysis) {
  switch (analysis) {
    case Analysis::simulate: return "simulate";
    case Analysis::mc_mean: return "mc_mean";
    case Analysis::exact: return "exact";
    case Analysis::window: return "window";
    case Analysis::local_bound: return "local_bound";
    case Analysis::global_bound: return "global_bound";
  }
  return "unknown";
}

/// Initial regular states: a community-split uniform sample or an explicit
/// vector. The split draws community 1 from (low1, high1) and community 2
/// from (low2, high2); defaults are (0, c_x) and (-c_x, 0).
struct X0Spec {
  enum class Kind { uniform_split, explicit_values };
  Kind kind = Kind::uniform_split;
  std::optional<std::array<double, 4>> ranges;  // low1 high1 low2 high2
  Eigen::VectorXd values;
};

/// Stubborn states: uniform on (-c_x, c_x) or an explicit vector.
struct ZsSpec {
  enum class Kind { uniform, explicit_values };
  Kind kind = Kind::uniform;
  Eigen::VectorXd values;
};

/// A fully resolved experiment: graph, initial conditions, run plan, and the
/// analyses to perform.
struct ExperimentConfig {
  GraphParams graph;
  std::optional<std::array<double, 3>> betas;  // set when graph came from a scaling regime
  StubbornConvention convention = StubbornConvention::per_edge;
  X0Spec x0;
  ZsSpec zs;
  RunConfig run;
  std::vector<Analysis> analyses;
  std::string output_dir = "out";
  std::string preset;  // empty unless expanded from a preset

  bool has(Analysis a) const {
    return std::find(analyses.begin(), analyses.end(), a) != analyses.end();
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

struct IniEntry {
  std::string section;  // empty for top-level keys
  std::string key;
  std::string value;
  int line = 0;
  bool consumed = false;
};

inline std::vector<IniEntry> parse_ini(std::istream& in, const std::string& origin) {
  std::vector<IniEntry> entries;
  std::string section;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // Strip inline comments: a # or ; preceded by whitespace (or at the
    // start of the line). Values themselves never contain these characters.
    for (std::size_t pos = 0; pos < line.size(); ++pos) {
      if ((line[pos] == '#' || line[pos] == ';') &&
          (pos == 0 || std::isspace(static_cast<unsigned char>(line[pos - 1])))) {
        line.erase(pos);
        break;
      }
    }
    const std::string text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']')
        throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                    ": malformed section header '" + text + "'");
      section = trim(text.substr(1, text.size() - 2));
      if (section != "graph" && section != "init" && section != "run")
        throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                    ": unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                  ": expected key = value, got '" + text + "'");
    IniEntry entry;
    entry.section = section;
    entry.key = trim(text.substr(0, eq));
    entry.value = trim(text.substr(eq + 1));
    entry.line = line_no;
    if (entry.key.empty())
      throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                  ": empty key");
    entries.push_back(std::move(entry));
  }
  return entries;
}

class IniView {
 public:
  IniView(std::vector<IniEntry> entries, std::string origin)
      : entries_(std::move(entries)), origin_(std::move(origin)) {}

  const IniEntry* find(const std::string& section, const std::string& key) {
    for (auto& entry : entries_) {
      if (entry.section == section && entry.key == key) {
        entry.consumed = true;
        return &entry;
      }
    }
    return nullptr;
  }

  std::optional<std::string> get(const std::string& section, const std::string& key) {
    const IniEntry* entry = find(section, key);
    if (!entry) return std::nullopt;
    return entry->value;
  }

  double get_double(const std::string& key, const IniEntry* entry) const {
    try {
      std::size_t used = 0;
      const double value = std::stod(entry->value, &used);
      if (used != entry->value.size()) throw std::invalid_argument("");
      return value;
    } catch (const std::exception&) {
      throw std::invalid_argument(where(entry) + ": '" + key +
                                  "' expects a number, got '" + entry->value + "'");
    }
  }

  std::optional<double> number(const std::string& section, const std::string& key) {
    const IniEntry* entry = find(section, key);
    if (!entry) return std::nullopt;
    return get_double(key, entry);
  }

  std::optional<long> integer(const std::string& section, const std::string& key) {
    const IniEntry* entry = find(section, key);
    if (!entry) return std::nullopt;
    const double value = get_double(key, entry);
    const long rounded = static_cast<long>(std::llround(value));
    if (std::abs(value - rounded) > 1e-9)
      throw std::invalid_argument(where(entry) + ": '" + key +
                                  "' expects an integer, got '" + entry->value + "'");
    return rounded;
  }

  std::optional<std::uint64_t> unsigned64(const std::string& section,
                                          const std::string& key) {
    const IniEntry* entry = find(section, key);
    if (!entry) return std::nullopt;
    try {
      std::size_t used = 0;
      const std::uint64_t value = std::stoull(entry->value, &used);
      if (used != entry->value.size()) throw std::invalid_argument("");
      return value;
    } catch (const std::exception&) {
      throw std::invalid_argument(where(entry) + ": '" + key +
                                  "' expects an unsigned integer, got '" +
                                  entry->value + "'");
    }
  }

  void reject_unconsumed() const {
    for (const auto& entry : entries_) {
      if (!entry.consumed)
        throw std::invalid_argument(
            where(&entry) + ": unknown key '" + entry.key + "'" +
            (entry.section.empty() ? "" : " in section [" + entry.section + "]"));
    }
  }

  std::string where(const IniEntry* entry) const {
    return origin_ + ":" + std::to_string(entry->line);
  }

 private:
  std::vector<IniEntry> entries_;
  std::string origin_;
};

inline std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> items;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, sep)) {
    const std::string trimmed = trim(item);
    if (!trimmed.empty()) items.push_back(trimmed);
  }
  return items;
}

inline Eigen::VectorXd parse_vector(const std::string& text, const std::string& what) {
  const auto parts = split_list(text, ',');
  Eigen::VectorXd values(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    try {
      values[static_cast<Eigen::Index>(i)] = std::stod(parts[i]);
    } catch (const std::exception&) {
      throw std::invalid_argument(what + ": bad number '" + parts[i] + "'");
    }
  }
  return values;
}

inline Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open stubborn matrix file " + path);
  std::vector<Eigen::VectorXd> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    rows.push_back(parse_vector(line, path));
  }
  if (rows.empty()) throw std::invalid_argument(path + ": empty matrix");
  Eigen::MatrixXd matrix(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != matrix.cols())
      throw std::invalid_argument(path + ": ragged row " + std::to_string(r + 1));
    matrix.row(static_cast<Eigen::Index>(r)) = rows[r];
  }
  return matrix;
}

inline Analysis parse_analysis(const std::string& name) {
  if (name == "simulate") return Analysis::simulate;
  if (name == "mc_mean") return Analysis::mc_mean;
  if (name == "exact") return Analysis::exact;
  if (name == "window") return Analysis::window;
  if (name == "local_bound") return Analysis::local_bound;
  if (name == "global_bound") return Analysis::global_bound;
  throw std::invalid_argument("unknown analysis '" + name + "'");
}

}  // namespace detail

/// Cross-field validation: the requested analyses must be consistent with
/// the graph regime, and the graph itself must build.
inline void validate_config(const ExperimentConfig& config) {
  const TwoCommunityGraph graph = build_graph(config.graph);
  const bool local_regime = graph.intra_weight() > graph.inter_weight();
  for (const Analysis analysis : config.analyses) {
    if ((analysis == Analysis::window || analysis == Analysis::local_bound) &&
        !local_regime)
      throw std::invalid_argument(
          std::string(to_string(analysis)) +
          " analysis requires intra-community weight > inter-community weight");
    if (analysis == Analysis::global_bound && local_regime)
      throw std::invalid_argument(
          "global_bound analysis requires intra-community weight <= "
          "inter-community weight");
  }
  if (config.analyses.empty())
    throw std::invalid_argument("no analyses requested");
  config.run.validate();
  if (config.x0.kind == X0Spec::Kind::explicit_values &&
      config.x0.values.size() != graph.regular_count())
    throw std::invalid_argument("explicit x0 must have one entry per regular agent");
  if (config.zs.kind == ZsSpec::Kind::explicit_values &&
      config.zs.values.size() != graph.stubborn_count())
    throw std::invalid_argument("explicit zs must have one entry per stubborn agent");
}

inline ExperimentConfig load_config_stream(std::istream& in,
                                           const std::string& origin) {
  detail::IniView ini(detail::parse_ini(in, origin), origin);
  ExperimentConfig config;

  // [graph]
  const auto n = ini.integer("graph", "n");
  if (!n) throw std::invalid_argument(origin + ": missing graph.n");
  const auto r0 = ini.number("graph", "r0");
  if (!r0) throw std::invalid_argument(origin + ": missing graph.r0");
  const double cx = ini.number("graph", "cx").value_or(1.0);

  const auto beta1 = ini.number("graph", "beta1");
  const auto beta2 = ini.number("graph", "beta2");
  const auto beta3 = ini.number("graph", "beta3");
  const auto ls = ini.number("graph", "ls");
  const auto ld = ini.number("graph", "ld");
  const auto l_total = ini.number("graph", "l_total");
  const auto matrix_path = ini.get("graph", "stubborn_matrix_csv");
  const auto convention_text = ini.get("graph", "stubborn_convention");
  if (convention_text) {
    if (*convention_text == "per_edge")
      config.convention = StubbornConvention::per_edge;
    else if (*convention_text == "row_sum")
      config.convention = StubbornConvention::row_sum;
    else
      throw std::invalid_argument(origin +
                                  ": stubborn_convention must be per_edge or "
                                  "row_sum, got '" + *convention_text + "'");
  }

  // [init]
  if (const auto x0_text = ini.get("init", "x0")) {
    std::stringstream stream(*x0_text);
    std::string kind;
    stream >> kind;
    if (kind == "uniform_split") {
      config.x0.kind = X0Spec::Kind::uniform_split;
      double lo1, hi1, lo2, hi2;
      if (stream >> lo1 >> hi1 >> lo2 >> hi2)
        config.x0.ranges = {{lo1, hi1, lo2, hi2}};
    } else if (kind == "explicit") {
      config.x0.kind = X0Spec::Kind::explicit_values;
      std::string rest;
      std::getline(stream, rest);
      config.x0.values = detail::parse_vector(rest, origin + ": init.x0");
    } else {
      throw std::invalid_argument(origin + ": init.x0 must start with "
                                  "uniform_split or explicit");
    }
  }
  if (const auto zs_text = ini.get("init", "zs")) {
    std::stringstream stream(*zs_text);
    std::string kind;
    stream >> kind;
    if (kind == "uniform") {
      config.zs.kind = ZsSpec::Kind::uniform;
    } else if (kind == "explicit") {
      config.zs.kind = ZsSpec::Kind::explicit_values;
      std::string rest;
      std::getline(stream, rest);
      config.zs.values = detail::parse_vector(rest, origin + ": init.zs");
    } else {
      throw std::invalid_argument(origin + ": init.zs must start with "
                                  "uniform or explicit");
    }
  }

  // [run]
  if (const auto horizon = ini.integer("run", "horizon")) config.run.horizon = *horizon;
  if (const auto stride = ini.integer("run", "record_every"))
    config.run.record_every = *stride;
  if (const auto seed = ini.unsigned64("run", "seed")) config.run.seed = *seed;
  if (const auto replicates = ini.integer("run", "replicates"))
    config.run.replicates = static_cast<int>(*replicates);

  // top-level
  if (const auto analyses = ini.get("", "analyses")) {
    for (const auto& name : detail::split_list(*analyses, ','))
      config.analyses.push_back(detail::parse_analysis(name));
  }
  if (const auto out = ini.get("", "output_dir")) config.output_dir = *out;

  // Structural problems (unknown keys) outrank semantic ones.
  ini.reject_unconsumed();

  const bool scaled = beta1 || beta2 || beta3;
  const bool direct = ls || ld;
  if (scaled && direct)
    throw std::invalid_argument(origin +
                                ": specify either beta1/beta2/beta3 or ls/ld, not both");
  if (scaled) {
    if (!(beta1 && beta2 && beta3))
      throw std::invalid_argument(origin + ": beta1, beta2, beta3 must all be given");
    config.graph = scaling_regime(static_cast<int>(*n), *r0, *beta1, *beta2,
                                  *beta3, cx, config.convention);
    config.betas = {{*beta1, *beta2, *beta3}};
  } else {
    if (!(ls && ld))
      throw std::invalid_argument(origin + ": graph.ls and graph.ld are required");
    config.graph.n = static_cast<int>(*n);
    config.graph.regular_fraction = *r0;
    config.graph.intra_weight = *ls;
    config.graph.inter_weight = *ld;
    config.graph.state_bound = cx;
    if (matrix_path) {
      config.graph.stubborn = ExplicitStubborn{detail::read_matrix_csv(*matrix_path)};
      if (l_total)
        throw std::invalid_argument(origin +
                                    ": l_total conflicts with stubborn_matrix_csv");
    } else {
      config.graph.stubborn = UniformStubborn{l_total.value_or(0.0)};
    }
  }

  validate_config(config);
  return config;
}

/// Loads and validates an experiment config file. Errors carry file:line
/// context for parse problems and the violated invariant for semantic ones.
inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  return load_config_stream(in, path);
}

/// Samples x0 from the dedicated init stream, so the draw is independent of
/// the simulation streams and identical across analyses.
inline Eigen::VectorXd sample_x0(const X0Spec& spec, const TwoCommunityGraph& graph,
                                 std::uint64_t seed) {
  if (spec.kind == X0Spec::Kind::explicit_values) {
    if (spec.values.size() != graph.regular_count())
      throw std::invalid_argument("explicit x0 has wrong dimension");
    return spec.values;
  }
  const double cx = graph.state_bound();
  const std::array<double, 4> ranges =
      spec.ranges.value_or(std::array<double, 4>{{0.0, cx, -cx, 0.0}});
  Rng rng(seed, kStreamInitX0);
  const int m = graph.community_size();
  Eigen::VectorXd x0(graph.regular_count());
  for (int i = 0; i < m; ++i) x0[i] = rng.uniform(ranges[0], ranges[1]);
  for (int i = 0; i < m; ++i) x0[m + i] = rng.uniform(ranges[2], ranges[3]);
  return x0;
}

inline Eigen::VectorXd sample_zs(const ZsSpec& spec, const TwoCommunityGraph& graph,
                                 std::uint64_t seed) {
  if (spec.kind == ZsSpec::Kind::explicit_values) {
    if (spec.values.size() != graph.stubborn_count())
      throw std::invalid_argument("explicit zs has wrong dimension");
    return spec.values;
  }
  const double cx = graph.state_bound();
  Rng rng(seed, kStreamInitZs);
  Eigen::VectorXd zs(graph.stubborn_count());
  for (int j = 0; j < zs.size(); ++j) zs[j] = rng.uniform(-cx, cx);
  return zs;
}

/// Benchmark presets reproducing the reference experiments (n = 500,
/// r0 = 0.9, c_x = 1, per-edge stubborn weights (log n)/n).
inline ExperimentConfig preset_config(const std::string& name) {
  auto base = [](double beta1, double beta2, std::uint64_t seed) {
    ExperimentConfig config;
    config.convention = StubbornConvention::per_edge;
    config.graph = scaling_regime(500, 0.9, beta1, beta2, 1.0, 1.0,
                                  StubbornConvention::per_edge);
    config.betas = {{beta1, beta2, 1.0}};
    config.x0.kind = X0Spec::Kind::uniform_split;
    config.zs.kind = ZsSpec::Kind::uniform;
    config.run.horizon = 5000;
    config.run.record_every = 0;
    config.run.seed = seed;
    config.run.replicates = 1;
    return config;
  };
  if (name == "fig2_expected_local") {
    ExperimentConfig config = base(3.0, 1.0, kPresetSeedFig2);
    config.analyses = {Analysis::exact, Analysis::window, Analysis::local_bound};
    config.preset = name;
    return config;
  }
  if (name == "fig3_expected_global") {
    ExperimentConfig config = base(1.0, 3.0, kPresetSeedFig3);
    config.analyses = {Analysis::exact, Analysis::global_bound};
    config.preset = name;
    return config;
  }
  if (name == "fig4a_states_local") {
    ExperimentConfig config = base(3.0, 1.0, kPresetSeedFig4a);
    config.analyses = {Analysis::simulate};
    config.preset = name;
    return config;
  }
  if (name == "fig4b_states_global") {
    ExperimentConfig config = base(1.0, 3.0, kPresetSeedFig4b);
    config.analyses = {Analysis::simulate};
    config.preset = name;
    return config;
  }
  throw std::invalid_argument(
      "unknown preset '" + name +
      "'; expected fig2_expected_local, fig3_expected_global, "
      "fig4a_states_local or fig4b_states_global");
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "fig2_expected_local", "fig3_expected_global", "fig4a_states_local",
      "fig4b_states_global"};
  return names;
}

}  // namespace gossip
