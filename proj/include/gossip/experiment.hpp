#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gossip/config.hpp"
#include "gossip/simulation.hpp"
#include "gossip/spectral.hpp"
#include "gossip/transient.hpp"

namespace gossip {

/// Ordered key-value manifest; order is fixed so identical experiments
/// produce byte-identical files.
using Manifest = std::vector<std::pair<std::string, std::string>>;

inline void write_manifest(const Manifest& manifest, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (const auto& [key, value] : manifest) out << key << " = " << value << "\n";
}

inline Manifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Manifest manifest;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ": malformed manifest line '" + line + "'");
    manifest.emplace_back(detail::trim(line.substr(0, eq)),
                          detail::trim(line.substr(eq + 1)));
  }
  return manifest;
}

inline std::optional<std::string> manifest_get(const Manifest& manifest,
                                               const std::string& key) {
  for (const auto& [k, v] : manifest)
    if (k == key) return v;
  return std::nullopt;
}

struct ExperimentResult {
  Manifest manifest;
  std::string summary;
  std::vector<std::string> files_written;
  std::optional<SignWindow> window;
  std::optional<SignCheckReport> sign_theorem;
  std::optional<SignCheckReport> sign_reference;
  std::optional<BoundCheckReport> bound_report;
};

namespace detail {

inline std::string format_vector(const Eigen::VectorXd& values) {
  std::string text;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (i > 0) text += ',';
    text += format_double(values[i]);
  }
  return text;
}

inline void append_sign_rows(std::ostream& out, const std::string& scope,
                             const SignCheckReport& report) {
  for (const auto& row : report.rows) {
    out << scope << ',' << row.t << ',' << row.agreements << ','
        << row.disagreements << ',' << row.indeterminate << ','
        << (row.disagreements == 0 ? 1 : 0) << "\n";
  }
}

}  // namespace detail

/// Runs every analysis requested by the config and writes the artifact set
/// (trajectory CSVs, reports, manifest, summary) into config.output_dir.
/// All analyses are computed before the first file is written.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const TwoCommunityGraph graph = build_graph(config.graph);
  const Eigen::VectorXd x0 = sample_x0(config.x0, graph, config.run.seed);
  const Eigen::VectorXd zs = sample_zs(config.zs, graph, config.run.seed);

  const MeanDynamics dynamics(graph);
  const SpectralSummary summary = spectral_summary(graph);
  const SpectralProjections proj = projections(summary, graph, x0, zs);
  const bool local_regime = graph.intra_weight() > graph.inter_weight();

  ExperimentResult result;
  if (local_regime) result.window = sign_window(summary, proj, graph);

  // Compute requested analyses.
  std::optional<TrajectoryBundle> single, mc, exact, dense_exact;
  const bool needs_dense_scan = config.has(Analysis::window) ||
                                config.has(Analysis::local_bound) ||
                                config.has(Analysis::global_bound);
  if (config.has(Analysis::simulate)) single = run(graph, x0, zs, config.run);
  if (config.has(Analysis::mc_mean))
    mc = monte_carlo_mean(graph, x0, zs, config.run);
  if (config.has(Analysis::exact))
    exact = expected_state_recursion(dynamics, x0, zs, config.run.horizon,
                                     config.run.effective_stride());
  if (needs_dense_scan)
    dense_exact = expected_state_recursion(dynamics, x0, zs, config.run.horizon, 1);

  const auto reference = reference_interval(graph.total_agents());
  bool theorem_truncated = false;
  bool reference_truncated = false;
  if (config.has(Analysis::window)) {
    const SignWindow& window = *result.window;
    if (window.nonempty) {
      double upper = window.t_upper;
      if (upper > static_cast<double>(config.run.horizon)) {
        upper = static_cast<double>(config.run.horizon);
        theorem_truncated = true;
      }
      if (window.t_lower < upper) {
        result.sign_theorem =
            check_signs(*dense_exact, window.community_size,
                        window.sign_first_community, window.t_lower, upper);
      }
    } else {
      result.sign_theorem = check_sign_theorem(window, *dense_exact);
    }
    double ref_hi = static_cast<double>(reference.second);
    if (ref_hi > static_cast<double>(config.run.horizon)) {
      ref_hi = static_cast<double>(config.run.horizon);
      reference_truncated = true;
    }
    if (proj.c_xi_x != 0.0 && static_cast<double>(reference.first) < ref_hi) {
      result.sign_reference = check_signs(
          *dense_exact, graph.community_size(), proj.c_xi_x > 0.0 ? 1 : -1,
          static_cast<double>(reference.first), ref_hi);
    }
  }
  if (config.has(Analysis::local_bound)) {
    result.bound_report =
        check_bound(make_local_bound(summary, graph, x0), *dense_exact);
  } else if (config.has(Analysis::global_bound)) {
    result.bound_report =
        check_bound(make_global_bound(summary, graph, x0), *dense_exact);
  }

  // Manifest (fixed key order).
  Manifest& manifest = result.manifest;
  if (!config.preset.empty()) manifest.emplace_back("preset", config.preset);
  manifest.emplace_back("n", std::to_string(graph.total_agents()));
  manifest.emplace_back("r0", detail::format_double(config.graph.regular_fraction));
  manifest.emplace_back("cx", detail::format_double(graph.state_bound()));
  manifest.emplace_back("ls", detail::format_double(graph.intra_weight()));
  manifest.emplace_back("ld", detail::format_double(graph.inter_weight()));
  manifest.emplace_back("l_total", detail::format_double(graph.stubborn_row_sum()));
  manifest.emplace_back("stubborn_mode",
                        graph.uniform_stubborn() ? "uniform" : "explicit");
  manifest.emplace_back("stubborn_convention",
                        config.convention == StubbornConvention::per_edge
                            ? "per_edge"
                            : "row_sum");
  if (config.betas) {
    manifest.emplace_back("beta1", detail::format_double((*config.betas)[0]));
    manifest.emplace_back("beta2", detail::format_double((*config.betas)[1]));
    manifest.emplace_back("beta3", detail::format_double((*config.betas)[2]));
  }
  manifest.emplace_back("alpha", detail::format_double(graph.alpha()));
  manifest.emplace_back("lambda1", detail::format_double(summary.lambda1));
  manifest.emplace_back("lambda2", detail::format_double(summary.lambda2));
  manifest.emplace_back("lambda3", detail::format_double(summary.lambda3));
  manifest.emplace_back("c_eta_x", detail::format_double(proj.c_eta_x));
  manifest.emplace_back("c_xi_x", detail::format_double(proj.c_xi_x));
  manifest.emplace_back("zeta1", detail::format_double(proj.zeta1));
  manifest.emplace_back("zeta2", detail::format_double(proj.zeta2));
  manifest.emplace_back("seed", std::to_string(config.run.seed));
  manifest.emplace_back("replicates", std::to_string(config.run.replicates));
  manifest.emplace_back("horizon", std::to_string(config.run.horizon));
  manifest.emplace_back("record_every",
                        std::to_string(config.run.effective_stride()));
  {
    std::string names;
    for (const Analysis analysis : config.analyses) {
      if (!names.empty()) names += ',';
      names += to_string(analysis);
    }
    manifest.emplace_back("analyses", names);
  }
  if (result.window) {
    manifest.emplace_back("t_lower", detail::format_double(result.window->t_lower));
    manifest.emplace_back("t_upper", detail::format_double(result.window->t_upper));
    manifest.emplace_back("window_nonempty",
                          result.window->nonempty ? "true" : "false");
    for (int k = 0; k < 4; ++k)
      manifest.emplace_back("t_upper_term_" + std::to_string(k + 1),
                            detail::format_double(result.window->upper_terms[k]));
  }
  if (config.has(Analysis::window)) {
    manifest.emplace_back("check_interval_lo", std::to_string(reference.first));
    manifest.emplace_back("check_interval_hi", std::to_string(reference.second));
    if (result.sign_theorem) {
      manifest.emplace_back("sign_theorem_pass",
                            result.sign_theorem->pass ? "true" : "false");
      manifest.emplace_back("sign_theorem_truncated",
                            theorem_truncated ? "true" : "false");
    }
    if (result.sign_reference) {
      manifest.emplace_back("sign_reference_pass",
                            result.sign_reference->pass ? "true" : "false");
      manifest.emplace_back("sign_reference_truncated",
                            reference_truncated ? "true" : "false");
      manifest.emplace_back(
          "sign_reference_disagreements",
          std::to_string(result.sign_reference->disagreements));
      manifest.emplace_back(
          "sign_reference_indeterminate",
          std::to_string(result.sign_reference->indeterminate));
    }
    if (proj.c_xi_x != 0.0) {
      if (const auto empirical =
              empirical_sign_window(*dense_exact, graph.community_size(),
                                    proj.c_xi_x > 0.0 ? 1 : -1)) {
        manifest.emplace_back("empirical_window_lo",
                              std::to_string(empirical->first));
        manifest.emplace_back("empirical_window_hi",
                              std::to_string(empirical->second));
      }
    }
  }
  if (result.bound_report) {
    manifest.emplace_back("bound_mode",
                          config.has(Analysis::local_bound) ? "local" : "global");
    manifest.emplace_back("bound_violations",
                          std::to_string(result.bound_report->violations));
    manifest.emplace_back("bound_max_excess",
                          detail::format_double(result.bound_report->max_excess));
  }
  manifest.emplace_back("x0", detail::format_vector(x0));
  manifest.emplace_back("zs", detail::format_vector(zs));

  // Human-readable summary block.
  {
    std::ostringstream text;
    text << "experiment: " << (config.preset.empty() ? "custom" : config.preset)
         << "\n";
    text << "graph: n=" << graph.total_agents()
         << " regular=" << graph.regular_count()
         << " stubborn=" << graph.stubborn_count()
         << " ls=" << graph.intra_weight() << " ld=" << graph.inter_weight()
         << " l_total=" << graph.stubborn_row_sum() << " alpha=" << graph.alpha()
         << "\n";
    text << "spectrum: lambda1=" << summary.lambda1
         << " lambda2=" << summary.lambda2 << " lambda3=" << summary.lambda3
         << "\n";
    text << "projections: c_eta_x=" << proj.c_eta_x << " c_xi_x=" << proj.c_xi_x
         << " zeta1=" << proj.zeta1 << " zeta2=" << proj.zeta2 << "\n";
    if (result.window) {
      text << "theorem window: (" << result.window->t_lower << ", "
           << result.window->t_upper << ")"
           << (result.window->nonempty ? "" : " [empty]") << "\n";
    }
    if (result.sign_theorem) {
      text << "sign check (theorem window): "
           << result.sign_theorem->agreements << " agree, "
           << result.sign_theorem->disagreements << " disagree, "
           << result.sign_theorem->indeterminate << " indeterminate -> "
           << (result.sign_theorem->pass ? "PASS" : "FAIL")
           << (theorem_truncated ? " [truncated to horizon]" : "") << "\n";
    }
    if (result.sign_reference) {
      text << "sign check (" << reference.first << ", " << reference.second
           << "): " << result.sign_reference->agreements << " agree, "
           << result.sign_reference->disagreements << " disagree, "
           << result.sign_reference->indeterminate << " indeterminate -> "
           << (result.sign_reference->pass ? "PASS" : "FAIL")
           << (reference_truncated ? " [truncated to horizon]" : "") << "\n";
    }
    if (result.bound_report) {
      text << (config.has(Analysis::local_bound) ? "local" : "global")
           << " consensus bound: " << result.bound_report->times_checked
           << " times, " << result.bound_report->violations
           << " violations, max excess " << result.bound_report->max_excess
           << " -> " << (result.bound_report->pass ? "PASS" : "FAIL") << "\n";
    }
    result.summary = text.str();
  }

  // All analyses done; now touch the filesystem.
  const std::filesystem::path dir(config.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory " + dir.string() +
                             ": " + ec.message());
  auto emit = [&](const std::string& name, const TrajectoryBundle& bundle) {
    const std::string path = (dir / name).string();
    write_trajectory_csv(bundle, path);
    result.files_written.push_back(path);
    if (bundle.kind == TrajectoryKind::mc_mean) {
      std::string stem = path.substr(0, path.size() - 4);
      result.files_written.push_back(stem + "_stderr.csv");
    }
  };
  if (single) emit("single_run.csv", *single);
  if (mc) emit("mc_mean.csv", *mc);
  if (exact) emit("exact_expectation.csv", *exact);

  if (result.sign_theorem || result.sign_reference) {
    const std::string path = (dir / "sign_report.csv").string();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "scope,t,agreements,disagreements,indeterminate,pass\n";
    if (result.sign_theorem)
      detail::append_sign_rows(out, "theorem", *result.sign_theorem);
    if (result.sign_reference)
      detail::append_sign_rows(out, "reference", *result.sign_reference);
    result.files_written.push_back(path);
  }
  if (result.bound_report) {
    const std::string path = (dir / "bound_report.csv").string();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "t,max_deviation,envelope,pass\n";
    for (const auto& row : result.bound_report->rows) {
      out << row.t << ',' << detail::format_double(row.max_deviation) << ','
          << detail::format_double(row.envelope) << ',' << (row.pass ? 1 : 0)
          << "\n";
    }
    result.files_written.push_back(path);
  }
  {
    const std::string path = (dir / "summary.txt").string();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << result.summary;
    result.files_written.push_back(path);
  }
  const std::string manifest_path = (dir / "manifest.txt").string();
  write_manifest(manifest, manifest_path);
  result.files_written.push_back(manifest_path);
  return result;
}

}  // namespace gossip
