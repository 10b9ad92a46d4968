#pragma once

#include <map>
#include <optional>
#include <string>

#include "mel/dataset.hpp"
#include "mel/laplacian.hpp"
#include "mel/solvers.hpp"
#include "mel/types.hpp"

namespace mel {

/* Experiment configuration is a flat key=value map with dotted section
 * prefixes (data.*, method.*, reference.*, solver.*, output.*). Files hold
 * one pair per line, '#' starts a comment; CLI flags override file values.
 * run_experiment resolves defaults into the map first, and report.json
 * embeds the resolved map, so a run can be reproduced from its report. */
using FlatConfig = std::map<std::string, std::string>;

FlatConfig parse_config_file(const std::string& path);
FlatConfig parse_config_text(const std::string& text, const std::string& origin);

/// "key=value" forms, e.g. from CLI --set flags.
void apply_override(FlatConfig& cfg, const std::string& keyval);

/// Fills defaults, validates names and value syntax; unknown keys error.
FlatConfig resolve_config(const FlatConfig& cfg);

/// The resolved config embedded in a report.json written by run_experiment.
FlatConfig config_from_report(const std::string& report_path);

struct LaplacianOutcome {
  double lambda = 0.0;
  double lambda_f = 0.0;
  double lambda_g = 0.0;
  double power_residual = 0.0;
  Index power_iterations = 0;
  double eigen_residual = 0.0;  // max_norm(G(F(A)) - lambda A) / lambda
  bool entrywise_positive = false;
  bool metric_check_ok = false;
  std::string genericity_summary;
};

struct ExperimentOutcome {
  FlatConfig resolved;
  std::string dir;  // run directory holding the written artifacts
  // Solver-based families:
  std::optional<RunReport> run;
  // Eigen-pipeline family:
  std::optional<LaplacianOutcome> laplacian;
  std::optional<double> metric_asw;  // when labels were supplied
  std::optional<double> metric_dunn;
  int exit_code = 0;  // 0 converged/early-stopped, 3 max-iters, 4 diverged
};

/* Runs the configured experiment and writes into output.dir:
 * A.csv, B.csv, trace.csv (solver families), distances.csv (eigen family),
 * and report.json. Directories are created as needed. */
ExperimentOutcome run_experiment(const FlatConfig& cfg);

/// Grayscale SVG: one unit square per cell, white at 0, black at the max.
void write_heatmap_svg(const std::string& path, const Matrix& mat);

void write_trace_csv(const std::string& path, const RunReport& report);

}  // namespace mel
