#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "corrlab/config.hpp"

namespace corrlab {

/// Outcome of one experiment run: where the artifacts went, the rows that
/// were produced, per-kind headline numbers (verdicts), and any warnings or
/// per-point failures. Timestamps live here and in the JSON manifest only —
/// never in the CSV, which must be byte-identical across reruns.
struct RunRecord {
  std::string kind;
  std::string label;
  std::string config_hash;
  std::string code_version;
  std::string started_at;
  std::string finished_at;
  std::string out_dir;
  std::string csv_path;
  std::string manifest_path;
  std::string csv_header;
  std::vector<std::string> csv_rows;
  std::vector<std::string> warnings;
  std::vector<std::string> failures;
  std::map<std::string, double> verdicts;
  std::size_t points_total = 0;
  std::size_t points_resumed = 0;
  /// 0 when clean; otherwise the exit code class of the first point failure
  /// (2 validation, 3 numerical, 4 resource).
  int exit_code = 0;
};

/// Runs the experiment the config describes: resolves defaults, validates,
/// executes the parameter points (one worker per point, single aggregation
/// writer), and emits results.csv + manifest.json + journal.jsonl under
/// out_dir. With resume = true, points already present in a matching journal
/// are reused bitwise instead of recomputed. A failing point is recorded and
/// skipped; the run still emits the partial record with a nonzero exit_code.
RunRecord run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                         bool resume = false, int workers_override = 0,
                         const std::string& csv_name = "results.csv");

struct ConvergenceLevel {
  double scale = 1.0;  // grid refinement factor applied to (dr, dt)
  double dr = 0.0;
  double dt = 0.0;
  double value = 0.0;  // the kind's headline scalar at this level
};

struct ConvergenceReport {
  std::vector<ConvergenceLevel> levels;
  std::vector<double> deltas;  // |v_i - v_{i-1}|, aligned with levels[1..]
  std::vector<double> orders;  // log2(delta_{i-1} / delta_i), levels[2..]
  double relative_change_finest = 0.0;
  bool flagged = false;  // headline value shifted > 2% between finest levels
  std::string csv_path;
};

/// Reruns the experiment with (dr, dt) divided by each entry of
/// level_scales (>= 3 entries) and Richardson-compares the headline scalar:
/// scatter -> scattering length, window -> final F, dispersive -> final sup,
/// gp -> final aligned divergence. Quadrature-only kinds have no grid to
/// refine and are rejected. A size guard rejects plans whose finest grid
/// would be unreasonably large before anything launches.
ConvergenceReport convergence_study(const ExperimentConfig& cfg,
                                    const std::vector<double>& level_scales,
                                    const std::string& out_dir);

/// Convenience overload: levels halvings 1, 2, 4, ...
ConvergenceReport convergence_study(const ExperimentConfig& cfg, int levels,
                                    const std::string& out_dir);

}  // namespace corrlab
