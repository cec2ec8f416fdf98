#pragma once

#include <string>
#include <vector>

namespace corrlab {

/// One experiment, fully described. Parsed from an INI-style file with
/// sections [experiment], [potential], [orbital], [grid], [sweep], [window],
/// [gp], [run]; unknown sections or keys are rejected so typos cannot
/// silently fall back to defaults.
///
/// Zero grid entries mean "choose per experiment kind"; resolve_config fills
/// them (and empty sweep lists) deterministically. For the microscopic kinds
/// (window-sweep, micro-macro) the T list carries the microscopic time t.
struct ExperimentConfig {
  // [experiment]
  std::string kind;  // scatter | window | window-sweep | dispersive |
                     // energy | gp | micro-macro; empty until set by the
                     // file, a preset, or the CLI subcommand
  std::string label;

  // [potential]
  std::string potential_kind = "bump";  // bump | square_well
  double v0 = 5.0;
  double radius = 1.0;

  // [orbital]
  double sigma = 1.0;
  double alpha = 4.0;

  // [grid] (0 = auto)
  double dr = 0.0;
  double r_max = 0.0;
  double dt = 0.0;

  // [sweep] lists: lambda, L, T, N, ell, s
  std::vector<double> lambdas;
  std::vector<double> Ls;
  std::vector<double> Ts;
  std::vector<double> Ns;
  std::vector<double> ells;
  std::vector<double> ss;

  // [window]
  std::string profile = "cap";  // cap | expcone | gauss
  bool absorbing = true;
  double ramp_fraction = 0.875;
  double absorber_w0 = 1.0;

  // [gp]
  double gp_dr = 0.01;
  double gp_r_max = 60.0;
  double gp_dt = 0.002;

  // [run]
  int workers = 1;
  std::string out;

  /// Canonical text form: every field, one sorted "section.key = value" line
  /// each, doubles at full precision. Equal configs have equal canonical
  /// text, hence equal hashes.
  std::string canonical() const;
  /// FNV-1a hash of the canonical text; stamped on every result row.
  std::string hash() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Applies one "section.key = value" assignment (the same mapping the file
/// parser uses); lets the CLI override single fields.
void apply_config_value(ExperimentConfig& cfg, const std::string& section,
                        const std::string& key, const std::string& value);

/// Named ready-to-run configurations:
///   formation    window run, Lambda=400, L=4, T up to Lambda/4
///   persistence  window run, Lambda=800, L=4, long T ladder past L^4 scale
///   fn0          window-sweep over N with the closed-form-oracle well
ExperimentConfig preset_config(const std::string& name);

/// Fills kind-dependent defaults (grid steps, sweep lists) so the returned
/// config is exactly what will run; idempotent.
ExperimentConfig resolve_config(const ExperimentConfig& cfg);

/// Hard gates throw validation_error naming the offending field; soft regime
/// flags (window scale not much larger than L, ell outside the modelled
/// band) come back as warnings.
std::vector<std::string> validate_config(const ExperimentConfig& cfg);

}  // namespace corrlab
