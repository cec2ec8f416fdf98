#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "corrlab/config.hpp"
#include "corrlab/errors.hpp"
#include "corrlab/field.hpp"
#include "corrlab/functionals.hpp"
#include "corrlab/harness.hpp"
#include "corrlab/potential.hpp"
#include "corrlab/propagator.hpp"
#include "corrlab/version.hpp"

namespace {

using corrlab::ExperimentConfig;
using corrlab::validation_error;
using nlohmann::ordered_json;

/// Flags shared by every experiment subcommand.
struct Common {
  std::string config;
  std::string preset;
  std::string out;
  std::string csv = "results.csv";
  int workers = 0;
  bool resume = false;
  bool json = false;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Experiment configuration file (INI sections)");
  cmd->add_option("--preset", c.preset,
                  "Built-in configuration: formation, persistence or fn0");
  cmd->add_option("--out", c.out, "Output directory (default runs/<kind>)");
  cmd->add_option("--workers", c.workers,
                  "Parallel parameter points (overrides [run].workers)");
  cmd->add_option("--csv", c.csv, "Result file name inside the output directory");
  cmd->add_flag("--resume", c.resume, "Reuse completed points from an existing journal");
  cmd->add_flag("--json", c.json, "Machine-readable summary on stdout");
  cmd->add_option("--set", c.sets,
                  "Override one key as section.key=value (repeatable)");
}

void apply_sets(ExperimentConfig& cfg, const std::vector<std::string>& sets) {
  for (const std::string& s : sets) {
    const std::size_t eq = s.find('=');
    const std::size_t dot = s.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      throw validation_error("cli: --set expects section.key=value, got '" + s + "'");
    }
    corrlab::apply_config_value(cfg, s.substr(0, dot), s.substr(dot + 1, eq - dot - 1),
                                s.substr(eq + 1));
  }
}

ExperimentConfig load_config(const Common& c, const std::string& cmd_kind) {
  if (!c.preset.empty() && !c.config.empty()) {
    throw validation_error("cli: give either --config or --preset, not both");
  }
  ExperimentConfig cfg;
  if (!c.preset.empty()) {
    cfg = corrlab::preset_config(c.preset);
  } else if (!c.config.empty()) {
    cfg = corrlab::parse_config_file(c.config);
  }
  apply_sets(cfg, c.sets);
  if (!cmd_kind.empty()) {
    if (cfg.kind.empty()) {
      cfg.kind = cmd_kind;
    } else if (cfg.kind != cmd_kind) {
      throw validation_error("cli: this subcommand runs kind '" + cmd_kind +
                             "' but the configuration says '" + cfg.kind + "'");
    }
  }
  return cfg;
}

int finish_run(const Common& c, const corrlab::RunRecord& rec) {
  if (c.json) {
    ordered_json j;
    j["kind"] = rec.kind;
    j["label"] = rec.label;
    j["config_hash"] = rec.config_hash;
    j["out_dir"] = rec.out_dir;
    j["csv"] = rec.csv_path;
    j["manifest"] = rec.manifest_path;
    j["points_total"] = rec.points_total;
    j["points_resumed"] = rec.points_resumed;
    j["points_failed"] = rec.failures.size();
    j["exit_code"] = rec.exit_code;
    j["verdicts"] = rec.verdicts;
    j["warnings"] = rec.warnings;
    j["failures"] = rec.failures;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "corrlab " << rec.kind << " [" << rec.config_hash << "]: " << rec.points_total
              << " point(s), " << rec.points_resumed << " resumed, " << rec.failures.size()
              << " failed\n";
    std::cout << "  csv:      " << rec.csv_path << "\n";
    std::cout << "  manifest: " << rec.manifest_path << "\n";
    for (const auto& [k, v] : rec.verdicts) {
      std::printf("  %s = %.12g\n", k.c_str(), v);
    }
    for (const std::string& w : rec.warnings) std::cout << "  warning: " << w << "\n";
    for (const std::string& f : rec.failures) std::cout << "  failed: " << f << "\n";
  }
  return rec.exit_code;
}

int run_kind(const Common& c, const std::string& kind) {
  const ExperimentConfig cfg = load_config(c, kind);
  const std::string out =
      !c.out.empty() ? c.out : (!cfg.out.empty() ? cfg.out : "runs/" + kind);
  const corrlab::RunRecord rec =
      corrlab::run_experiment(cfg, out, c.resume, c.workers, c.csv);
  return finish_run(c, rec);
}

int run_convert(const Common& c) {
  const ExperimentConfig cfg = load_config(c, "micro-macro");
  if (!c.out.empty() || !cfg.out.empty()) return run_kind(c, "micro-macro");
  // No output directory: print the rows instead of producing artifacts.
  const ExperimentConfig r = corrlab::resolve_config(cfg);
  const std::vector<std::string> warnings = corrlab::validate_config(r);
  const std::string chash = r.hash();
  std::cout << "n,ell,t,lambda,L,T,config_hash\n";
  for (double n : r.Ns) {
    for (double ell : r.ells) {
      for (double t : r.Ts) {
        const corrlab::MacroParams mp = corrlab::micro_to_macro(n, ell, t);
        std::printf("%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%s\n", n, ell, t, mp.lambda, mp.L,
                    mp.T, chash.c_str());
      }
    }
  }
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

int run_converge(const Common& c, int levels) {
  const ExperimentConfig cfg = load_config(c, "");
  if (cfg.kind.empty()) {
    throw validation_error("converge: the configuration must set [experiment].kind");
  }
  const std::string out =
      !c.out.empty() ? c.out : (!cfg.out.empty() ? cfg.out : "runs/converge");
  const corrlab::ConvergenceReport rep = corrlab::convergence_study(cfg, levels, out);
  if (c.json) {
    ordered_json j;
    j["kind"] = cfg.kind;
    j["levels"] = ordered_json::array();
    for (const auto& l : rep.levels) {
      j["levels"].push_back({{"scale", l.scale}, {"dr", l.dr}, {"dt", l.dt}, {"value", l.value}});
    }
    j["deltas"] = rep.deltas;
    j["orders"] = rep.orders;
    j["relative_change_finest"] = rep.relative_change_finest;
    j["flagged"] = rep.flagged;
    j["csv"] = rep.csv_path;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "corrlab converge (" << cfg.kind << "): " << rep.levels.size() << " levels\n";
    for (std::size_t i = 0; i < rep.levels.size(); ++i) {
      std::printf("  level %zu: dr = %.6g, dt = %.6g, value = %.12g", i, rep.levels[i].dr,
                  rep.levels[i].dt, rep.levels[i].value);
      if (i >= 1) std::printf(", delta = %.6g", rep.deltas[i - 1]);
      if (i >= 2) std::printf(", order = %.3g", rep.orders[i - 2]);
      std::printf("\n");
    }
    std::printf("  relative change at finest refinement: %.3g%s\n",
                rep.relative_change_finest, rep.flagged ? "  (above the 2% flag)" : "");
    std::cout << "  csv: " << rep.csv_path << "\n";
  }
  return 0;
}

int run_report(const std::string& dir, bool json) {
  const std::string path = dir + "/manifest.json";
  std::ifstream in(path);
  if (!in) throw validation_error("report: cannot open '" + path + "'");
  ordered_json m;
  try {
    in >> m;
  } catch (const std::exception& e) {
    throw validation_error("report: '" + path + "' is not valid JSON: " + e.what());
  }
  if (json) {
    std::cout << m.dump(2) << "\n";
    return 0;
  }
  std::cout << "run " << m.value("kind", "?") << " [" << m.value("config_hash", "?") << "]";
  const std::string label = m.value("label", "");
  if (!label.empty()) std::cout << " label=" << label;
  std::cout << "\n";
  std::cout << "  tool " << m.value("tool", "?") << " " << m.value("version", "?") << ", "
            << m.value("started_at", "?") << " .. " << m.value("finished_at", "?") << "\n";
  std::cout << "  points: " << m.value("points_total", 0) << " total, "
            << m.value("points_resumed", 0) << " resumed, " << m.value("points_failed", 0)
            << " failed, exit code " << m.value("exit_code", 0) << "\n";
  const std::string csv = dir + "/" + m.value("csv", "results.csv");
  std::size_t rows = 0;
  std::ifstream cf(csv);
  std::string line;
  while (std::getline(cf, line)) ++rows;
  if (rows > 0) --rows;  // header
  std::cout << "  csv: " << csv << " (" << rows << " rows, schema " << m.value("schema", "?")
            << ")\n";
  if (m.contains("verdicts")) {
    for (const auto& [k, v] : m["verdicts"].items()) {
      std::printf("  %s = %.12g\n", k.c_str(), v.get<double>());
    }
  }
  if (m.contains("warnings")) {
    for (const auto& w : m["warnings"]) std::cout << "  warning: " << w.get<std::string>() << "\n";
  }
  if (m.contains("failures")) {
    for (const auto& f : m["failures"]) std::cout << "  failed: " << f.get<std::string>() << "\n";
  }
  return 0;
}

int run_evolve(const Common& c, double lambda, double t_final, const std::string& out_file) {
  ExperimentConfig cfg = load_config(c, "window");
  if (lambda > 0.0) cfg.lambdas = {lambda};
  cfg = corrlab::resolve_config(cfg);
  if (!(t_final >= 0.0)) throw validation_error("evolve: -T must be nonnegative");
  cfg.Ts = {t_final};
  const std::vector<std::string> warnings = corrlab::validate_config(cfg);

  const corrlab::PotentialSpec spec =
      cfg.potential_kind == "bump" ? corrlab::PotentialSpec::bump(cfg.v0, cfg.radius)
                                   : corrlab::PotentialSpec::square_well(cfg.v0, cfg.radius);
  const corrlab::DataProfile prof = corrlab::data_profile(cfg.profile);
  const double lam = cfg.lambdas.front();
  const double r_max = cfg.r_max > 0.0
                           ? cfg.r_max
                           : std::max(prof.support * lam * 1.05 + 16.0, 4.8 * cfg.Ls.front());
  const corrlab::RadialField base = corrlab::make_scaled_data(prof, lam, cfg.dr, r_max);

  corrlab::EvolveOptions opts;
  opts.absorbing = cfg.absorbing;
  opts.ramp_fraction = cfg.ramp_fraction;
  opts.absorber_w0 = cfg.absorber_w0;
  corrlab::EvolveReport report;
  const corrlab::RadialField evolved =
      corrlab::evolve_radial(base, spec, t_final, cfg.dt, opts, &report);
  corrlab::save_checkpoint(evolved, out_file, spec.hash(), t_final);

  if (c.json) {
    ordered_json j;
    j["lambda"] = lam;
    j["T"] = t_final;
    j["dt"] = cfg.dt;
    j["r_max"] = base.grid.r_max();
    j["mass_initial"] = report.mass_initial;
    j["mass_final"] = report.mass_final;
    j["boundary_amp"] = report.boundary_amp;
    j["checkpoint"] = out_file;
    j["warnings"] = report.warnings;
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("evolved lambda = %.6g data to T = %.6g (dt = %.6g, r_max = %.6g)\n", lam,
                t_final, cfg.dt, base.grid.r_max());
    std::printf("  mass %.12g -> %.12g, boundary amplitude %.3g\n", report.mass_initial,
                report.mass_final, report.boundary_amp);
    std::cout << "  checkpoint: " << out_file << "\n";
    for (const std::string& w : report.warnings) std::cout << "  warning: " << w << "\n";
    for (const std::string& w : warnings) std::cout << "  warning: " << w << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corrlab: desk-scale laboratory for short-range pair correlations"};
  app.set_version_flag("--version", corrlab::kVersion);
  app.require_subcommand(1);

  int rc = 0;

  // Experiment subcommands sharing the run pipeline.
  struct KindCmd {
    const char* name;
    const char* kind;
    const char* help;
  };
  const std::vector<KindCmd> kind_cmds = {
      {"scatter", "scatter", "Zero-energy pair mode, correlation profile and scattering length"},
      {"window", "window", "Window functional under pair evolution across a T ladder"},
      {"sweep", "window-sweep", "Initial window content across microscopic (N, ell) points"},
      {"dispersive", "dispersive", "Free sup-norm decay series and weighted-data inputs"},
      {"energy", "energy", "Energy moments of uncorrelated product data"},
      {"gp", "gp", "Condensate flow under first-order vs renormalized coupling"},
  };
  std::vector<std::shared_ptr<Common>> commons;
  for (const KindCmd& kc : kind_cmds) {
    auto c = std::make_shared<Common>();
    commons.push_back(c);
    CLI::App* cmd = app.add_subcommand(kc.name, kc.help);
    add_common(cmd, *c);
    const std::string kind = kc.kind;
    cmd->callback([c, kind, &rc]() { rc = run_kind(*c, kind); });
  }

  {
    auto c = std::make_shared<Common>();
    commons.push_back(c);
    CLI::App* cmd = app.add_subcommand(
        "convert", "Microscopic (N, ell, t) to macroscopic (Lambda, L, T) dictionary");
    add_common(cmd, *c);
    cmd->callback([c, &rc]() { rc = run_convert(*c); });
  }

  {
    auto c = std::make_shared<Common>();
    commons.push_back(c);
    auto levels = std::make_shared<int>(3);
    CLI::App* cmd = app.add_subcommand(
        "converge", "Grid-refinement study of the experiment's headline scalar");
    add_common(cmd, *c);
    cmd->add_option("--levels", *levels, "Number of halvings (>= 3)");
    cmd->callback([c, levels, &rc]() { rc = run_converge(*c, *levels); });
  }

  {
    auto dir = std::make_shared<std::string>();
    auto json = std::make_shared<bool>(false);
    CLI::App* cmd = app.add_subcommand("report", "Digest of a finished run directory");
    cmd->add_option("dir", *dir, "Run directory holding manifest.json")->required();
    cmd->add_flag("--json", *json, "Print the manifest verbatim");
    cmd->callback([dir, json, &rc]() { rc = run_report(*dir, *json); });
  }

  {
    auto c = std::make_shared<Common>();
    commons.push_back(c);
    auto lambda = std::make_shared<double>(0.0);
    auto t_final = std::make_shared<double>(10.0);
    auto out_file = std::make_shared<std::string>("state.csv");
    CLI::App* cmd = app.add_subcommand(
        "evolve", "One-off pair evolution of scaled data, saved as a checkpoint");
    cmd->add_option("--config", c->config, "Experiment configuration file (INI sections)");
    cmd->add_option("--preset", c->preset, "Built-in configuration");
    cmd->add_option("--set", c->sets, "Override one key as section.key=value (repeatable)");
    cmd->add_flag("--json", c->json, "Machine-readable summary on stdout");
    cmd->add_option("--lambda", *lambda, "Data scale (default: first [sweep].lambda)");
    cmd->add_option("-T,--time", *t_final, "Evolution time");
    cmd->add_option("--out", *out_file, "Checkpoint file path");
    cmd->callback([c, lambda, t_final, out_file, &rc]() {
      rc = run_evolve(*c, *lambda, *t_final, *out_file);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const corrlab::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const corrlab::resource_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return rc;
}
