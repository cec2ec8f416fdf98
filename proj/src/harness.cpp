#include "corrlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <new>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "corrlab/cutoff.hpp"
#include "corrlab/dispersive.hpp"
#include "corrlab/errors.hpp"
#include "corrlab/functionals.hpp"
#include "corrlab/gp.hpp"
#include "corrlab/orbital.hpp"
#include "corrlab/potential.hpp"
#include "corrlab/propagator.hpp"
#include "corrlab/scattering.hpp"
#include "corrlab/version.hpp"

namespace corrlab {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using cplx = std::complex<double>;

std::string fmt12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::string now_iso8601() {
  const std::time_t tt = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> split_csv(const std::string& row) {
  std::vector<std::string> out;
  std::stringstream ss(row);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

/// Result of one parameter point: CSV rows plus headline numbers and
/// warnings to merge into the run record (and into the journal, so resumed
/// points keep them).
struct PointResult {
  std::vector<std::string> rows;
  std::map<std::string, double> verdicts;
  std::vector<std::string> warnings;
};

/// One experiment, decomposed into independently computable points.
struct Plan {
  std::string header;
  std::size_t points = 0;
  std::string potential_hash;
  std::vector<std::string> notes;
  std::function<std::string(std::size_t)> describe;
  std::function<PointResult(std::size_t)> compute;
};

ScatteringSolution default_scattering(const PotentialSpec& spec, double radius) {
  return solve_zero_energy(spec, make_grid(radius / 800.0, 8.0 * radius));
}

Plan build_plan(const ExperimentConfig& cfg) {
  Plan plan;
  const std::string chash = cfg.hash();
  auto spec = std::make_shared<PotentialSpec>(cfg.potential_kind == "bump"
                                                  ? PotentialSpec::bump(cfg.v0, cfg.radius)
                                                  : PotentialSpec::square_well(cfg.v0, cfg.radius));
  const std::string phash = spec->hash();
  plan.potential_hash = phash;

  if (cfg.kind == "scatter") {
    plan.header = "r,u,omega,domega,config_hash";
    plan.points = 1;
    plan.describe = [](std::size_t) { return std::string("scatter"); };
    plan.compute = [cfg, spec, chash](std::size_t) {
      const ScatteringSolution sol = solve_zero_energy(*spec, make_grid(cfg.dr, cfg.r_max));
      PointResult pr;
      pr.rows.reserve(sol.grid.size());
      for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        pr.rows.push_back(fmt12(sol.grid.r(i)) + "," + fmt12(sol.u[i]) + "," +
                          fmt12(sol.omega[i]) + "," + fmt12(sol.domega[i]) + "," + chash);
      }
      const double a_int = scattering_length(sol, LengthMethod::integral, *spec);
      const CouplingConstants cc = coupling_constants(*spec, sol);
      pr.verdicts["a"] = sol.a;
      pr.verdicts["a_integral"] = a_int;
      pr.verdicts["sup_omega"] = sol.sup_omega;
      pr.verdicts["omega_origin"] = sol.omega[0];
      pr.verdicts["residual"] = sol.residual;
      pr.verdicts["b"] = cc.b;
      pr.verdicts["eight_pi_a"] = cc.eight_pi_a;
      pr.verdicts["excess"] = cc.excess;
      return pr;
    };
    return plan;
  }

  if (cfg.kind == "window") {
    auto sol =
        std::make_shared<ScatteringSolution>(default_scattering(*spec, cfg.radius));
    plan.header = "lambda,L,T,F,F1,F2,dr,dt,potential_hash,config_hash";
    plan.points = cfg.lambdas.size();
    plan.describe = [cfg](std::size_t i) { return "lambda=" + fmt12(cfg.lambdas[i]); };
    plan.compute = [cfg, spec, sol, chash, phash](std::size_t i) {
      const double lambda = cfg.lambdas[i];
      const DataProfile prof = data_profile(cfg.profile);
      const double l_max = *std::max_element(cfg.Ls.begin(), cfg.Ls.end());
      const double r_max = cfg.r_max > 0.0
                               ? cfg.r_max
                               : std::max(prof.support * lambda * 1.05 + 16.0, 4.8 * l_max);
      if (r_max / cfg.dr > 3e6) {
        throw resource_error("window: grid for lambda=" + fmt12(lambda) + " needs " +
                             fmt12(r_max / cfg.dr) + " nodes; refusing");
      }
      const RadialField base = make_scaled_data(prof, lambda, cfg.dr, r_max);
      RadialField part1 = base, part2 = base;
      for (std::size_t j = 0; j < base.grid.size(); ++j) {
        const double w = omega_at(*sol, 1, base.grid.r(j));
        part1.psi[j] *= w;
        part2.psi[j] *= (1.0 - w);
      }
      CutoffChi chi;
      EvolveOptions opts;
      opts.absorbing = cfg.absorbing;
      opts.ramp_fraction = cfg.ramp_fraction;
      opts.absorber_w0 = cfg.absorber_w0;
      const std::size_t n_t = cfg.Ts.size(), n_l = cfg.Ls.size();
      std::vector<std::vector<double>> F(3, std::vector<double>(n_t * n_l, 0.0));
      const RadialField* variants[3] = {&base, &part1, &part2};
      for (int v = 0; v < 3; ++v) {
        std::size_t ti = 0;
        evolve_radial_sampled(
            *variants[v], *spec, cfg.Ts, cfg.dt,
            [&](double, const RadialField& state) {
              for (std::size_t li = 0; li < n_l; ++li) {
                F[v][ti * n_l + li] = window_functional(state, *sol, cfg.Ls[li], chi);
              }
              ++ti;
            },
            opts);
      }
      PointResult pr;
      for (std::size_t ti = 0; ti < n_t; ++ti) {
        for (std::size_t li = 0; li < n_l; ++li) {
          const std::size_t k = ti * n_l + li;
          pr.rows.push_back(fmt12(lambda) + "," + fmt12(cfg.Ls[li]) + "," + fmt12(cfg.Ts[ti]) +
                            "," + fmt12(F[0][k]) + "," + fmt12(F[1][k]) + "," + fmt12(F[2][k]) +
                            "," + fmt12(cfg.dr) + "," + fmt12(cfg.dt) + "," + phash + "," +
                            chash);
        }
      }
      const std::string tag = "(lambda=" + fmt12(lambda) + ")";
      const double f0 = F[0][0];
      const double f_end = F[0][(n_t - 1) * n_l];
      pr.verdicts["F_initial" + tag] = f0;
      pr.verdicts["F_final" + tag] = f_end;
      if (f0 > 0.0) pr.verdicts["F_ratio" + tag] = f_end / f0;
      return pr;
    };
    return plan;
  }

  if (cfg.kind == "window-sweep") {
    auto sol =
        std::make_shared<ScatteringSolution>(default_scattering(*spec, cfg.radius));
    auto orbital =
        std::make_shared<InitialOrbital>(InitialOrbital::gaussian(cfg.sigma, cfg.alpha));
    plan.header =
        "n,ell,lambda,L,value,value_separable,correction_bound,asymptotic_constant,ratio,"
        "potential_hash,config_hash";
    const std::size_t n_ell = cfg.ells.size();
    plan.points = cfg.Ns.size() * n_ell;
    plan.describe = [cfg, n_ell](std::size_t i) {
      return "N=" + fmt12(cfg.Ns[i / n_ell]) + ", ell=" + fmt12(cfg.ells[i % n_ell]);
    };
    const std::size_t last = plan.points - 1;
    plan.compute = [cfg, sol, orbital, chash, phash, n_ell, last](std::size_t i) {
      const double n = cfg.Ns[i / n_ell];
      const double ell = cfg.ells[i % n_ell];
      const MacroParams mp = micro_to_macro(n, ell, 0.0);
      CutoffChi chi;
      const FnInitialResult fr = fn_initial(*orbital, *sol, std::llround(n), ell, chi);
      const double ratio = (n * n / ell) * fr.value / fr.asymptotic_constant;
      PointResult pr;
      pr.rows.push_back(fmt12(n) + "," + fmt12(ell) + "," + fmt12(mp.lambda) + "," +
                        fmt12(mp.L) + "," + fmt12(fr.value) + "," + fmt12(fr.value_separable) +
                        "," + fmt12(fr.correction_bound) + "," + fmt12(fr.asymptotic_constant) +
                        "," + fmt12(ratio) + "," + phash + "," + chash);
      pr.verdicts["ratio(N=" + fmt12(n) + ",ell=" + fmt12(ell) + ")"] = ratio;
      if (i == last) pr.verdicts["ratio_last"] = ratio;
      return pr;
    };
    return plan;
  }

  if (cfg.kind == "dispersive") {
    auto sol =
        std::make_shared<ScatteringSolution>(default_scattering(*spec, cfg.radius));
    plan.header = "lambda,t,sup_norm,grad_sup_norm,l1_norm,rhs_total,alpha,config_hash";
    plan.points = cfg.lambdas.size();
    if (cfg.ss.size() > 1) {
      plan.notes.push_back("[sweep].s: only the first entry drives the rhs estimate");
    }
    plan.describe = [cfg](std::size_t i) { return "lambda=" + fmt12(cfg.lambdas[i]); };
    plan.compute = [cfg, sol, chash](std::size_t i) {
      const double lambda = cfg.lambdas[i];
      const DataProfile prof = data_profile(cfg.profile);
      auto value = [&](double r) {
        return cplx(omega_at(*sol, 1, r) * prof.f(r / lambda), 0.0);
      };
      // Size the grid from the data's own bandwidth: populated modes travel
      // at speed 2k, so the box must outrun them over the whole horizon.
      // Guard before allocating anything: even the bandwidth probe spans the
      // whole data support, so an oversized lambda must be refused up front.
      const double probe_extent = prof.support * lambda + 64.0;
      if (probe_extent / cfg.dr > 8e6) {
        throw resource_error("dispersive: grid for lambda=" + fmt12(lambda) + " needs " +
                             fmt12(probe_extent / cfg.dr) + " nodes; refusing");
      }
      const RadialField probe =
          make_radial_field(make_grid(cfg.dr, probe_extent), 1.0, value);
      const double k_eff = spectral_band(probe, 1e-6);
      const double t_max = cfg.Ts.back();
      const double r_max = prof.support * lambda + 2.2 * k_eff * t_max + 32.0;
      if (r_max / cfg.dr > 8e6) {
        throw resource_error("dispersive: grid for lambda=" + fmt12(lambda) + " needs " +
                             fmt12(r_max / cfg.dr) + " nodes; refusing");
      }
      const RadialField data = make_radial_field(make_grid(cfg.dr, r_max), 1.0, value);
      const DecaySeries series = supnorm_series(data, cfg.Ts);
      const RhsReport rhs = estimate_rhs(data, cfg.ss[0]);
      const double l1 = l1_norm(data);

      std::vector<double> ft, fv;
      for (std::size_t j = 0; j < series.times.size(); ++j) {
        if (series.times[j] > 0.0 && series.sup[j] > 0.0) {
          ft.push_back(series.times[j]);
          fv.push_back(series.sup[j]);
        }
      }
      PointResult pr;
      const std::string tag = "(lambda=" + fmt12(lambda) + ")";
      std::string alpha_cell;
      if (ft.size() >= 5) {
        const ExponentFit fit = fit_exponent(ft, fv);
        alpha_cell = fmt12(fit.alpha);
        pr.verdicts["alpha" + tag] = fit.alpha;
        pr.verdicts["fit_residual" + tag] = fit.residual;
      } else {
        pr.warnings.push_back("lambda=" + fmt12(lambda) +
                              ": fewer than 5 positive samples; exponent fit skipped");
      }
      for (std::size_t j = 0; j < series.times.size(); ++j) {
        pr.rows.push_back(fmt12(lambda) + "," + fmt12(series.times[j]) + "," +
                          fmt12(series.sup[j]) + "," + fmt12(series.grad_sup[j]) + "," +
                          fmt12(l1) + "," + fmt12(rhs.total) + "," + alpha_cell + "," + chash);
      }
      pr.verdicts["l1" + tag] = l1;
      pr.verdicts["rhs_total" + tag] = rhs.total;
      pr.verdicts["sup_final" + tag] = series.sup.back();
      for (const std::string& w : series.warnings) {
        pr.warnings.push_back("lambda=" + fmt12(lambda) + ": " + w);
      }
      return pr;
    };
    return plan;
  }

  if (cfg.kind == "energy") {
    auto orbital =
        std::make_shared<InitialOrbital>(InitialOrbital::gaussian(cfg.sigma, cfg.alpha));
    plan.header = "n,e1_per_n,e1_limit,h2_per_n3,h2_limit,gap,gap_leading,potential_hash,"
                  "config_hash";
    plan.points = cfg.Ns.size();
    plan.describe = [cfg](std::size_t i) { return "N=" + fmt12(cfg.Ns[i]); };
    plan.compute = [cfg, spec, orbital, chash, phash](std::size_t i) {
      const double n = cfg.Ns[i];
      const HamiltonianMoments hm = hamiltonian_moments(*orbital, *spec, n);
      const double gap = hm.e1_limit - hm.e1_per_N;
      const double gap_leading = hm.diagnostics.at("gap_leading");
      PointResult pr;
      pr.rows.push_back(fmt12(n) + "," + fmt12(hm.e1_per_N) + "," + fmt12(hm.e1_limit) + "," +
                        fmt12(hm.h2_leading_per_N3) + "," + fmt12(hm.h2_limit) + "," +
                        fmt12(gap) + "," + fmt12(gap_leading) + "," + phash + "," + chash);
      const std::string tag = "(N=" + fmt12(n) + ")";
      pr.verdicts["e1_rel" + tag] = std::abs(hm.e1_per_N / hm.e1_limit - 1.0);
      pr.verdicts["h2_rel" + tag] = std::abs(hm.h2_leading_per_N3 / hm.h2_limit - 1.0);
      pr.verdicts["gap" + tag] = gap;
      return pr;
    };
    return plan;
  }

  if (cfg.kind == "gp") {
    auto sol =
        std::make_shared<ScatteringSolution>(default_scattering(*spec, cfg.radius));
    auto orbital =
        std::make_shared<InitialOrbital>(InitialOrbital::gaussian(cfg.sigma, cfg.alpha));
    plan.header =
        "t,mass_a,energy_a,mass_b,energy_b,divergence,divergence_aligned,rate_constant,"
        "config_hash";
    plan.points = 1;
    plan.describe = [](std::size_t) { return std::string("gp"); };
    plan.compute = [cfg, spec, sol, orbital, chash](std::size_t) {
      const CouplingConstants cc = coupling_constants(*spec, *sol);
      GpOptions gopts;
      gopts.dr = cfg.gp_dr;
      gopts.r_max = cfg.gp_r_max;
      const CouplingComparison cmp =
          coupling_comparison(*orbital, cc.eight_pi_a, cc.b, cfg.Ts, cfg.gp_dt, gopts);
      PointResult pr;
      for (std::size_t j = 0; j < cmp.times.size(); ++j) {
        pr.rows.push_back(fmt12(cmp.times[j]) + "," + fmt12(cmp.mass_a[j]) + "," +
                          fmt12(cmp.energy_a[j]) + "," + fmt12(cmp.mass_b[j]) + "," +
                          fmt12(cmp.energy_b[j]) + "," + fmt12(cmp.divergence[j]) + "," +
                          fmt12(cmp.divergence_aligned[j]) + "," + fmt12(cmp.rate_constant) +
                          "," + chash);
      }
      double mass_drift = 0.0, energy_drift = 0.0;
      for (std::size_t j = 0; j < cmp.times.size(); ++j) {
        if (cmp.mass_a.front() > 0.0) {
          mass_drift = std::max(mass_drift, std::abs(cmp.mass_a[j] / cmp.mass_a.front() - 1.0));
        }
        if (cmp.energy_a.front() != 0.0) {
          energy_drift =
              std::max(energy_drift, std::abs(cmp.energy_a[j] / cmp.energy_a.front() - 1.0));
        }
      }
      pr.verdicts["g_a"] = cc.eight_pi_a;
      pr.verdicts["g_b"] = cc.b;
      pr.verdicts["rate_constant"] = cmp.rate_constant;
      pr.verdicts["mass_drift"] = mass_drift;
      pr.verdicts["energy_drift"] = energy_drift;
      pr.verdicts["divergence_aligned_final"] = cmp.divergence_aligned.back();
      return pr;
    };
    return plan;
  }

  if (cfg.kind == "micro-macro") {
    plan.header = "n,ell,t,lambda,L,T,config_hash";
    plan.points = 1;
    plan.potential_hash = "";
    plan.describe = [](std::size_t) { return std::string("micro-macro"); };
    plan.compute = [cfg, chash](std::size_t) {
      PointResult pr;
      bool first = true;
      for (double n : cfg.Ns) {
        for (double ell : cfg.ells) {
          for (double t : cfg.Ts) {
            const MacroParams mp = micro_to_macro(n, ell, t);
            pr.rows.push_back(fmt12(n) + "," + fmt12(ell) + "," + fmt12(t) + "," +
                              fmt12(mp.lambda) + "," + fmt12(mp.L) + "," + fmt12(mp.T) + "," +
                              chash);
            if (first) {
              pr.verdicts["lambda_first"] = mp.lambda;
              pr.verdicts["L_first"] = mp.L;
              pr.verdicts["T_first"] = mp.T;
              first = false;
            }
          }
        }
      }
      return pr;
    };
    return plan;
  }

  throw validation_error("run: unknown experiment kind '" + cfg.kind + "'");
}

int error_class(const std::exception& e) {
  if (dynamic_cast<const validation_error*>(&e)) return 2;
  if (dynamic_cast<const resource_error*>(&e)) return 4;
  return 3;
}

}  // namespace

RunRecord run_experiment(const ExperimentConfig& cfg_in, const std::string& out_dir,
                         bool resume, int workers_override, const std::string& csv_name) {
  const ExperimentConfig cfg = resolve_config(cfg_in);

  RunRecord rec;
  rec.started_at = now_iso8601();
  rec.kind = cfg.kind;
  rec.label = cfg.label;
  rec.config_hash = cfg.hash();
  rec.code_version = kVersion;
  rec.out_dir = out_dir;
  rec.warnings = validate_config(cfg);

  Plan plan = build_plan(cfg);
  rec.csv_header = plan.header;
  rec.points_total = plan.points;
  for (const std::string& n : plan.notes) rec.warnings.push_back(n);

  fs::create_directories(out_dir);
  const std::string journal_path = out_dir + "/journal.jsonl";

  std::vector<PointResult> results(plan.points);
  std::vector<char> have(plan.points, 0);
  std::vector<std::string> fail_msg(plan.points);
  std::vector<int> fail_code(plan.points, 0);

  // Resume scan: reuse completed points bitwise. A truncated trailing line
  // (crash mid-write) ends the scan; everything before it is intact because
  // each point is flushed as one whole line.
  bool journal_reusable = false;
  if (resume && fs::exists(journal_path)) {
    std::ifstream in(journal_path);
    std::string line;
    if (std::getline(in, line)) {
      ordered_json j;
      bool parsed = true;
      try {
        j = ordered_json::parse(line);
      } catch (const std::exception&) {
        parsed = false;
      }
      if (parsed && j.value("journal", "") == "corrlab") {
        if (j.value("config_hash", "") != rec.config_hash ||
            j.value("csv_header", "") != plan.header) {
          throw validation_error("resume: journal at '" + journal_path +
                                 "' belongs to a different configuration");
        }
        journal_reusable = true;
        while (std::getline(in, line)) {
          ordered_json p;
          try {
            p = ordered_json::parse(line);
          } catch (const std::exception&) {
            break;
          }
          const std::string key = p.value("key", "");
          if (key.rfind("point-", 0) != 0) continue;
          std::size_t idx = 0;
          try {
            idx = std::stoul(key.substr(6));
          } catch (const std::exception&) {
            continue;
          }
          if (idx >= plan.points || have[idx]) continue;
          PointResult pr;
          for (const auto& r : p.at("rows")) pr.rows.push_back(r.get<std::string>());
          if (p.contains("verdicts")) {
            for (const auto& [k, v] : p.at("verdicts").items()) {
              pr.verdicts[k] = v.get<double>();
            }
          }
          if (p.contains("warnings")) {
            for (const auto& w : p.at("warnings")) pr.warnings.push_back(w.get<std::string>());
          }
          results[idx] = std::move(pr);
          have[idx] = 1;
          ++rec.points_resumed;
        }
      }
    }
  }

  std::ofstream journal;
  if (journal_reusable) {
    journal.open(journal_path, std::ios::app);
  } else {
    journal.open(journal_path, std::ios::trunc);
    ordered_json head;
    head["journal"] = "corrlab";
    head["config_hash"] = rec.config_hash;
    head["csv_header"] = plan.header;
    head["kind"] = cfg.kind;
    journal << head.dump() << "\n";
    journal.flush();
  }
  if (!journal) throw resource_error("run: cannot write journal at '" + journal_path + "'");

  std::mutex mtx;
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= plan.points) return;
      if (have[i]) continue;
      PointResult pr;
      int code = 0;
      std::string err;
      try {
        pr = plan.compute(i);
      } catch (const std::bad_alloc&) {
        code = 4;
        err = "out of memory";
      } catch (const std::exception& e) {
        code = error_class(e);
        err = e.what();
      }
      if (code == 0) {
        ordered_json entry;
        entry["key"] = "point-" + std::to_string(i);
        entry["rows"] = pr.rows;
        entry["verdicts"] = pr.verdicts;
        entry["warnings"] = pr.warnings;
        {
          std::lock_guard<std::mutex> lk(mtx);
          journal << entry.dump() << "\n";
          journal.flush();
        }
        results[i] = std::move(pr);
        have[i] = 1;
      } else {
        fail_code[i] = code;
        fail_msg[i] = err;
      }
    }
  };

  int n_workers = workers_override > 0 ? workers_override : cfg.workers;
  n_workers = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(std::max(1, n_workers)), plan.points));
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  for (std::size_t i = 0; i < plan.points; ++i) {
    if (have[i]) {
      for (const std::string& r : results[i].rows) rec.csv_rows.push_back(r);
      for (const auto& [k, v] : results[i].verdicts) rec.verdicts[k] = v;
      for (const std::string& w : results[i].warnings) rec.warnings.push_back(w);
    } else {
      rec.failures.push_back(plan.describe(i) + ": " + fail_msg[i]);
      if (rec.exit_code == 0) rec.exit_code = fail_code[i];
    }
  }

  rec.csv_path = out_dir + "/" + csv_name;
  {
    std::ofstream csv(rec.csv_path, std::ios::binary | std::ios::trunc);
    if (!csv) throw resource_error("run: cannot write '" + rec.csv_path + "'");
    csv << plan.header << "\n";
    for (const std::string& r : rec.csv_rows) csv << r << "\n";
  }

  rec.finished_at = now_iso8601();
  rec.manifest_path = out_dir + "/manifest.json";
  {
    ordered_json m;
    m["tool"] = "corrlab";
    m["version"] = rec.code_version;
    m["kind"] = rec.kind;
    m["label"] = rec.label;
    m["config_hash"] = rec.config_hash;
    m["potential_hash"] = plan.potential_hash;
    m["csv"] = csv_name;
    m["schema"] = plan.header;
    m["points_total"] = rec.points_total;
    m["points_resumed"] = rec.points_resumed;
    m["points_failed"] = rec.failures.size();
    m["exit_code"] = rec.exit_code;
    m["started_at"] = rec.started_at;
    m["finished_at"] = rec.finished_at;
    m["config"] = cfg.canonical();
    m["warnings"] = rec.warnings;
    m["failures"] = rec.failures;
    m["verdicts"] = rec.verdicts;
    std::ofstream mf(rec.manifest_path, std::ios::binary | std::ios::trunc);
    if (!mf) throw resource_error("run: cannot write '" + rec.manifest_path + "'");
    mf << m.dump(2) << "\n";
  }
  return rec;
}

namespace {

double headline_value(const RunRecord& rr, const std::string& kind) {
  if (kind == "scatter") return rr.verdicts.at("a");
  if (rr.csv_rows.empty()) throw numerical_error("convergence: level produced no rows");
  const std::vector<std::string> cells = split_csv(rr.csv_rows.back());
  std::size_t col = 0;
  if (kind == "window") {
    col = 3;  // F
  } else if (kind == "dispersive") {
    col = 2;  // sup_norm
  } else if (kind == "gp") {
    col = 6;  // divergence_aligned
  } else {
    throw validation_error("convergence: no headline scalar for kind '" + kind + "'");
  }
  if (col >= cells.size()) throw numerical_error("convergence: malformed result row");
  return std::stod(cells[col]);
}

}  // namespace

ConvergenceReport convergence_study(const ExperimentConfig& cfg_in,
                                    const std::vector<double>& level_scales,
                                    const std::string& out_dir) {
  if (level_scales.size() < 3) {
    throw validation_error("convergence: need at least 3 refinement levels");
  }
  for (double s : level_scales) {
    if (std::isnan(s) || !(s >= 1.0)) {
      throw validation_error("convergence: refinement factors must be >= 1");
    }
  }
  const ExperimentConfig base = resolve_config(cfg_in);
  validate_config(base);
  static const std::set<std::string> refinable = {"scatter", "window", "dispersive", "gp"};
  if (!refinable.count(base.kind)) {
    throw validation_error("convergence: kind '" + base.kind +
                           "' is quadrature-backed; there is no grid to refine");
  }

  // Size guard before anything launches: project the finest level.
  const double s_max = *std::max_element(level_scales.begin(), level_scales.end());
  double nodes = 0.0, steps = 0.0;
  if (base.kind == "scatter") {
    nodes = base.r_max / (base.dr / s_max);
  } else if (base.kind == "window") {
    const double lam = *std::max_element(base.lambdas.begin(), base.lambdas.end());
    const double l_max = *std::max_element(base.Ls.begin(), base.Ls.end());
    const double support = data_profile(base.profile).support;
    const double r_max =
        base.r_max > 0.0 ? base.r_max : std::max(support * lam * 1.05 + 16.0, 4.8 * l_max);
    nodes = r_max / (base.dr / s_max);
    steps = 3.0 * base.Ts.back() / (base.dt / s_max);
  } else if (base.kind == "dispersive") {
    const double lam = *std::max_element(base.lambdas.begin(), base.lambdas.end());
    const double support = data_profile(base.profile).support;
    nodes = (support * lam + 2.2 * 100.0 * base.Ts.back() + 32.0) / (base.dr / s_max);
    steps = static_cast<double>(base.Ts.size());
  } else if (base.kind == "gp") {
    nodes = base.gp_r_max / (base.gp_dr / s_max);
    steps = 2.0 * base.Ts.back() / (base.gp_dt / s_max);
  }
  if (nodes > 8e6) {
    throw resource_error("convergence: finest level needs about " + fmt12(nodes) +
                         " grid nodes; refusing before launch");
  }
  if (nodes * std::max(steps, 1.0) > 4e10) {
    throw resource_error("convergence: finest level projects " + fmt12(nodes * steps) +
                         " node-steps; refusing before launch");
  }

  fs::create_directories(out_dir);
  ConvergenceReport rep;
  for (std::size_t li = 0; li < level_scales.size(); ++li) {
    ExperimentConfig c = base;
    const double s = level_scales[li];
    if (c.kind == "gp") {
      c.gp_dr = base.gp_dr / s;
      c.gp_dt = base.gp_dt / s;
    } else {
      c.dr = base.dr / s;
      if (base.dt > 0.0) c.dt = base.dt / s;
    }
    const RunRecord rr = run_experiment(c, out_dir + "/level-" + std::to_string(li));
    if (rr.exit_code != 0) {
      throw numerical_error("convergence: level " + std::to_string(li) +
                            " failed: " + rr.failures.front());
    }
    ConvergenceLevel lvl;
    lvl.scale = s;
    lvl.dr = (c.kind == "gp") ? c.gp_dr : c.dr;
    lvl.dt = (c.kind == "gp") ? c.gp_dt : c.dt;
    lvl.value = headline_value(rr, c.kind);
    rep.levels.push_back(lvl);
  }

  for (std::size_t i = 1; i < rep.levels.size(); ++i) {
    rep.deltas.push_back(std::abs(rep.levels[i].value - rep.levels[i - 1].value));
  }
  for (std::size_t i = 1; i < rep.deltas.size(); ++i) {
    const double prev = rep.deltas[i - 1], cur = rep.deltas[i];
    rep.orders.push_back((prev > 0.0 && cur > 0.0) ? std::log2(prev / cur) : 0.0);
  }
  const double v_last = rep.levels.back().value;
  rep.relative_change_finest =
      rep.deltas.back() / std::max(std::abs(v_last), 1e-300);
  rep.flagged = rep.relative_change_finest > 0.02;

  rep.csv_path = out_dir + "/converge.csv";
  {
    std::ofstream csv(rep.csv_path, std::ios::binary | std::ios::trunc);
    if (!csv) throw resource_error("convergence: cannot write '" + rep.csv_path + "'");
    csv << "level,dr,dt,value,delta,order,config_hash\n";
    const std::string chash = base.hash();
    for (std::size_t i = 0; i < rep.levels.size(); ++i) {
      csv << i << "," << fmt12(rep.levels[i].dr) << "," << fmt12(rep.levels[i].dt) << ","
          << fmt12(rep.levels[i].value) << ",";
      if (i >= 1) csv << fmt12(rep.deltas[i - 1]);
      csv << ",";
      if (i >= 2) csv << fmt12(rep.orders[i - 2]);
      csv << "," << chash << "\n";
    }
  }
  return rep;
}

ConvergenceReport convergence_study(const ExperimentConfig& cfg, int levels,
                                    const std::string& out_dir) {
  if (levels < 3) throw validation_error("convergence: need at least 3 refinement levels");
  std::vector<double> scales;
  for (int i = 0; i < levels; ++i) scales.push_back(std::pow(2.0, i));
  return convergence_study(cfg, scales, out_dir);
}

}  // namespace corrlab
