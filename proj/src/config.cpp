#include "corrlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "corrlab/errors.hpp"

namespace corrlab {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw validation_error("config: " + where + ": cannot parse '" + v + "' as a number");
  }
}

int parse_int(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw validation_error("config: " + where + ": cannot parse '" + v + "' as an integer");
  }
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw validation_error("config: " + where + ": cannot parse '" + v + "' as a boolean");
}

std::vector<double> parse_list(const std::string& v, const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw validation_error("config: " + where + ": empty list entry");
    out.push_back(parse_double(item, where));
  }
  if (out.empty()) throw validation_error("config: " + where + ": empty list");
  return out;
}

std::string fmt_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string join_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += fmt_full(v[i]);
  }
  return s;
}

bool ascending(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) return false;
  }
  return true;
}

}  // namespace

void apply_config_value(ExperimentConfig& cfg, const std::string& section,
                        const std::string& key, const std::string& value) {
  const std::string path = "[" + section + "]." + key;
  auto unknown = [&]() -> void { throw validation_error("config: unknown key " + path); };
  if (section == "experiment") {
    if (key == "kind") {
      cfg.kind = value;
    } else if (key == "label") {
      cfg.label = value;
    } else {
      unknown();
    }
  } else if (section == "potential") {
    if (key == "kind") {
      cfg.potential_kind = value;
    } else if (key == "v0") {
      cfg.v0 = parse_double(value, path);
    } else if (key == "radius") {
      cfg.radius = parse_double(value, path);
    } else {
      unknown();
    }
  } else if (section == "orbital") {
    if (key == "sigma") {
      cfg.sigma = parse_double(value, path);
    } else if (key == "alpha") {
      cfg.alpha = parse_double(value, path);
    } else {
      unknown();
    }
  } else if (section == "grid") {
    if (key == "dr") {
      cfg.dr = parse_double(value, path);
    } else if (key == "r_max") {
      cfg.r_max = parse_double(value, path);
    } else if (key == "dt") {
      cfg.dt = parse_double(value, path);
    } else {
      unknown();
    }
  } else if (section == "sweep") {
    if (key == "lambda") {
      cfg.lambdas = parse_list(value, path);
    } else if (key == "L") {
      cfg.Ls = parse_list(value, path);
    } else if (key == "T") {
      cfg.Ts = parse_list(value, path);
    } else if (key == "N") {
      cfg.Ns = parse_list(value, path);
    } else if (key == "ell") {
      cfg.ells = parse_list(value, path);
    } else if (key == "s") {
      cfg.ss = parse_list(value, path);
    } else {
      unknown();
    }
  } else if (section == "window") {
    if (key == "profile") {
      cfg.profile = value;
    } else if (key == "absorbing") {
      cfg.absorbing = parse_bool(value, path);
    } else if (key == "ramp_fraction") {
      cfg.ramp_fraction = parse_double(value, path);
    } else if (key == "absorber_w0") {
      cfg.absorber_w0 = parse_double(value, path);
    } else {
      unknown();
    }
  } else if (section == "gp") {
    if (key == "dr") {
      cfg.gp_dr = parse_double(value, path);
    } else if (key == "r_max") {
      cfg.gp_r_max = parse_double(value, path);
    } else if (key == "dt") {
      cfg.gp_dt = parse_double(value, path);
    } else {
      unknown();
    }
  } else if (section == "run") {
    if (key == "workers") {
      cfg.workers = parse_int(value, path);
    } else if (key == "out") {
      cfg.out = value;
    } else {
      unknown();
    }
  } else {
    throw validation_error("config: unknown section [" + section + "]");
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  std::set<std::string> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw validation_error("config: line " + std::to_string(lineno) +
                               ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        throw validation_error("config: line " + std::to_string(lineno) + ": empty section name");
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw validation_error("config: line " + std::to_string(lineno) +
                             ": expected 'key = value'");
    }
    if (section.empty()) {
      throw validation_error("config: line " + std::to_string(lineno) +
                             ": key outside any [section]");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw validation_error("config: line " + std::to_string(lineno) + ": empty key");
    }
    if (!seen.insert(section + "." + key).second) {
      throw validation_error("config: line " + std::to_string(lineno) + ": duplicate key [" +
                             section + "]." + key);
    }
    apply_config_value(cfg, section, key, value);
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream s;
  s << "experiment.kind = " << kind << "\n";
  s << "experiment.label = " << label << "\n";
  s << "gp.dr = " << fmt_full(gp_dr) << "\n";
  s << "gp.dt = " << fmt_full(gp_dt) << "\n";
  s << "gp.r_max = " << fmt_full(gp_r_max) << "\n";
  s << "grid.dr = " << fmt_full(dr) << "\n";
  s << "grid.dt = " << fmt_full(dt) << "\n";
  s << "grid.r_max = " << fmt_full(r_max) << "\n";
  s << "orbital.alpha = " << fmt_full(alpha) << "\n";
  s << "orbital.sigma = " << fmt_full(sigma) << "\n";
  s << "potential.kind = " << potential_kind << "\n";
  s << "potential.radius = " << fmt_full(radius) << "\n";
  s << "potential.v0 = " << fmt_full(v0) << "\n";
  s << "run.out = " << out << "\n";
  s << "run.workers = " << workers << "\n";
  s << "sweep.L = " << join_list(Ls) << "\n";
  s << "sweep.N = " << join_list(Ns) << "\n";
  s << "sweep.T = " << join_list(Ts) << "\n";
  s << "sweep.ell = " << join_list(ells) << "\n";
  s << "sweep.lambda = " << join_list(lambdas) << "\n";
  s << "sweep.s = " << join_list(ss) << "\n";
  s << "window.absorber_w0 = " << fmt_full(absorber_w0) << "\n";
  s << "window.absorbing = " << (absorbing ? "true" : "false") << "\n";
  s << "window.profile = " << profile << "\n";
  s << "window.ramp_fraction = " << fmt_full(ramp_fraction) << "\n";
  return s.str();
}

std::string ExperimentConfig::hash() const {
  const std::string text = canonical();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig cfg;
  if (name == "formation") {
    cfg.kind = "window";
    cfg.label = "formation";
    cfg.potential_kind = "bump";
    cfg.v0 = 5.0;
    cfg.radius = 1.0;
    cfg.profile = "cap";
    cfg.lambdas = {400.0};
    cfg.Ls = {4.0};
    cfg.Ts = {0.0, 20.0, 50.0, 100.0};
  } else if (name == "persistence") {
    cfg.kind = "window";
    cfg.label = "persistence";
    cfg.potential_kind = "bump";
    cfg.v0 = 5.0;
    cfg.radius = 1.0;
    cfg.profile = "cap";
    cfg.lambdas = {800.0};
    cfg.Ls = {4.0};
    cfg.Ts = {0.0, 40.0, 80.0, 120.0, 160.0, 200.0};
  } else if (name == "fn0") {
    cfg.kind = "window-sweep";
    cfg.label = "fn0";
    cfg.potential_kind = "square_well";
    cfg.v0 = 2.0;
    cfg.radius = 1.0;
    cfg.Ns = {500.0, 1000.0, 2000.0, 4000.0};
    cfg.ells = {0.05};
    cfg.Ts = {0.0};
  } else {
    throw validation_error("preset: unknown preset '" + name +
                           "' (expected formation, persistence or fn0)");
  }
  return resolve_config(cfg);
}

ExperimentConfig resolve_config(const ExperimentConfig& in) {
  ExperimentConfig cfg = in;
  if (cfg.kind == "scatter") {
    if (cfg.dr == 0.0) cfg.dr = cfg.radius / 800.0;
    if (cfg.r_max == 0.0) cfg.r_max = 8.0 * cfg.radius;
  } else if (cfg.kind == "window") {
    if (cfg.lambdas.empty()) cfg.lambdas = {400.0};
    if (cfg.Ls.empty()) cfg.Ls = {4.0};
    if (cfg.Ts.empty()) cfg.Ts = {0.0, 20.0, 50.0, 100.0};
    if (cfg.dr == 0.0) cfg.dr = 0.0125;
    if (cfg.dt == 0.0) cfg.dt = 0.02;
  } else if (cfg.kind == "window-sweep") {
    if (cfg.Ns.empty()) cfg.Ns = {500.0, 1000.0, 2000.0, 4000.0};
    if (cfg.ells.empty()) cfg.ells = {0.05};
    if (cfg.Ts.empty()) cfg.Ts = {0.0};
  } else if (cfg.kind == "micro-macro") {
    if (cfg.Ns.empty()) cfg.Ns = {100.0};
    if (cfg.ells.empty()) cfg.ells = {0.01};
    if (cfg.Ts.empty()) cfg.Ts = {1e-4};
  } else if (cfg.kind == "dispersive") {
    if (cfg.lambdas.empty()) cfg.lambdas = {100.0, 200.0, 400.0, 800.0};
    if (cfg.Ts.empty()) cfg.Ts = {1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0};
    if (cfg.ss.empty()) cfg.ss = {4.0};
    if (cfg.dr == 0.0) cfg.dr = 0.02;
  } else if (cfg.kind == "energy") {
    if (cfg.Ns.empty()) cfg.Ns = {10000.0, 20000.0};
  } else if (cfg.kind == "gp") {
    if (cfg.Ts.empty()) cfg.Ts = {0.0, 0.25, 0.5, 0.75, 1.0};
  }
  return cfg;
}

std::vector<std::string> validate_config(const ExperimentConfig& cfg) {
  std::vector<std::string> flags;
  static const std::set<std::string> kinds = {"scatter", "window",     "window-sweep",
                                              "dispersive", "energy", "gp",
                                              "micro-macro"};
  if (!kinds.count(cfg.kind)) {
    throw validation_error("config: [experiment].kind: unknown kind '" + cfg.kind + "'");
  }
  if (cfg.potential_kind != "bump" && cfg.potential_kind != "square_well") {
    throw validation_error("config: [potential].kind: expected bump or square_well, got '" +
                           cfg.potential_kind + "'");
  }
  if (!(cfg.v0 > 0.0)) throw validation_error("config: [potential].v0: must be positive");
  if (!(cfg.radius > 0.0)) throw validation_error("config: [potential].radius: must be positive");
  if (!(cfg.sigma > 0.0)) throw validation_error("config: [orbital].sigma: must be positive");
  if (!(cfg.alpha > 3.0)) {
    throw validation_error("config: [orbital].alpha: the decay class needs alpha > 3");
  }
  if (!(cfg.dr >= 0.0) || !(cfg.r_max >= 0.0) || !(cfg.dt >= 0.0)) {
    throw validation_error("config: [grid]: dr, r_max, dt must be nonnegative");
  }
  if (cfg.workers < 1 || cfg.workers > 64) {
    throw validation_error("config: [run].workers: must lie in [1, 64]");
  }
  if (cfg.profile != "cap" && cfg.profile != "expcone" && cfg.profile != "gauss") {
    throw validation_error("config: [window].profile: expected cap, expcone or gauss");
  }
  if (!(cfg.ramp_fraction > 0.0) || !(cfg.ramp_fraction < 1.0)) {
    throw validation_error("config: [window].ramp_fraction: must lie in (0, 1)");
  }
  if (!(cfg.absorber_w0 > 0.0)) {
    throw validation_error("config: [window].absorber_w0: must be positive");
  }
  if (!(cfg.gp_dr > 0.0) || !(cfg.gp_r_max > 0.0) || !(cfg.gp_dt > 0.0)) {
    throw validation_error("config: [gp]: dr, r_max, dt must be positive");
  }

  auto require_nonempty = [](const std::vector<double>& v, const std::string& path) {
    if (v.empty()) throw validation_error("config: " + path + ": list required and nonempty");
  };
  auto require_ascending = [](const std::vector<double>& v, const std::string& path) {
    if (!ascending(v)) throw validation_error("config: " + path + ": must be increasing");
  };
  auto check_micro_pairs = [&flags](const std::vector<double>& ns,
                                    const std::vector<double>& ells) {
    for (double n : ns) {
      if (!(n >= 1.0)) throw validation_error("config: [sweep].N: entries must be >= 1");
      for (double ell : ells) {
        if (!(ell > 0.0)) throw validation_error("config: [sweep].ell: entries must be positive");
        if (ell * n < 1.0 - 1e-12) {
          throw validation_error(
              "config: [sweep].ell: ell >= 1/N required (window below the interaction "
              "resolution scale)");
        }
        if (ell * std::sqrt(n) >= 1.0) {
          flags.push_back("[sweep].ell: ell is not << 1/sqrt(N) for N=" + fmt_full(n) +
                          "; outside the standing many-body band (fine for the asymptotic "
                          "constant probe)");
        }
      }
    }
  };

  if (cfg.kind == "window") {
    require_nonempty(cfg.lambdas, "[sweep].lambda");
    require_nonempty(cfg.Ls, "[sweep].L");
    require_nonempty(cfg.Ts, "[sweep].T");
    require_ascending(cfg.Ts, "[sweep].T");
    if (!(cfg.Ts.front() >= 0.0)) {
      throw validation_error("config: [sweep].T: times must be nonnegative");
    }
    for (double l : cfg.lambdas) {
      if (!(l >= 1.0)) throw validation_error("config: [sweep].lambda: entries must be >= 1");
    }
    for (double L : cfg.Ls) {
      if (!(L > 0.0)) throw validation_error("config: [sweep].L: entries must be positive");
    }
    if (!(cfg.dt > 0.0)) throw validation_error("config: [grid].dt: must be positive");
    const double lmin = *std::min_element(cfg.lambdas.begin(), cfg.lambdas.end());
    const double Lmax = *std::max_element(cfg.Ls.begin(), cfg.Ls.end());
    if (lmin <= 10.0 * Lmax) {
      flags.push_back("[sweep]: lambda <= 10 L; the window is not far below the data scale");
    }
  } else if (cfg.kind == "window-sweep") {
    require_nonempty(cfg.Ns, "[sweep].N");
    require_nonempty(cfg.ells, "[sweep].ell");
    for (double n : cfg.Ns) {
      if (std::abs(n - std::round(n)) > 1e-9) {
        throw validation_error("config: [sweep].N: entries must be integers for this kind");
      }
    }
    check_micro_pairs(cfg.Ns, cfg.ells);
    if (cfg.Ts.size() != 1 || cfg.Ts[0] != 0.0) {
      throw validation_error(
          "config: [sweep].T: window-sweep measures the initial-time functional (T = 0); use "
          "kind = window for dynamics");
    }
  } else if (cfg.kind == "micro-macro") {
    require_nonempty(cfg.Ns, "[sweep].N");
    require_nonempty(cfg.ells, "[sweep].ell");
    require_nonempty(cfg.Ts, "[sweep].T");
    for (double t : cfg.Ts) {
      if (!(t >= 0.0)) throw validation_error("config: [sweep].T: times must be nonnegative");
    }
    check_micro_pairs(cfg.Ns, cfg.ells);
  } else if (cfg.kind == "dispersive") {
    require_nonempty(cfg.lambdas, "[sweep].lambda");
    require_nonempty(cfg.Ts, "[sweep].T");
    require_nonempty(cfg.ss, "[sweep].s");
    require_ascending(cfg.Ts, "[sweep].T");
    if (!(cfg.Ts.front() >= 0.0)) {
      throw validation_error("config: [sweep].T: times must be nonnegative");
    }
    for (double l : cfg.lambdas) {
      if (!(l >= 1.0)) throw validation_error("config: [sweep].lambda: entries must be >= 1");
    }
    for (double s : cfg.ss) {
      if (std::isnan(s) || !(s >= 3.0)) {
        throw validation_error("config: [sweep].s: entries must lie in [3, inf]");
      }
    }
    int positive = 0;
    for (double t : cfg.Ts) positive += t > 0.0 ? 1 : 0;
    if (positive < 5) {
      flags.push_back("[sweep].T: fewer than 5 positive times; the decay-exponent fit is skipped");
    }
  } else if (cfg.kind == "energy") {
    require_nonempty(cfg.Ns, "[sweep].N");
    for (double n : cfg.Ns) {
      if (!(n >= 2.0)) throw validation_error("config: [sweep].N: entries must be >= 2");
    }
  } else if (cfg.kind == "gp") {
    require_nonempty(cfg.Ts, "[sweep].T");
    require_ascending(cfg.Ts, "[sweep].T");
    if (!(cfg.Ts.front() >= 0.0)) {
      throw validation_error("config: [sweep].T: times must be nonnegative");
    }
  }
  return flags;
}

}  // namespace corrlab
