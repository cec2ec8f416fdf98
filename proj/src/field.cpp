#include "corrlab/field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "corrlab/errors.hpp"
#include "corrlab/quadrature.hpp"

namespace corrlab {

RadialField make_radial_field(const RadialGrid& grid, double mu,
                              const std::function<std::complex<double>(double)>& f) {
  RadialField out;
  out.grid = grid;
  out.mu = mu;
  out.psi.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out.psi[i] = f(grid.r(i));
  out.norm_at_construction = l2_norm(out);
  return out;
}

double l2_norm(const RadialField& field) {
  const std::size_t n = field.grid.n;
  const double h = field.grid.dr;
  double acc = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double r = field.grid.r(i);
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    acc += w * std::norm(field.psi[i]) * r * r * h;
  }
  return std::sqrt(4.0 * kPi * acc);
}

double l2_distance(const RadialField& x, const RadialField& y) {
  if (!x.grid.compatible(y.grid)) throw validation_error("l2_distance: incompatible grids");
  const std::size_t n = x.grid.n;
  const double h = x.grid.dr;
  double acc = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double r = x.grid.r(i);
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    acc += w * std::norm(x.psi[i] - y.psi[i]) * r * r * h;
  }
  return std::sqrt(4.0 * kPi * acc);
}

double sup_norm(const RadialField& field) {
  double s = 0.0;
  for (const auto& z : field.psi) s = std::max(s, std::abs(z));
  return s;
}

CartesianField make_cartesian_field(
    std::size_t n, double h, double mu,
    const std::function<std::complex<double>(double, double, double)>& f) {
  CartesianField out;
  out.n = n;
  out.h = h;
  out.mu = mu;
  out.psi.resize(n * n * n);
  for (std::size_t iz = 0; iz < n; ++iz) {
    for (std::size_t iy = 0; iy < n; ++iy) {
      for (std::size_t ix = 0; ix < n; ++ix) {
        out.psi[out.index(ix, iy, iz)] = f(out.coord(ix), out.coord(iy), out.coord(iz));
      }
    }
  }
  return out;
}

double l2_norm(const CartesianField& field) {
  double acc = 0.0;
  for (const auto& z : field.psi) acc += std::norm(z);
  return std::sqrt(acc * field.h * field.h * field.h);
}

double l2_distance(const CartesianField& x, const CartesianField& y) {
  if (x.n != y.n || std::abs(x.h - y.h) > 1e-12 * x.h) {
    throw validation_error("l2_distance: incompatible boxes");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < x.psi.size(); ++i) acc += std::norm(x.psi[i] - y.psi[i]);
  return std::sqrt(acc * x.h * x.h * x.h);
}

void save_checkpoint(const RadialField& field, const std::string& path,
                     const std::string& potential_hash, double t_label) {
  std::ofstream out(path);
  if (!out) throw validation_error("save_checkpoint: cannot open " + path);
  char buf[160];
  out << "# corrlab-checkpoint v1\n";
  std::snprintf(buf, sizeof(buf), "# mu = %.17g\n", field.mu);
  out << buf;
  std::snprintf(buf, sizeof(buf), "# dr = %.17g\n", field.grid.dr);
  out << buf;
  std::snprintf(buf, sizeof(buf), "# n = %zu\n", field.grid.n);
  out << buf;
  out << "# potential = " << potential_hash << "\n";
  std::snprintf(buf, sizeof(buf), "# t = %.17g\n", t_label);
  out << buf;
  out << "r,re_psi,im_psi\n";
  for (std::size_t i = 0; i < field.grid.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", field.grid.r(i),
                  field.psi[i].real(), field.psi[i].imag());
    out << buf;
  }
  if (!out) throw resource_error("save_checkpoint: write failed for " + path);
}

RadialField load_checkpoint(const std::string& path, std::string* potential_hash, double* t_label) {
  std::ifstream in(path);
  if (!in) throw validation_error("load_checkpoint: cannot open " + path);
  RadialField field;
  std::string line;
  bool have_header = false;
  std::size_t expect = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string key, eq;
      ss >> key >> eq;
      if (key == "mu") ss >> field.mu;
      if (key == "dr") ss >> field.grid.dr;
      if (key == "n") ss >> field.grid.n;
      if (key == "t" && t_label) ss >> *t_label;
      if (key == "potential" && potential_hash) ss >> *potential_hash;
      continue;
    }
    if (!have_header) {  // column header row
      have_header = true;
      expect = field.grid.n + 1;
      if (expect < 2) throw validation_error("load_checkpoint: missing grid header in " + path);
      field.psi.reserve(expect);
      continue;
    }
    double r, re, im;
    if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &r, &re, &im) != 3) {
      throw validation_error("load_checkpoint: malformed row in " + path);
    }
    field.psi.emplace_back(re, im);
  }
  if (field.psi.size() != expect) {
    throw validation_error("load_checkpoint: sample count does not match header in " + path);
  }
  field.norm_at_construction = l2_norm(field);
  return field;
}

}  // namespace corrlab
