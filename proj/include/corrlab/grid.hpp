#pragma once

#include <cmath>
#include <cstddef>

#include "corrlab/errors.hpp"

namespace corrlab {

/// Uniform radial grid with nodes r_i = i * dr for i = 0..n, so r_n = r_max.
struct RadialGrid {
  double dr = 0.0;
  std::size_t n = 0;

  double r(std::size_t i) const { return dr * static_cast<double>(i); }
  double r_max() const { return dr * static_cast<double>(n); }
  std::size_t size() const { return n + 1; }

  bool compatible(const RadialGrid& other, double rel_tol = 1e-12) const {
    return n == other.n && std::abs(dr - other.dr) <= rel_tol * dr;
  }
};

/// Builds a grid covering [0, r_max] with spacing dr (r_max rounded to an
/// integer number of cells).
inline RadialGrid make_grid(double dr, double r_max) {
  if (!(dr > 0.0) || !(r_max > dr)) {
    throw validation_error("make_grid: need 0 < dr < r_max");
  }
  RadialGrid g;
  g.dr = dr;
  g.n = static_cast<std::size_t>(std::llround(r_max / dr));
  if (g.n < 8) throw validation_error("make_grid: fewer than 8 cells");
  return g;
}

}  // namespace corrlab
