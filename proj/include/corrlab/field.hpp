#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "corrlab/grid.hpp"

namespace corrlab {

/// Complex radial wavefunction on a uniform grid. mu is the kinetic mass
/// coefficient of the dynamics the field belongs to: i d/dt psi =
/// (-mu Laplacian + V) psi. The pair (relative-coordinate) convention is
/// mu = 2; the one-body / wave-operator convention is mu = 1.
struct RadialField {
  RadialGrid grid;
  std::vector<std::complex<double>> psi;
  double mu = 2.0;
  double norm_at_construction = 0.0;
  /// Radius where an absorbing layer begins, if the field passed through one
  /// (negative = none). Lets window evaluations reject contaminated data.
  double absorber_start = -1.0;
};

RadialField make_radial_field(const RadialGrid& grid, double mu,
                              const std::function<std::complex<double>(double)>& f);

/// L2 norm sqrt(4 pi Int |psi|^2 r^2 dr) by the trapezoid rule.
double l2_norm(const RadialField& field);
double l2_distance(const RadialField& x, const RadialField& y);
double sup_norm(const RadialField& field);

/// Cubic complex field on an n^3 periodic box with spacing h, centred at the
/// origin: x_i = (i - n/2) h. Row-major storage, x fastest.
struct CartesianField {
  std::size_t n = 0;
  double h = 0.0;
  std::vector<std::complex<double>> psi;
  double mu = 2.0;

  double box_side() const { return h * static_cast<double>(n); }
  double coord(std::size_t i) const {
    return h * (static_cast<double>(i) - 0.5 * static_cast<double>(n));
  }
  std::size_t index(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return ix + n * (iy + n * iz);
  }
};

CartesianField make_cartesian_field(std::size_t n, double h, double mu,
                                    const std::function<std::complex<double>(double, double, double)>& f);

double l2_norm(const CartesianField& field);
double l2_distance(const CartesianField& x, const CartesianField& y);

/// Checkpoint file: CSV rows (r, re_psi, im_psi) preceded by '#' header lines
/// recording mu, the grid, the potential hash and the evolution time label.
void save_checkpoint(const RadialField& field, const std::string& path,
                     const std::string& potential_hash, double t_label);
RadialField load_checkpoint(const std::string& path, std::string* potential_hash = nullptr,
                            double* t_label = nullptr);

}  // namespace corrlab
