#pragma once

#include <cstddef>
#include <vector>

namespace corrlab {

/// Monotonicity-preserving piecewise-cubic Hermite interpolant on a uniform
/// grid (Fritsch–Carlson limited slopes). Evaluation clamps to the data range.
class PchipInterpolant {
 public:
  PchipInterpolant() = default;
  PchipInterpolant(double x0, double dx, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;

  double x_min() const { return x0_; }
  double x_max() const;

 private:
  void locate(double x, std::size_t& i, double& t) const;

  double x0_ = 0.0;
  double dx_ = 1.0;
  std::vector<double> y_;
  std::vector<double> d_;  // node slopes
};

/// C^2 cubic spline on a uniform grid. Boundary conditions: natural (zero
/// second derivative) or clamped (prescribed end slopes).
class CubicSpline {
 public:
  CubicSpline() = default;
  /// Natural spline.
  CubicSpline(double x0, double dx, std::vector<double> y);
  /// Clamped spline with end slopes yp0, ypn.
  CubicSpline(double x0, double dx, std::vector<double> y, double yp0, double ypn);

  double operator()(double x) const;
  double derivative(double x) const;

 private:
  void build(double yp0, double ypn, bool clamped);
  void locate(double x, std::size_t& i, double& t) const;

  double x0_ = 0.0;
  double dx_ = 1.0;
  std::vector<double> y_;
  std::vector<double> m_;  // node second derivatives
};

/// Solves a tridiagonal system (a = sub-, b = main, c = super-diagonal) in
/// place; d holds the right-hand side on input and the solution on output.
void solve_tridiagonal(const std::vector<double>& a, std::vector<double> b,
                       const std::vector<double>& c, std::vector<double>& d);

}  // namespace corrlab
