#include "corrlab/cutoff.hpp"

#include <cmath>

#include "corrlab/errors.hpp"
#include "corrlab/quadrature.hpp"

namespace corrlab {

namespace {
double g(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
}  // namespace

CutoffChi::CutoffChi() {
  l1_mass_ = 1.0 + integrate([this](double x) { return (*this)(x); }, 1.0, 2.0, 1e-12);
  if (!(l1_mass_ >= 1.0 && l1_mass_ <= 2.0)) {
    throw numerical_error("CutoffChi: half-line mass escaped [1, 2]");
  }
}

double CutoffChi::operator()(double x) const {
  x = std::abs(x);
  if (x <= 1.0) return 1.0;
  if (x >= 2.0) return 0.0;
  const double up = g(2.0 - x);
  return up / (up + g(x - 1.0));
}

double CutoffChi::junction_defect() const {
  // One-sided 5-point differences for orders 1..4, evaluated a small offset
  // inside the transition next to each junction.
  const double h = 0.004;
  double worst = 0.0;
  for (double x0 : {1.02, 1.98}) {
    double f[5];
    const double dir = (x0 < 1.5) ? -1.0 : 1.0;  // step toward the junction
    for (int k = 0; k < 5; ++k) f[k] = (*this)(x0 + dir * h * k) - ((x0 < 1.5) ? 1.0 : 0.0);
    const double d1 = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    const double d2 = (35.0 * f[0] - 104.0 * f[1] + 114.0 * f[2] - 56.0 * f[3] + 11.0 * f[4]) / (12.0 * h * h);
    const double d3 = (-5.0 * f[0] + 18.0 * f[1] - 24.0 * f[2] + 14.0 * f[3] - 3.0 * f[4]) / (2.0 * h * h * h);
    const double d4 = (f[0] - 4.0 * f[1] + 6.0 * f[2] - 4.0 * f[3] + f[4]) / (h * h * h * h);
    for (double d : {d1, d2, d3, d4}) worst = std::max(worst, std::abs(d));
    worst = std::max(worst, std::abs(f[0]));
  }
  return worst;
}

}  // namespace corrlab
