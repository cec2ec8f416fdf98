#include "corrlab/interp.hpp"

#include <algorithm>
#include <cmath>

#include "corrlab/errors.hpp"

namespace corrlab {

void solve_tridiagonal(const std::vector<double>& a, std::vector<double> b,
                       const std::vector<double>& c, std::vector<double>& d) {
  const std::size_t n = d.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  d[n - 1] /= b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
  }
}

// ---------------------------------------------------------------------------
// PchipInterpolant

PchipInterpolant::PchipInterpolant(double x0, double dx, std::vector<double> y)
    : x0_(x0), dx_(dx), y_(std::move(y)) {
  const std::size_t n = y_.size();
  if (n < 3 || !(dx_ > 0.0)) throw validation_error("PchipInterpolant: need >= 3 samples and dx > 0");
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y_[i + 1] - y_[i]) / dx_;
  d_.assign(n, 0.0);
  // Interior slopes: harmonic mean of neighbouring secants when they share a
  // sign (Fritsch–Carlson), zero at local extrema.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] > 0.0) {
      d_[i] = 2.0 * delta[i - 1] * delta[i] / (delta[i - 1] + delta[i]);
    }
  }
  // One-sided end slopes, limited to preserve the end interval's shape.
  auto end_slope = [](double d0, double d1) {
    double s = (3.0 * d0 - d1) / 2.0;
    if (s * d0 <= 0.0) return 0.0;
    if (std::abs(s) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return s;
  };
  d_[0] = end_slope(delta[0], delta[1]);
  d_[n - 1] = end_slope(delta[n - 2], delta[n - 3]);
}

double PchipInterpolant::x_max() const {
  return x0_ + dx_ * static_cast<double>(y_.size() - 1);
}

void PchipInterpolant::locate(double x, std::size_t& i, double& t) const {
  const std::size_t n = y_.size();
  double u = (x - x0_) / dx_;
  if (u <= 0.0) {
    i = 0;
    t = 0.0;
    return;
  }
  if (u >= static_cast<double>(n - 1)) {
    i = n - 2;
    t = 1.0;
    return;
  }
  i = static_cast<std::size_t>(u);
  t = u - static_cast<double>(i);
}

double PchipInterpolant::operator()(double x) const {
  std::size_t i;
  double t;
  locate(x, i, t);
  const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
  const double h10 = t * (1.0 - t) * (1.0 - t);
  const double h01 = t * t * (3.0 - 2.0 * t);
  const double h11 = t * t * (t - 1.0);
  return h00 * y_[i] + h10 * dx_ * d_[i] + h01 * y_[i + 1] + h11 * dx_ * d_[i + 1];
}

double PchipInterpolant::derivative(double x) const {
  std::size_t i;
  double t;
  locate(x, i, t);
  const double g00 = 6.0 * t * (t - 1.0);
  const double g10 = (1.0 - t) * (1.0 - 3.0 * t);
  const double g01 = -g00;
  const double g11 = t * (3.0 * t - 2.0);
  return (g00 * y_[i] + g01 * y_[i + 1]) / dx_ + g10 * d_[i] + g11 * d_[i + 1];
}

// ---------------------------------------------------------------------------
// CubicSpline

CubicSpline::CubicSpline(double x0, double dx, std::vector<double> y)
    : x0_(x0), dx_(dx), y_(std::move(y)) {
  build(0.0, 0.0, false);
}

CubicSpline::CubicSpline(double x0, double dx, std::vector<double> y, double yp0, double ypn)
    : x0_(x0), dx_(dx), y_(std::move(y)) {
  build(yp0, ypn, true);
}

void CubicSpline::build(double yp0, double ypn, bool clamped) {
  const std::size_t n = y_.size();
  if (n < 4 || !(dx_ > 0.0)) throw validation_error("CubicSpline: need >= 4 samples and dx > 0");
  std::vector<double> a(n, 1.0), b(n, 4.0), c(n, 1.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    d[i] = 6.0 * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) / (dx_ * dx_);
  }
  if (clamped) {
    b[0] = 2.0;
    c[0] = 1.0;
    d[0] = 6.0 * ((y_[1] - y_[0]) / dx_ - yp0) / dx_;
    a[n - 1] = 1.0;
    b[n - 1] = 2.0;
    d[n - 1] = 6.0 * (ypn - (y_[n - 1] - y_[n - 2]) / dx_) / dx_;
  } else {
    b[0] = 1.0;
    c[0] = 0.0;
    d[0] = 0.0;
    a[n - 1] = 0.0;
    b[n - 1] = 1.0;
    d[n - 1] = 0.0;
  }
  solve_tridiagonal(a, b, c, d);
  m_ = std::move(d);
}

void CubicSpline::locate(double x, std::size_t& i, double& t) const {
  const std::size_t n = y_.size();
  double u = (x - x0_) / dx_;
  u = std::clamp(u, 0.0, static_cast<double>(n - 1));
  i = std::min(static_cast<std::size_t>(u), n - 2);
  t = u - static_cast<double>(i);
}

double CubicSpline::operator()(double x) const {
  std::size_t i;
  double t;
  locate(x, i, t);
  const double s = 1.0 - t;
  return s * y_[i] + t * y_[i + 1] +
         (dx_ * dx_ / 6.0) * ((s * s * s - s) * m_[i] + (t * t * t - t) * m_[i + 1]);
}

double CubicSpline::derivative(double x) const {
  std::size_t i;
  double t;
  locate(x, i, t);
  const double s = 1.0 - t;
  return (y_[i + 1] - y_[i]) / dx_ +
         (dx_ / 6.0) * ((3.0 * t * t - 1.0) * m_[i + 1] - (3.0 * s * s - 1.0) * m_[i]);
}

}  // namespace corrlab
