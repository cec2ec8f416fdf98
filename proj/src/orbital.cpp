#include "corrlab/orbital.hpp"

#include <cmath>
#include <cstdio>

#include "corrlab/errors.hpp"
#include "corrlab/quadrature.hpp"

namespace corrlab {

InitialOrbital InitialOrbital::gaussian(double sigma, double alpha) {
  if (!(sigma > 0.0)) throw validation_error("InitialOrbital: sigma must be > 0");
  if (!(alpha > 3.0)) throw validation_error("InitialOrbital: decay exponent must exceed 3");
  InitialOrbital o;
  o.kind_ = "gaussian";
  o.sigma_ = sigma;
  o.alpha_ = alpha;
  // A exp(-r^2 / (2 sigma^2)) with ||phi||_2 = 1.
  o.amp_ = std::pow(kPi * sigma * sigma, -0.75);

  const double s2 = sigma * sigma;
  o.l4_ = std::pow(integrate_radial([&](double r) { return std::pow(o(r), 4.0); }, 0.0,
                                    12.0 * sigma, 1e-12),
                   0.25);
  o.grad_l2_ = std::sqrt(
      integrate_radial([&](double r) { return o.d1(r) * o.d1(r); }, 0.0, 12.0 * sigma, 1e-12));
  o.lap_l2_ = std::sqrt(integrate_radial(
      [&](double r) {
        const double lap = o.d2(r) + (r > 1e-12 ? 2.0 * o.d1(r) / r : 2.0 * (-o.amp_ / s2));
        return lap * lap;
      },
      1e-9, 12.0 * sigma, 1e-12));

  // Weighted sup over radial derivative orders m = 0..4. Gaussian derivatives
  // are Hermite-polynomial multiples of the profile.
  double wsup = 0.0;
  for (int k = 0; k <= 3000; ++k) {
    const double r = 12.0 * sigma * static_cast<double>(k) / 3000.0;
    const double x = r / sigma;
    const double e = o(r);
    const double w = std::pow(1.0 + r, alpha);
    const double m0 = e;
    const double m1 = std::abs(-x / sigma) * e;
    const double m2 = std::abs((x * x - 1.0) / s2) * e;
    const double m3 = std::abs((3.0 * x - x * x * x) / (s2 * sigma)) * e;
    const double m4 = std::abs((x * x * x * x - 6.0 * x * x + 3.0) / (s2 * s2)) * e;
    for (double m : {m0, m1, m2, m3, m4}) wsup = std::max(wsup, w * m);
  }
  o.weighted_sup_ = wsup;
  return o;
}

double InitialOrbital::operator()(double r) const {
  return amp_ * std::exp(-r * r / (2.0 * sigma_ * sigma_));
}

double InitialOrbital::d1(double r) const {
  return -(r / (sigma_ * sigma_)) * (*this)(r);
}

double InitialOrbital::d2(double r) const {
  const double s2 = sigma_ * sigma_;
  return ((r * r / s2 - 1.0) / s2) * (*this)(r);
}

std::string InitialOrbital::describe() const {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%s(sigma=%g, alpha=%g)", kind_.c_str(), sigma_, alpha_);
  return buf;
}

}  // namespace corrlab
