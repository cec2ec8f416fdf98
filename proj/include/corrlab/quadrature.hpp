#pragma once

#include <numbers>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace corrlab {

inline constexpr double kPi = std::numbers::pi;

/// Adaptive Gauss–Kronrod integral of f over [a, b] with relative tolerance
/// rel_tol. Returns 0 for empty intervals.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10) {
  if (!(b > a)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      std::forward<F>(f), a, b, 15, rel_tol);
}

/// Volume integral of a radial profile: 4*pi * Int_a^b f(r) r^2 dr.
template <class F>
double integrate_radial(F&& f, double a, double b, double rel_tol = 1e-10) {
  auto g = [&f](double r) { return f(r) * r * r; };
  return 4.0 * kPi * integrate(g, a, b, rel_tol);
}

}  // namespace corrlab
