// Cubic-flow checks. The zero-coupling flow must collapse onto the exact
// spectral free propagator; conservation laws pin the splitting; and the
// twin-coupling divergence has an analytic small-time rate for the Gaussian
// orbital: for phi0 = pi^{-3/4} exp(-r^2/2) the predicted aligned slope is
// |g_b - g_a| pi^{-3/2} sqrt(3^{-3/2} - 1/8), the norm of the component of
// |phi0|^2 phi0 orthogonal to phi0.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "corrlab/errors.hpp"
#include "corrlab/field.hpp"
#include "corrlab/gp.hpp"
#include "corrlab/orbital.hpp"
#include "corrlab/propagator.hpp"

using namespace corrlab;
using cd = std::complex<double>;

namespace {
RadialField unit_gaussian(const RadialGrid& g) {
  return make_radial_field(g, 1.0, [](double r) { return cd(std::exp(-r * r / 2.0), 0.0); });
}
}  // namespace

TEST_CASE("zero coupling reduces to the exact free propagator") {
  const RadialGrid g = make_grid(0.01, 60.0);
  RadialField f = unit_gaussian(g);
  CHECK(l2_distance(evolve_gp(f, 0.0, 1.0, 0.001), evolve_free(f, 1.0, 1.0)) < 1e-10);
  CHECK(l2_distance(evolve_gp(f, 20.0, 0.0, 0.001), f) == 0.0);
}

TEST_CASE("mass and energy are conserved through the nonlinear flow") {
  const RadialGrid g = make_grid(0.01, 60.0);
  RadialField f = unit_gaussian(g);
  const double e0 = gp_energy(f, 50.0);
  RadialField out = evolve_gp(f, 50.0, 1.0, 0.0005);
  CHECK(std::abs(l2_norm(out) - l2_norm(f)) < 1e-10);
  CHECK(std::abs(gp_energy(out, 50.0) - e0) / e0 < 1e-5);
}

TEST_CASE("splitting error shrinks at second order in dt") {
  const RadialGrid g = make_grid(0.01, 60.0);
  RadialField f = unit_gaussian(g);
  RadialField s1 = evolve_gp(f, 20.0, 0.5, 0.002);
  RadialField s2 = evolve_gp(f, 20.0, 0.5, 0.001);
  RadialField s3 = evolve_gp(f, 20.0, 0.5, 0.0005);
  const double ratio = l2_distance(s1, s2) / l2_distance(s2, s3);
  CHECK(ratio > 3.8);
  CHECK(ratio < 4.2);
}

TEST_CASE("nonlinear phase substep is exact") {
  std::vector<cd> psi = {cd(0.5, 0.0), cd(0.0, 2.0)};
  gp_nonlinear_phase(psi, 3.0, 0.1);
  CHECK(std::abs(psi[0] - 0.5 * std::exp(cd(0.0, -3.0 * 0.25 * 0.1))) == 0.0);
  CHECK(std::abs(psi[1] - cd(0.0, 2.0) * std::exp(cd(0.0, -3.0 * 4.0 * 0.1))) < 1e-15);
}

TEST_CASE("twin couplings diverge at the predicted small-time rate") {
  const InitialOrbital orb = InitialOrbital::gaussian(1.0);
  const CouplingComparison cc =
      coupling_comparison(orb, 4.0, 6.0, {0.0025, 0.005, 0.0075, 0.01}, 0.0005);

  const double analytic =
      2.0 * std::pow(3.14159265358979323846, -1.5) * std::sqrt(std::pow(3.0, -1.5) - 0.125);
  CHECK(cc.rate_constant == doctest::Approx(analytic).epsilon(1e-12));

  for (std::size_t i = 0; i < cc.times.size(); ++i) {
    // Aligned distance grows linearly with slope = rate_constant to better
    // than 1% over this ladder, and alignment can only shrink the distance.
    const double slope = cc.divergence_aligned[i] / cc.times[i];
    CHECK(std::abs(slope / cc.rate_constant - 1.0) < 0.01);
    CHECK(cc.divergence_aligned[i] <= cc.divergence[i] + 1e-15);
    // Both runs conserve mass along the whole ladder.
    CHECK(std::abs(cc.mass_a[i] - cc.mass_a[0]) < 1e-10);
    CHECK(std::abs(cc.mass_b[i] - cc.mass_b[0]) < 1e-10);
  }
  CHECK(cc.divergence_aligned[0] < cc.divergence_aligned[3]);
  CHECK(cc.energy_a[0] == doctest::Approx(cc.energy_a.back()).epsilon(1e-6));

  CHECK_THROWS_AS(coupling_comparison(orb, 4.0, 6.0, {}, 0.0005), validation_error);
  CHECK_THROWS_AS(coupling_comparison(orb, 4.0, 6.0, {0.01, 0.005}, 0.0005),
                  validation_error);
}

TEST_CASE("flow guards: convention, step gates, and runaway detection") {
  const RadialGrid g = make_grid(0.01, 60.0);
  RadialField f = unit_gaussian(g);

  RadialField pair = f;
  pair.mu = 2.0;
  CHECK_THROWS_AS(evolve_gp(pair, 1.0, 0.1, 0.001), validation_error);
  CHECK_THROWS_AS(evolve_gp(f, 1.0, 0.1, 0.0), validation_error);
  CHECK_THROWS_AS(evolve_gp(f, 1.0, -0.1, 0.001), validation_error);
  // Phase rotation per step too coarse: |g| sup^2 dt = 50 * 1 * 0.005 > 0.1.
  CHECK_THROWS_AS(evolve_gp(f, 50.0, 1.0, 0.005), validation_error);

  // Non-finite amplitudes trip the runaway sentinel, not silent garbage.
  RadialField bad = f;
  bad.psi[100] = cd(std::nan(""), 0.0);
  CHECK_THROWS_AS(evolve_gp(bad, 1.0, 0.05, 0.001), numerical_error);
}
