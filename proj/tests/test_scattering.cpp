// Zero-energy mode checks. The square well has a complete closed-form
// solution (interior sinh profile), which pins the scattering length, the
// correlation profile and its origin value exactly. The smooth bump has no
// closed form; its length is frozen from an independent high-accuracy ODE
// integration (8th-order Runge-Kutta at rtol 1e-13, exterior-line read-off,
// stable to 12 digits against endpoint choice).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "corrlab/errors.hpp"
#include "corrlab/potential.hpp"
#include "corrlab/scattering.hpp"

using namespace corrlab;

namespace {

// Closed forms for the square well of amplitude V0 and radius R: with
// kappa = sqrt(V0/2) the interior mode is u = sinh(kappa r)/(kappa cosh(kappa R))
// (normalized to exterior slope 1), so
//   a        = R - tanh(kappa R)/kappa
//   omega(0) = 1 - sech(kappa R)
//   omega(r) = 1 - sinh(kappa r)/(kappa r cosh(kappa R))  for 0 < r < R.
const double kKappa = 1.0;  // V0 = 2, R = 1
const double kAExact = 1.0 - std::tanh(1.0);
const double kOmega0Exact = 1.0 - 1.0 / std::cosh(1.0);
double omega_exact(double r) { return 1.0 - std::sinh(r) / (r * std::cosh(1.0)); }

}  // namespace

TEST_CASE("square well: scattering length and profile against closed forms") {
  const PotentialSpec well = PotentialSpec::square_well(2.0, 1.0);
  const ScatteringSolution sol = solve_zero_energy(well, make_grid(1e-4, 8.0));

  CHECK(std::abs(sol.a - kAExact) < 1e-8);
  CHECK(std::abs(sol.omega[0] - kOmega0Exact) < 1e-8);
  CHECK(std::abs(omega_at(sol, 1, 0.5) - omega_exact(0.5)) < 1e-8);
  CHECK(std::abs(omega_at(sol, 1, 0.93) - omega_exact(0.93)) < 1e-8);
  CHECK(sol.potential_hash == well.hash());
  CHECK(sol.support_radius == doctest::Approx(1.0));

  // The normalized mode is the exterior line r - a beyond the support.
  for (double r : {4.0, 6.0, 8.0}) {
    const std::size_t i = static_cast<std::size_t>(std::llround(r / sol.grid.dr));
    CHECK(std::abs(sol.u[i] - (r - kAExact)) < 1e-8);
  }

  // The profile decreases from its origin maximum and stays below one.
  CHECK(sol.sup_omega == doctest::Approx(sol.omega[0]).epsilon(1e-12));
  CHECK(sol.sup_omega < 1.0);
  CHECK(kKappa == 1.0);
}

TEST_CASE("square well: closed-form error shrinks at second order in dr") {
  // The midpoint treatment of the jump caps the scheme at O(dr^2) for this
  // profile; the measured order against the exact length must sit near 2.
  const PotentialSpec well = PotentialSpec::square_well(2.0, 1.0);
  const double e1 =
      std::abs(solve_zero_energy(well, make_grid(5e-3, 8.0)).a - kAExact);
  const double e2 =
      std::abs(solve_zero_energy(well, make_grid(1e-3, 8.0)).a - kAExact);
  const double order = std::log(e1 / e2) / std::log(5.0);
  CHECK(order > 1.8);
  CHECK(order < 2.2);
}

TEST_CASE("bump: scattering length against the independent ODE oracle") {
  // Frozen reference a = 0.172557343799456 (V0 = 5, R = 1), from DOP853 at
  // rtol 1e-13 with the exterior-line read-off at r = 6 and r = 8 agreeing
  // to 15 digits.
  const PotentialSpec bump = PotentialSpec::bump(5.0, 1.0);
  const ScatteringSolution sol = solve_zero_energy(bump, make_grid(1.0 / 800, 8.0));
  CHECK(std::abs(sol.a - 0.172557343799456) < 1e-10);
}

TEST_CASE("both length routes agree") {
  // The exterior-line intercept and the integral identity
  // a = (1/2) Int V u r dr are independent extractions of the same number.
  const PotentialSpec well = PotentialSpec::square_well(2.0, 1.0);
  const ScatteringSolution sol = solve_zero_energy(well, make_grid(1e-4, 8.0));
  const double a_asym = scattering_length(sol, LengthMethod::asymptotic, well);
  const double a_int = scattering_length(sol, LengthMethod::integral, well);
  CHECK(std::abs(a_asym - a_int) < 1e-6);
  CHECK(std::abs(a_asym - sol.a) < 1e-12);

  const PotentialSpec bump = PotentialSpec::bump(5.0, 1.0);
  const ScatteringSolution bsol = solve_zero_energy(bump, make_grid(1.0 / 800, 8.0));
  CHECK(std::abs(scattering_length(bsol, LengthMethod::asymptotic, bump) -
                 scattering_length(bsol, LengthMethod::integral, bump)) < 1e-6);
}

TEST_CASE("rescaled potential reproduces the length exactly in scale") {
  // a(V_N) = a(V)/N: solving the N-rescaled problem on the N-refined grid is
  // the same discrete problem in rescaled variables, so N * a(V_N) matches
  // the base-grid length to roundoff (the shared O(dr^2) discretization
  // error cancels). Both must also sit near the continuum value.
  const PotentialSpec well = PotentialSpec::square_well(2.0, 1.0);
  const double a_base = solve_zero_energy(well, make_grid(1.0 / 800, 8.0)).a;
  CHECK(std::abs(a_base - kAExact) < 5e-7);
  for (long N : {10L, 100L}) {
    const double dn = static_cast<double>(N);
    const PotentialSpec scaled = scale_potential(well, N);
    const ScatteringSolution sol =
        solve_zero_energy(scaled, make_grid(1.0 / (800.0 * dn), 8.0 / dn));
    CHECK(std::abs(dn * sol.a - a_base) < 1e-10);
    CHECK(std::abs(dn * sol.a - kAExact) < 5e-7);
  }
}

TEST_CASE("off-grid profile queries: exterior branch is exact") {
  const PotentialSpec well = PotentialSpec::square_well(2.0, 1.0);
  const ScatteringSolution sol = solve_zero_energy(well, make_grid(1.25e-3, 8.0));
  const double a = sol.a;

  // Beyond the rescaled support omega_N(r) = a/(N r) and its derivative
  // -a/(N r)^2 come from the exact tail, not interpolation.
  for (long N : {1L, 100L}) {
    const double dn = static_cast<double>(N);
    for (double r : {1.7 / dn, 3.0 / dn, 250.0 / dn}) {
      CHECK(std::abs(omega_at(sol, N, r) - a / (dn * r)) < 1e-13);
      CHECK(std::abs(domega_at(sol, N, r) + a / ((dn * r) * (dn * r))) < 1e-13);
    }
  }

  // Interior queries interpolate the solved profile.
  CHECK(std::abs(omega_at(sol, 1, 0.437) - omega_exact(0.437)) < 1e-6);
}

TEST_CASE("profile bound report") {
  const PotentialSpec bump = PotentialSpec::bump(5.0, 1.0);
  const ScatteringSolution sol = solve_zero_energy(bump, make_grid(1.0 / 800, 8.0));
  const BoundReport rep = verify_omega_bounds(sol);
  CHECK(rep.ok);
  CHECK(rep.sup_omega < 1.0);
  CHECK(rep.margin_to_one > 0.0);
  CHECK(rep.margin_to_one == doctest::Approx(1.0 - rep.sup_omega).epsilon(1e-12));
  CHECK(rep.exterior_dev < 1e-8);
  CHECK(rep.m1_sup > 0.0);
  CHECK(rep.m2_sup > 0.0);
  CHECK(rep.grad_l2 > 0.0);
  CHECK(std::isfinite(rep.m1_sup));
  CHECK(std::isfinite(rep.m2_sup));
}

TEST_CASE("residual stays within the documented budget across grids") {
  // Regression for both gate regimes: the O(dr^4) truncation budget on the
  // coarsest legal grid and the checker's roundoff floor on a very fine one.
  for (double v0 : {1.0, 5.0, 25.0}) {
    const PotentialSpec bump = PotentialSpec::bump(v0, 1.0);
    for (double dr : {1.0 / 200, 1.0 / 1600}) {
      const ScatteringSolution sol = solve_zero_energy(bump, make_grid(dr, 8.0));
      double u_max = 0.0;
      for (double u : sol.u) u_max = std::max(u_max, std::abs(u));
      const double eps = 2.220446049250313e-16;
      const double budget =
          u_max * std::max({1e-9, 30.0 * (1.0 + v0 / 2.0) * dr * dr * dr * dr,
                            32.0 * eps / (dr * dr)});
      CHECK(sol.residual <= budget);
    }
  }
  // The roundoff-floor regime must not trip the gate (dr = 1e-4 sits well
  // inside it).
  const PotentialSpec well = PotentialSpec::square_well(2.0, 1.0);
  CHECK_NOTHROW(solve_zero_energy(well, make_grid(1e-4, 8.0)));
}

TEST_CASE("grid preconditions are enforced") {
  const PotentialSpec well = PotentialSpec::square_well(2.0, 1.0);
  CHECK_THROWS_AS(solve_zero_energy(well, make_grid(1e-3, 1.5)),
                  validation_error);  // r_max < 2 R
  CHECK_THROWS_AS(solve_zero_energy(well, make_grid(1.0 / 100, 8.0)),
                  validation_error);  // dr > R/200
}

TEST_CASE("tabulated copy of the bump reproduces its length") {
  const PotentialSpec bump = PotentialSpec::bump(5.0, 1.0);
  const std::size_t m = 800;
  std::vector<double> r(m + 1), v(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    r[i] = static_cast<double>(i) / static_cast<double>(m);
    v[i] = bump(r[i]);
  }
  const PotentialSpec tab = PotentialSpec::tabulated(r, v);
  const ScatteringSolution sol = solve_zero_energy(tab, make_grid(1.0 / 800, 8.0));
  CHECK(std::abs(sol.a - 0.172557343799456) < 1e-6);
}
