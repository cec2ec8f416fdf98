#pragma once

#include <string>
#include <vector>

#include "corrlab/grid.hpp"
#include "corrlab/interp.hpp"
#include "corrlab/potential.hpp"

namespace corrlab {

/// Zero-energy mode of the halved-potential operator: u'' = (V/2) u with
/// u(0) = 0, normalized so u(r) = r - a outside the support. omega = 1 - u/r
/// is the correlation profile; a is the scattering length.
struct ScatteringSolution {
  RadialGrid grid;
  std::vector<double> u;       // normalized mode, u(r) = r - a for r > R
  std::vector<double> omega;   // 1 - u/r (omega(0) = 1 - u'(0))
  std::vector<double> domega;  // radial derivative of omega
  double a = 0.0;
  double support_radius = 0.0;
  double sup_omega = 0.0;     // attained maximum of omega (must stay < 1)
  double residual = 0.0;      // max |u'' - (V/2) u| over checked nodes
  std::string potential_hash;

  // Interpolation state for off-grid queries.
  PchipInterpolant omega_interp;
  CubicSpline u_spline;
};

/// Integrates the zero-energy equation with a 4th-order Numerov scheme
/// (startup value from embedded RK4 substeps), fits the exterior line
/// u = beta r + gamma over r in (R + 5 dr, r_max], and rescales by beta.
///
/// Preconditions: grid.r_max >= 2 * spec.range(), grid.dr <= spec.range()/200.
/// Postcondition: residual <= max(1e-9, 30 (1 + sup V/2) dr^4, 32 eps / dr^2)
/// * max|u| (6th-order difference check; the dr^4 term budgets the
/// integrator's own truncation on coarse grids and the eps term the checker's
/// rounding floor on very fine ones. For the non-smooth square well the
/// stencil band around the support edge is excluded, since finite differences
/// across a curvature jump measure the jump, not the solver).
ScatteringSolution solve_zero_energy(const PotentialSpec& spec, const RadialGrid& grid);

enum class LengthMethod { asymptotic, integral };

/// Two independent routes to the scattering length:
///   asymptotic  least-squares intercept of the exterior line (refit)
///   integral    (1/2) Int_0^R V(r) u(r) r dr by adaptive quadrature over the
///               spline-interpolated mode
double scattering_length(const ScatteringSolution& sol, LengthMethod method,
                         const PotentialSpec& spec);

/// omega_N(r) = omega(N r) for the N-rescaled profile. Exact a/(N r) branch
/// beyond the support radius; monotone cubic interpolation inside.
double omega_at(const ScatteringSolution& sol, long n, double r);

/// Radial derivative of omega at N r (exact exterior branch, interpolated
/// interior branch); the chain-rule factor N is NOT applied.
double domega_at(const ScatteringSolution& sol, long n, double r);

/// Pointwise bound checks on the correlation profile.
struct BoundReport {
  double sup_omega = 0.0;        // must be < 1
  double margin_to_one = 0.0;    // 1 - sup_omega
  double exterior_dev = 0.0;     // max |r omega / a - 1| over r > R
  double m1_sup = 0.0;           // sup |grad omega| r^2
  double m2_sup = 0.0;           // sup |grad^2 omega| r^3 (Frobenius)
  double grad_l2 = 0.0;          // L2 norm of grad omega (analytic tail added)
  bool ok = false;
  std::vector<std::string> notes;
};

BoundReport verify_omega_bounds(const ScatteringSolution& sol);

}  // namespace corrlab
