// Evolution checks. The free flow has a closed form for Gaussian data
// (complex-width spreading), which pins both the spectral free propagator and
// the Crank-Nicolson integrator. The quotient flow is cross-checked against
// an independently discretized generator (finite-volume in the weighted
// measure, integrated by explicit RK4), so the two routes share no stencil,
// no time integrator, and no code path.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "corrlab/errors.hpp"
#include "corrlab/field.hpp"
#include "corrlab/potential.hpp"
#include "corrlab/propagator.hpp"
#include "corrlab/scattering.hpp"

using namespace corrlab;
using cd = std::complex<double>;

namespace {

RadialField gaussian(const RadialGrid& g, double mu, double sigma) {
  return make_radial_field(g, mu, [sigma](double r) {
    return cd(std::exp(-r * r / (2.0 * sigma * sigma)), 0.0);
  });
}

// Free evolution of exp(-r^2 / (2 sigma^2)): the width continues to
// sigma^2 + 2 i mu t and the amplitude picks up (1 + 2 i mu t / sigma^2)^{-3/2}.
RadialField free_closed_form(const RadialGrid& g, double mu, double sigma, double t) {
  const cd s(sigma * sigma, 2.0 * mu * t);
  const cd pref = std::pow(cd(1.0, 2.0 * mu * t / (sigma * sigma)), -1.5);
  return make_radial_field(g, mu,
                           [&](double r) { return pref * std::exp(-r * r / (2.0 * s)); });
}

double sup_diff(const RadialField& x, const RadialField& y) {
  double e = 0.0;
  for (std::size_t i = 0; i < x.psi.size(); ++i)
    e = std::max(e, std::abs(x.psi[i] - y.psi[i]));
  return e;
}

}  // namespace

TEST_CASE("spectral free propagator matches the Gaussian closed form") {
  const RadialGrid g = make_grid(0.01, 40.0);
  for (double mu : {1.0, 2.0}) {
    RadialField f = gaussian(g, mu, 1.0);
    std::vector<std::string> warnings;
    RadialField out = evolve_free(f, mu, 1.0, &warnings);
    RadialField ref = free_closed_form(g, mu, 1.0, 1.0);
    CHECK(sup_diff(out, ref) < 1e-8);
    CHECK(l2_distance(out, ref) < 1e-12);
    CHECK(warnings.empty());
  }
}

TEST_CASE("free propagator flags spectrally under-resolved data") {
  const RadialGrid g = make_grid(0.1, 12.8);
  RadialField f = gaussian(g, 1.0, 0.05);  // far narrower than the grid resolves
  std::vector<std::string> warnings;
  evolve_free(f, 1.0, 0.1, &warnings);
  CHECK(!warnings.empty());
}

TEST_CASE("Crank-Nicolson free evolution: accuracy and dt^2 self-convergence") {
  const RadialGrid g = make_grid(0.01, 40.0);
  const PotentialSpec zero = PotentialSpec::square_well(0.0, 1.0);
  RadialField f = gaussian(g, 2.0, 1.0);

  RadialField out = evolve_radial(f, zero, 0.5, 1e-3);
  CHECK(l2_distance(out, free_closed_form(g, 2.0, 1.0, 0.5)) < 5e-4);

  const RadialField b1 = evolve_radial(f, zero, 0.5, 0.01);
  const RadialField b2 = evolve_radial(f, zero, 0.5, 0.005);
  const RadialField b3 = evolve_radial(f, zero, 0.5, 0.0025);
  const double ratio = l2_distance(b1, b2) / l2_distance(b2, b3);
  CHECK(ratio > 3.7);
  CHECK(ratio < 4.3);
}

TEST_CASE("Crank-Nicolson is unitary, reversible, and exact at T = 0") {
  const RadialGrid g = make_grid(0.01, 40.0);
  const PotentialSpec bump = PotentialSpec::bump(5.0, 1.0);
  RadialField f = gaussian(g, 2.0, 1.0);

  EvolveReport rep;
  RadialField out = evolve_radial(f, bump, 10.0, 1e-3, {}, &rep);  // 1e4 steps
  CHECK(std::abs(rep.mass_final - rep.mass_initial) < 1e-9);
  CHECK(rep.warnings.empty());

  RadialField back = evolve_radial(out, bump, -10.0, 1e-3);
  CHECK(l2_distance(back, f) < 1e-9);

  CHECK(l2_distance(evolve_radial(f, bump, 0.0, 1e-3), f) < 1e-12);
  CHECK_THROWS_AS(evolve_radial(f, bump, 1.0, 0.0), validation_error);
  CHECK_THROWS_AS(evolve_radial(f, bump, 1.0, -0.1), validation_error);
}

TEST_CASE("a phase-carrying packet travels at 2 mu k under both propagators") {
  // u = r psi = exp(i k0 r) exp(-(r-20)^2/2), k0 = 2, mu = 2: the stationary
  // phase speed is 2 mu k0 = 8, so at T = 1 the peak sits at r = 28.
  const RadialGrid g = make_grid(0.01, 60.0);
  RadialField f = make_radial_field(g, 2.0, [](double r) {
    return std::exp(cd(0.0, 2.0 * r)) * std::exp(-(r - 20.0) * (r - 20.0) / 2.0) /
           cd(std::max(r, 1e-300), 0.0);
  });
  auto peak_of = [&](const RadialField& fld) {
    std::size_t best = 0;
    double bu = 0.0;
    for (std::size_t i = 0; i < fld.psi.size(); ++i) {
      const double u = std::abs(fld.psi[i]) * g.r(i);
      if (u > bu) {
        bu = u;
        best = i;
      }
    }
    return g.r(best);
  };
  CHECK(std::abs(peak_of(evolve_radial(f, PotentialSpec::square_well(0.0, 1.0), 1.0,
                                       1e-3)) -
                 28.0) < 0.05);
  CHECK(std::abs(peak_of(evolve_free(f, 2.0, 1.0)) - 28.0) < 0.05);
}

TEST_CASE("weighted evolution reduces to the plain pair flow when V = 0") {
  // V = 0 forces u = r, a = 0, omega = 0, so the conjugation is the identity.
  const RadialGrid g = make_grid(0.005, 12.0);
  const PotentialSpec zero = PotentialSpec::square_well(0.0, 1.0);
  const ScatteringSolution sol = solve_zero_energy(zero, g);
  CHECK(std::abs(sol.a) < 1e-12);
  CHECK(sol.sup_omega < 1e-13);

  RadialField f = gaussian(g, 2.0, 1.0);
  RadialField w = evolve_weighted(f, sol, zero, 0.5, 5e-3);
  RadialField p = evolve_radial(f, zero, 0.5, 5e-3);
  CHECK(l2_distance(w, p) < 1e-10);
}

TEST_CASE("weighted norm is the invariant of the quotient flow") {
  const RadialGrid g = make_grid(0.005, 12.0);
  const PotentialSpec bump = PotentialSpec::bump(5.0, 1.0);
  const ScatteringSolution sol = solve_zero_energy(bump, g);
  RadialField f = gaussian(g, 2.0, 1.0);

  const double n0 = weighted_norm(f, sol);
  RadialField w = evolve_weighted(f, sol, bump, 2.0, 5e-3);
  CHECK(std::abs(weighted_norm(w, sol) - n0) < 1e-10);

  RadialField onebody = f;
  onebody.mu = 1.0;
  CHECK_THROWS_AS(evolve_weighted(onebody, sol, bump, 0.5, 5e-3), validation_error);
  CHECK_THROWS_AS(evolve_weighted(f, sol, PotentialSpec::bump(4.0, 1.0), 0.5, 5e-3),
                  validation_error);
}

TEST_CASE("independent finite-volume route reproduces the quotient flow") {
  // Dual route for the weighted evolution: discretize the generator
  // L phi = -(1/(w r^2)) d/dr (w r^2 phi'), w = (1 - omega)^2, by finite
  // volumes with face coefficients c_{i +- 1/2} = ((1 - omega) r)^2 at cell
  // midpoints, and integrate phi_t = -2 i L phi with explicit RK4. This
  // shares no discretization or integrator with evolve_weighted; agreement
  // is limited by the differing O(h^2) stencils.
  const PotentialSpec bump = PotentialSpec::bump(5.0, 1.0);
  const ScatteringSolution sol = solve_zero_energy(bump, make_grid(0.005, 12.0));

  const double h = 0.02;
  const RadialGrid g = make_grid(h, 12.0);
  const std::size_t n = g.n;
  RadialField phi0 =
      make_radial_field(g, 2.0, [](double r) { return cd(std::exp(-r * r), 0.0); });
  RadialField ref = evolve_weighted(phi0, sol, bump, 0.5, 0.002);

  std::vector<double> cmid(n + 1), cnode(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    const double rm = (static_cast<double>(i) - 0.5) * h;
    const double wm = (1.0 - omega_at(sol, 1, rm)) * rm;
    cmid[i] = wm * wm;
    const double wn = (1.0 - omega_at(sol, 1, g.r(i))) * g.r(i);
    cnode[i] = wn * wn;
  }
  auto apply = [&](const std::vector<cd>& p, std::vector<cd>& out) {
    for (std::size_t i = 1; i < n; ++i) {
      // Node 0 is slaved to the interior by even extrapolation (zero flux
      // through the origin face).
      const cd left = (i == 1) ? (4.0 * p[1] - p[2]) / 3.0 : p[i - 1];
      const cd flux = cmid[i + 1] * (p[i + 1] - p[i]) - cmid[i] * (p[i] - left);
      out[i] = cd(0.0, 2.0) * flux / (cnode[i] * h * h);
    }
    out[0] = (4.0 * out[1] - out[2]) / 3.0;
    out[n] = cd(0.0, 0.0);
  };

  std::vector<cd> p(n + 1);
  for (std::size_t i = 0; i <= n; ++i) p[i] = phi0.psi[i];
  const double dt = 1.0e-4;
  const std::size_t steps = 5000;  // T = 0.5
  std::vector<cd> k1(n + 1), k2(n + 1), k3(n + 1), k4(n + 1), tmp(n + 1);
  for (std::size_t s = 0; s < steps; ++s) {
    apply(p, k1);
    for (std::size_t i = 0; i <= n; ++i) tmp[i] = p[i] + 0.5 * dt * k1[i];
    apply(tmp, k2);
    for (std::size_t i = 0; i <= n; ++i) tmp[i] = p[i] + 0.5 * dt * k2[i];
    apply(tmp, k3);
    for (std::size_t i = 0; i <= n; ++i) tmp[i] = p[i] + dt * k3[i];
    apply(tmp, k4);
    for (std::size_t i = 0; i <= n; ++i)
      p[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    p[0] = (4.0 * p[1] - p[2]) / 3.0;
    p[n] = cd(0.0, 0.0);
  }
  RadialField dual = phi0;
  for (std::size_t i = 0; i <= n; ++i) dual.psi[i] = p[i];
  CHECK(l2_distance(ref, dual) / l2_norm(ref) < 2e-3);
}

TEST_CASE("wave-operator approximants: exact inversion and Cauchy decay") {
  const RadialGrid g = make_grid(0.01, 40.0);
  const PotentialSpec bump = PotentialSpec::bump(5.0, 1.0);
  RadialField f = gaussian(g, 1.0, 1.0);

  // The two directions compose to the identity exactly: every leg is unitary
  // and numerically time-reversible.
  MollerResult out = moller_transform(f, bump, 2.0, MollerDirection::adjoint);
  MollerResult back = moller_transform(out.field, bump, 2.0, MollerDirection::forward);
  CHECK(l2_distance(back.field, f) < 1e-10);

  // The t0 -> 2 t0 defect shrinks as the free leg carries the packet away
  // from the potential.
  MollerResult a4 = moller_transform(f, bump, 4.0, MollerDirection::adjoint);
  CHECK(out.cauchy_defect > 0.0);
  CHECK(a4.cauchy_defect < 0.7 * out.cauchy_defect);

  MollerResult f2 = moller_transform(f, bump, 2.0, MollerDirection::forward);
  MollerResult f4 = moller_transform(f, bump, 4.0, MollerDirection::forward);
  CHECK(f4.cauchy_defect < 0.7 * f2.cauchy_defect);

  CHECK_THROWS_AS(moller_transform(f, bump, 0.0, MollerDirection::forward),
                  validation_error);
}

TEST_CASE("split-step one-body propagator") {
  const RadialGrid g = make_grid(0.01, 40.0);
  const PotentialSpec zero = PotentialSpec::square_well(0.0, 1.0);
  const PotentialSpec bump = PotentialSpec::bump(5.0, 1.0);
  RadialField f = gaussian(g, 1.0, 1.0);

  // With V = 0 the splitting collapses to the exact spectral free step.
  CHECK(l2_distance(evolve_onebody(f, zero, 1.0, 0.01), evolve_free(f, 1.0, 1.0)) <
        1e-12);

  // Symmetric splitting: running time backwards inverts the map; mass is
  // conserved to roundoff.
  RadialField c = evolve_onebody(f, bump, 1.0, 0.01);
  CHECK(std::abs(l2_norm(c) - l2_norm(f)) < 1e-12);
  CHECK(l2_distance(evolve_onebody(c, bump, -1.0, 0.01), f) < 1e-10);
}

TEST_CASE("sampled evolution lands exactly on requested times") {
  const RadialGrid g = make_grid(0.01, 40.0);
  const PotentialSpec bump = PotentialSpec::bump(5.0, 1.0);
  RadialField f = gaussian(g, 2.0, 1.0);

  RadialField direct = evolve_radial(f, bump, 1.0, 0.005);
  std::vector<double> seen;
  RadialField last = f;
  evolve_radial_sampled(f, bump, {0.0, 0.25, 0.5, 1.0}, 0.005,
                        [&](double t, const RadialField& fld) {
                          seen.push_back(t);
                          last = fld;
                        });
  REQUIRE(seen.size() == 4);
  CHECK(seen[0] == 0.0);
  CHECK(seen[3] == 1.0);
  CHECK(l2_distance(direct, last) < 1e-12);

  CHECK_THROWS_AS(evolve_radial_sampled(f, bump, {0.5, 0.25}, 0.005,
                                        [](double, const RadialField&) {}),
                  validation_error);
}

TEST_CASE("absorbing layer removes outgoing flux; plain evolution does not") {
  const RadialGrid g = make_grid(0.01, 30.0);
  // Packet at r = 15 moving outward at speed 2 mu k = 12.
  RadialField f = make_radial_field(g, 2.0, [](double r) {
    return std::exp(cd(0.0, 3.0 * r)) * std::exp(-(r - 15.0) * (r - 15.0) / 2.0) /
           cd(std::max(r, 1e-300), 0.0);
  });
  const PotentialSpec zero = PotentialSpec::square_well(0.0, 1.0);

  EvolveOptions opts;
  opts.absorbing = true;
  EvolveReport rep;
  RadialField out = evolve_radial(f, zero, 1.5, 1e-3, opts, &rep);
  CHECK(rep.mass_final < 0.95 * rep.mass_initial);
  CHECK(out.absorber_start == doctest::Approx(0.875 * 30.0));

  EvolveReport rep2;
  RadialField out2 = evolve_radial(f, zero, 1.5, 1e-3, {}, &rep2);
  CHECK(std::abs(rep2.mass_final - rep2.mass_initial) < 1e-9);
  CHECK(out2.absorber_start == -1.0);

  // Data that does not vanish at the edge is flagged, not silently clipped.
  RadialField flat = make_radial_field(g, 2.0, [](double) { return cd(1.0, 0.0); });
  EvolveReport rep3;
  evolve_radial(flat, zero, 0.01, 1e-3, {}, &rep3);
  CHECK(!rep3.warnings.empty());
}

TEST_CASE("cartesian split-step agrees with the radial flow on an axis line") {
  const PotentialSpec bump = PotentialSpec::bump(5.0, 1.0);
  CartesianField box =
      make_cartesian_field(64, 0.25, 2.0, [](double x, double y, double z) {
        return cd(std::exp(-(x * x + y * y + z * z) / 1.28), 0.0);
      });
  EvolveReport rep;
  CartesianField bout = evolve_cartesian(box, bump, 0.25, 0.005, &rep);
  CHECK(std::abs(rep.mass_final - rep.mass_initial) < 1e-10);

  const RadialGrid g = make_grid(0.0125, 20.0);
  RadialField f =
      make_radial_field(g, 2.0, [](double r) { return cd(std::exp(-r * r / 1.28), 0.0); });
  RadialField rout = evolve_radial(f, bump, 0.25, 0.002);

  double worst = 0.0;
  for (std::size_t ix = 33; ix < 57; ++ix) {
    const double x = bout.coord(ix);
    const std::size_t ir = static_cast<std::size_t>(std::llround(x / g.dr));
    worst = std::max(worst, std::abs(rout.psi[ir] - bout.psi[box.index(ix, 32, 32)]));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("cartesian guards") {
  const PotentialSpec bump = PotentialSpec::bump(5.0, 1.0);
  CartesianField box =
      make_cartesian_field(64, 0.25, 2.0, [](double x, double y, double z) {
        return cd(std::exp(-(x * x + y * y + z * z) / 2.0), 0.0);
      });
  // sigma = 1 spills past a quarter of this box: rejected, not wrapped.
  CHECK_THROWS_AS(evolve_cartesian(box, bump, 0.1, 0.005), validation_error);
  CHECK_THROWS_AS(evolve_cartesian(box, bump, 0.1, 0.0), validation_error);

  CartesianField odd = make_cartesian_field(48, 0.25, 2.0,
                                            [](double, double, double) { return cd(); });
  CHECK_THROWS_AS(evolve_cartesian(odd, bump, 0.1, 0.005), validation_error);
}

TEST_CASE("checkpoints round-trip exactly") {
  const RadialGrid g = make_grid(0.02, 8.0);
  RadialField f = make_radial_field(g, 2.0, [](double r) {
    return cd(std::exp(-r * r / 2.0), 0.3 * std::exp(-r));
  });
  const std::string path = "checkpoint_roundtrip_test.csv";
  save_checkpoint(f, path, "deadbeef01234567", 2.5);

  std::string hash;
  double t_label = 0.0;
  RadialField back = load_checkpoint(path, &hash, &t_label);
  CHECK(hash == "deadbeef01234567");
  CHECK(t_label == 2.5);
  CHECK(back.mu == f.mu);
  REQUIRE(back.psi.size() == f.psi.size());
  bool identical = back.grid.compatible(f.grid);
  for (std::size_t i = 0; i <= g.n; ++i) {
    identical = identical && (back.psi[i] == f.psi[i]);
  }
  CHECK(identical);  // %.17g serialization is lossless for doubles
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_checkpoint("no_such_checkpoint_file.csv"), validation_error);
}
