// Functional checks. The Gaussian orbital gives closed forms for every norm
// in its bundle, for the density autocorrelation (bipolar reduction of the
// angular integral collapses to a one-dimensional Gaussian), and for the
// energy moments of the square well; those exact values pin the quadrature
// plumbing to machine precision. The window functional is pinned by the
// profile psi = (1 - omega) exp(-r^2/2), whose quotient is exactly the
// Gaussian, giving F = 4 pi Int r^4 e^{-r^2} = (3/2) pi^{3/2}.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "corrlab/cutoff.hpp"
#include "corrlab/errors.hpp"
#include "corrlab/field.hpp"
#include "corrlab/functionals.hpp"
#include "corrlab/orbital.hpp"
#include "corrlab/potential.hpp"
#include "corrlab/scattering.hpp"

using namespace corrlab;
using cd = std::complex<double>;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("cutoff window: exact bridge values, unit plateau, mass 3/2") {
  const CutoffChi chi;
  CHECK(chi(0.0) == 1.0);
  CHECK(chi(0.999) == 1.0);
  CHECK(chi(2.0) == 0.0);
  CHECK(chi(5.0) == 0.0);
  // Bridge g(2-x)/(g(2-x)+g(x-1)), g(s) = exp(-1/s): frozen point values and
  // the antisymmetry chi(3/2 - y) + chi(3/2 + y) = 1.
  CHECK(chi(1.25) == doctest::Approx(0.93503083087133594).epsilon(1e-14));
  CHECK(chi(1.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(chi(1.25) + chi(1.75) - 1.0) < 1e-14);
  CHECK(std::abs(chi(1.1) + chi(1.9) - 1.0) < 1e-14);
  // Antisymmetry makes the half-line mass exactly 1 + 1/2.
  CHECK(std::abs(chi.l1_mass() - 1.5) < 1e-12);
  CHECK(chi.junction_defect() < 1e-9);
  CHECK(chi.profile() == "smooth-bridge");
}

TEST_CASE("Gaussian orbital: norm bundle against closed forms") {
  const InitialOrbital orb = InitialOrbital::gaussian(1.0);
  // phi = pi^{-3/4} exp(-r^2/2): ||phi||_2 = 1, ||phi||_4^4 = (2 pi)^{-3/2},
  // ||grad phi||_2 = sqrt(3/2), ||Lap phi||_2 = sqrt(15)/2.
  CHECK(orb.l4_pow4() == doctest::Approx(0.06349363593424097).epsilon(1e-12));
  CHECK(orb.grad_l2() == doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));
  CHECK(orb.lap_l2() == doctest::Approx(0.5 * std::sqrt(15.0)).epsilon(1e-12));
  CHECK(orb.weighted_sup() > 0.0);
  CHECK(std::isfinite(orb.weighted_sup()));
  CHECK(orb.sigma() == 1.0);
  CHECK(orb.kind() == "gaussian");
  CHECK(!orb.describe().empty());

  const double amp = std::pow(kPi, -0.75);
  const double r = 0.8;
  const double phi = amp * std::exp(-r * r / 2.0);
  CHECK(orb(r) == doctest::Approx(phi).epsilon(1e-14));
  CHECK(orb.d1(r) == doctest::Approx(-r * phi).epsilon(1e-12));
  CHECK(orb.d2(r) == doctest::Approx((r * r - 1.0) * phi).epsilon(1e-12));

  // Decay certificates need more than cubic weight growth.
  CHECK_THROWS_AS(InitialOrbital::gaussian(1.0, 3.0), validation_error);
}

TEST_CASE("density autocorrelation of the Gaussian orbital is Gaussian") {
  const InitialOrbital orb = InitialOrbital::gaussian(1.0);
  // G(z) = ||phi||_4^4 exp(-z^2/2) for sigma = 1.
  const double g0 = orb.l4_pow4();
  for (double z : {0.0, 0.3, 1.0, 2.5}) {
    CHECK(radial_autocorrelation(orb, z) ==
          doctest::Approx(g0 * std::exp(-z * z / 2.0)).epsilon(1e-12));
  }
  CHECK(radial_autocorrelation(orb, 0.0) == doctest::Approx(g0).epsilon(1e-12));
  CHECK(radial_autocorrelation(orb, 0.5) > radial_autocorrelation(orb, 1.5));
}

TEST_CASE("window functional: closed form and second-order refinement") {
  const CutoffChi chi;
  const PotentialSpec bump = PotentialSpec::bump(5.0, 1.0);
  const double exact = 1.5 * std::pow(kPi, 1.5);  // 4 pi Int r^4 e^{-r^2}

  auto run = [&](double dr) {
    const RadialGrid g = make_grid(dr, 20.0);
    const ScatteringSolution sol = solve_zero_energy(bump, g);
    RadialField f = make_radial_field(g, 2.0, [&](double r) {
      return cd((1.0 - omega_at(sol, 1, r)) * std::exp(-r * r / 2.0), 0.0);
    });
    return window_functional(f, sol, 8.0, chi);
  };
  const double e1 = std::abs(run(0.005) - exact);
  const double e2 = std::abs(run(0.0025) - exact);
  CHECK(e1 < 1e-4);
  CHECK(e1 / e2 > 3.0);  // centered differences: error ~ dr^2
  CHECK(e1 / e2 < 5.0);
}

TEST_CASE("window functional guards") {
  const CutoffChi chi;
  const PotentialSpec bump = PotentialSpec::bump(5.0, 1.0);
  const RadialGrid g = make_grid(0.005, 20.0);
  const ScatteringSolution sol = solve_zero_energy(bump, g);
  RadialField f = make_radial_field(g, 2.0, [](double r) {
    return cd(std::exp(-r * r / 2.0), 0.0);
  });
  CHECK_THROWS_AS(window_functional(f, sol, 0.0, chi), validation_error);
  CHECK_THROWS_AS(window_functional(f, sol, 15.0, chi), validation_error);  // 2L > r_max

  RadialField touched = f;
  touched.absorber_start = 5.0;  // window [0, 2L] would read absorbed samples
  CHECK_THROWS_AS(window_functional(touched, sol, 4.0, chi), validation_error);
  touched.absorber_start = 19.0;
  CHECK_NOTHROW(window_functional(touched, sol, 4.0, chi));
}

TEST_CASE("data split: the smooth piece carries no window energy") {
  const CutoffChi chi;
  const PotentialSpec bump = PotentialSpec::bump(5.0, 1.0);
  const double lambda = 40.0;
  const RadialGrid g = make_grid(0.005, 2.0 * lambda + 2.0);
  const ScatteringSolution sol = solve_zero_energy(bump, g);
  RadialField data = make_scaled_data(data_profile("cap"), lambda, 0.005, 2.0 * lambda + 2.0);

  // At T = 0 the (1-omega) psi piece has quotient psi = 1 on the window
  // (flat plateau), so F2 vanishes; the omega psi piece carries all of F.
  WindowSplit w0 = window_split(data, sol, bump, 4.0, 0.0, 0.01, chi);
  const double f_full = window_functional(data, sol, 4.0, chi);
  CHECK(w0.F2 < 1e-12);
  CHECK(std::abs(w0.F1 - f_full) < 1e-10);
  CHECK(w0.F1 > 0.1);

  // The correlation burst leaves the window: by T = 2 the F1 content has
  // dropped by more than 5x, while F2 stays at numerical zero.
  WindowSplit w2 = window_split(data, sol, bump, 4.0, 2.0, 0.01, chi);
  CHECK(w2.F1 < 0.2 * w0.F1);
  CHECK(w2.F2 < 1e-8);

  RadialField onebody = data;
  onebody.mu = 1.0;
  CHECK_THROWS_AS(window_split(onebody, sol, bump, 4.0, 0.0, 0.01, chi), validation_error);
  CHECK_THROWS_AS(window_split(data, sol, bump, 4.0, -1.0, 0.01, chi), validation_error);
  CHECK_THROWS_AS(window_split(data, sol, PotentialSpec::bump(4.0, 1.0), 4.0, 0.0, 0.01, chi),
                  validation_error);
}

TEST_CASE("initial correlation content approaches its scaling constant") {
  const CutoffChi chi;
  const InitialOrbital orb = InitialOrbital::gaussian(1.0);
  const PotentialSpec bump = PotentialSpec::bump(5.0, 1.0);
  const ScatteringSolution sol = solve_zero_energy(bump, make_grid(1.0 / 800, 8.0));

  double prev_ratio = 2.0;
  for (long n : {500L, 1000L, 2000L, 4000L}) {
    const FnInitialResult r = fn_initial(orb, sol, n, 0.05, chi);
    CHECK(r.value > 0.0);
    // The separable approximation differs from the exact value by no more
    // than the reported rigorous bound.
    CHECK(std::abs(r.value - r.value_separable) <= r.correction_bound);
    const double dn = static_cast<double>(n);
    const double ratio = (dn * dn / 0.05) * r.value / r.asymptotic_constant;
    CHECK(ratio > 1.0);       // finite-scale excess is positive...
    CHECK(ratio < prev_ratio);  // ...and shrinks monotonically with N ell
    prev_ratio = ratio;
  }
  CHECK(prev_ratio < 1.013);  // within ~1% of the constant at N ell = 200

  CHECK_THROWS_AS(fn_initial(orb, sol, 0, 0.05, chi), validation_error);
  CHECK_THROWS_AS(fn_initial(orb, sol, 100, 0.0, chi), validation_error);
}

TEST_CASE("energy moments: frozen quadrature values for the square well") {
  // Oracle (40-digit arithmetic): with phi the unit Gaussian and V the
  // square well (V0 = 2, R = 1) at N = 100,
  //   Int V(w) G(w/N) w^2 dw-type pair integral ivg = 0.53190708312898259
  //   e1_per_N = 3/2 + (99/200) ivg, and the N -> inf limits below.
  const InitialOrbital orb = InitialOrbital::gaussian(1.0);
  const PotentialSpec well = PotentialSpec::square_well(2.0, 1.0);
  const HamiltonianMoments m = hamiltonian_moments(orb, well, 100.0);
  CHECK(m.e1_per_N == doctest::Approx(1.7632940061488464).epsilon(1e-12));
  CHECK(m.e1_limit == doctest::Approx(1.7659615202676218).epsilon(1e-12));
  CHECK(m.h2_leading_per_N3 == doctest::Approx(0.52658801229769277).epsilon(1e-12));
  CHECK(m.h2_limit == doctest::Approx(0.53192304053524357).epsilon(1e-12));
  REQUIRE(m.diagnostics.count("gap_leading") == 1);
  CHECK(m.diagnostics.at("gap_leading") ==
        doctest::Approx(0.0026596152026762179).epsilon(1e-12));

  // The leading level gap halves when N doubles.
  const HamiltonianMoments m2 = hamiltonian_moments(orb, well, 200.0);
  CHECK(m.diagnostics.at("gap_leading") / m2.diagnostics.at("gap_leading") ==
        doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(hamiltonian_moments(orb, well, 1.0), validation_error);
}

TEST_CASE("couplings: first-order, renormalized, and their exact difference") {
  const PotentialSpec bump = PotentialSpec::bump(5.0, 1.0);
  const ScatteringSolution sol = solve_zero_energy(bump, make_grid(1.0 / 800, 8.0));
  const CouplingConstants cc = coupling_constants(bump, sol);

  CHECK(cc.b == doctest::Approx(5.9950195350960695).epsilon(1e-10));
  CHECK(cc.eight_pi_a == doctest::Approx(8.0 * kPi * sol.a).epsilon(1e-12));
  // b - 8 pi a = Int V omega, each side computed by an independent route.
  CHECK(std::abs(cc.b - cc.eight_pi_a - cc.excess) < 1e-9);
  CHECK(cc.excess > 0.0);
  CHECK(cc.b > cc.eight_pi_a);

  CHECK_THROWS_AS(coupling_constants(scale_potential(bump, 10), sol), validation_error);
  CHECK_THROWS_AS(coupling_constants(PotentialSpec::bump(4.0, 1.0), sol), validation_error);
}

TEST_CASE("triple norm: radial closed forms") {
  const RadialGrid g = make_grid(0.01, 12.0);
  RadialField f =
      make_radial_field(g, 2.0, [](double r) { return cd(std::exp(-r * r / 2.0), 0.0); });
  const TripleNormReport t = triple_norm(f);
  // Oracle: ||f||_1 = (2 pi)^{3/2}, ||grad f||_1 = 8 pi, plus quadrature
  // values for the higher rotational derivative magnitudes.
  CHECK(t.w31 == doctest::Approx(173.32349152003478).epsilon(1e-8));
  CHECK(std::abs(t.w3inf - 5.3197300715523307) < 1e-4);
  CHECK(t.total == doctest::Approx(t.w31 + t.w3inf).epsilon(1e-14));

  // Too-coarse sampling of oscillatory data is rejected, not mis-measured.
  const RadialGrid coarse = make_grid(0.4, 24.0);
  RadialField osc = make_radial_field(coarse, 2.0, [](double r) {
    return cd(std::sin(6.0 * r) * std::exp(-r * r / 32.0), 0.0);
  });
  CHECK_THROWS_AS(triple_norm(osc), validation_error);
}

TEST_CASE("triple norm: cartesian route agrees with the radial one") {
  CartesianField box = make_cartesian_field(96, 0.25, 2.0, [](double x, double y, double z) {
    return cd(std::exp(-(x * x + y * y + z * z) / 2.0), 0.0);
  });
  const TripleNormReport t = triple_norm(box);
  CHECK(std::abs(t.w31 - 173.32349152003478) / 173.32349152003478 < 2e-3);
  CHECK(std::abs(t.w3inf - 5.3197300715523307) < 0.03);

  // Data spilling to the box edge is rejected.
  CartesianField wide = make_cartesian_field(32, 0.25, 2.0, [](double x, double y, double z) {
    return cd(std::exp(-(x * x + y * y + z * z) / 18.0), 0.0);
  });
  CHECK_THROWS_AS(triple_norm(wide), validation_error);
}

TEST_CASE("uniform norm table and its decay gate") {
  const PotentialSpec bump = PotentialSpec::bump(5.0, 1.0);
  const ScatteringSolution sol = solve_zero_energy(bump, make_grid(1.0 / 800, 8.0));
  const DataProfile cone = data_profile("expcone");

  const NormTable t = uniform_norm_table(cone, sol, {50.0, 100.0}, 1, 2.0);
  REQUIRE(t.values.size() == 2);
  CHECK(t.values[0] > 0.0);
  CHECK(t.uniform);
  CHECK(t.max_over_min < 1.1);

  // Tail convergence needs p (m+1) > 3: order/exponent pairs at or below the
  // line are rejected.
  CHECK_THROWS_AS(uniform_norm_table(cone, sol, {50.0}, 0, 2.0), validation_error);
  CHECK_THROWS_AS(uniform_norm_table(cone, sol, {50.0}, 0, 3.0), validation_error);
  CHECK_NOTHROW(uniform_norm_table(cone, sol, {50.0}, 0, 3.5));
  CHECK_THROWS_AS(uniform_norm_table(cone, sol, {}, 1, 2.0), validation_error);
  CHECK_THROWS_AS(uniform_norm_table(cone, sol, {0.5}, 1, 2.0), validation_error);
  CHECK_THROWS_AS(uniform_norm_table(cone, sol, {50.0}, 4, 2.0), validation_error);
}

TEST_CASE("scale dictionary between microscopic and macroscopic variables") {
  const MacroParams mac = micro_to_macro(100.0, 0.01, 1e-4);
  CHECK(mac.lambda == 100.0);
  CHECK(mac.L == 2.0);   // 2 N ell
  CHECK(mac.T == 1.0);   // N^2 t

  const MicroParams mic = macro_to_micro(mac.lambda, mac.L, mac.T);
  CHECK(mic.n == 100.0);
  CHECK(mic.ell == 0.01);
  CHECK(mic.t == 1e-4);

  CHECK_THROWS_AS(micro_to_macro(100.0, 0.005, 0.0), validation_error);  // ell < 1/N
  CHECK_THROWS_AS(micro_to_macro(0.5, 0.01, 0.0), validation_error);
  CHECK_THROWS_AS(micro_to_macro(100.0, 0.01, -1.0), validation_error);
  CHECK_THROWS_AS(macro_to_micro(100.0, 1.5, 0.0), validation_error);  // L < 2
  CHECK_THROWS_AS(macro_to_micro(0.5, 4.0, 0.0), validation_error);
  CHECK_THROWS_AS(macro_to_micro(100.0, 4.0, -1.0), validation_error);
}

TEST_CASE("data profiles and scaled data fields") {
  const DataProfile cap = data_profile("cap");
  CHECK(cap.support == 2.0);
  CHECK(cap.f(0.9) == 1.0);
  CHECK(cap.f(2.1) == 0.0);

  const DataProfile cone = data_profile("expcone");
  CHECK(cone.support == 3.0);
  CHECK(cone.f(0.0) == 1.0);
  CHECK(cone.f(3.5) == 0.0);
  CHECK(cone.f(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));  // inside plateau

  const DataProfile gauss = data_profile("gauss");
  CHECK(gauss.support == 4.0);
  CHECK(gauss.f(4.5) == 0.0);

  CHECK_THROWS_AS(data_profile("triangle"), validation_error);

  const RadialField f = make_scaled_data(cap, 50.0, 0.05, 120.0);
  CHECK(f.mu == 2.0);
  CHECK(f.psi[100].real() == 1.0);  // r = 5 inside the plateau
  CHECK(f.psi[100].imag() == 0.0);
  CHECK(std::abs(f.psi.back()) == 0.0);
  CHECK_THROWS_AS(make_scaled_data(cap, 50.0, 0.05, 80.0), validation_error);
  CHECK_THROWS_AS(make_scaled_data(cap, 0.0, 0.05, 80.0), validation_error);
}
