#include "corrlab/gp.hpp"

#include <algorithm>
#include <cmath>

#include "corrlab/errors.hpp"
#include "corrlab/fd.hpp"
#include "corrlab/fft.hpp"
#include "corrlab/quadrature.hpp"

namespace corrlab {

namespace {

using cplx = std::complex<double>;

double sup_abs2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& z : v) s = std::max(s, std::norm(z));
  return s;
}

}  // namespace

void gp_nonlinear_phase(std::vector<cplx>& psi, double g, double dt) {
  for (cplx& z : psi) z *= std::polar(1.0, -g * std::norm(z) * dt);
}

RadialField evolve_gp(const RadialField& field, double g, double T, double dt) {
  if (field.mu != 1.0) {
    throw validation_error("evolve_gp: the condensate flow uses the convention mu = 1");
  }
  if (!(dt > 0.0)) throw validation_error("evolve_gp: dt must be positive");
  if (!(T >= 0.0)) throw validation_error("evolve_gp: T must be nonnegative");
  if (T == 0.0) return field;

  const std::size_t n = field.grid.n;
  const double h = field.grid.dr;
  const double sup2_0 = sup_abs2(field.psi);
  const long steps = std::max(1L, static_cast<long>(std::ceil(T / dt - 1e-12)));
  const double dt_eff = T / static_cast<double>(steps);
  if (std::abs(g) * sup2_0 * dt_eff > 0.1) {
    throw validation_error(
        "evolve_gp: dt * |g| * sup|phi|^2 exceeds 0.1; the nonlinear phase per step is too "
        "coarse");
  }

  // Work on u = r phi. The kinetic step is the exact free propagator on the
  // odd extension; the nonlinear phase acts pointwise with |phi| = |u|/r.
  Fft1d fft(2 * n);
  cplx* z = fft.data();
  std::vector<cplx> u(n + 1);
  for (std::size_t i = 0; i <= n; ++i) u[i] = field.psi[i] * field.grid.r(i);

  const double k1 = kPi / field.grid.r_max();
  const double norm = 1.0 / (2.0 * static_cast<double>(n));
  std::vector<cplx> kin(2 * n);
  for (std::size_t m = 0; m < 2 * n; ++m) {
    const double mm = static_cast<double>(std::min(m, 2 * n - m));
    const double k = k1 * mm;
    kin[m] = std::polar(norm, -k * k * dt_eff);
  }

  auto nonlinear = [&](double tau) {
    for (std::size_t i = 1; i <= n; ++i) {
      const double r = field.grid.r(i);
      const double dens = std::norm(u[i]) / (r * r);
      u[i] *= std::polar(1.0, -g * dens * tau);
    }
  };
  auto kinetic = [&]() {
    z[0] = 0.0;
    z[n] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      z[i] = u[i];
      z[2 * n - i] = -u[i];
    }
    fft.forward();
    for (std::size_t m = 0; m < 2 * n; ++m) z[m] *= kin[m];
    fft.backward();
    for (std::size_t i = 1; i < n; ++i) u[i] = z[i];
    u[0] = 0.0;
    u[n] = 0.0;
  };

  nonlinear(0.5 * dt_eff);
  for (long s = 0; s < steps; ++s) {
    kinetic();
    nonlinear(s + 1 == steps ? 0.5 * dt_eff : dt_eff);
    if (s % 16 == 15 || s + 1 == steps) {
      // Accumulate by addition as well: std::max never propagates a NaN
      // (the comparison is false, the old value wins), but a sum does.
      double sup2 = 0.0;
      double probe = 0.0;
      for (std::size_t i = 1; i <= n; ++i) {
        const double r = field.grid.r(i);
        const double val = std::norm(u[i]) / (r * r);
        sup2 = std::max(sup2, val);
        probe += val;
      }
      if (!std::isfinite(probe) || sup2 > 1e6 * std::max(sup2_0, 1e-300)) {
        throw numerical_error("evolve_gp: amplitude runaway (focusing collapse or instability)");
      }
    }
  }

  RadialField out = field;
  for (std::size_t i = 1; i <= n; ++i) out.psi[i] = u[i] / field.grid.r(i);
  out.psi[0] = (8.0 * u[1] - u[2]) / (6.0 * h);
  out.psi[n] = 0.0;
  return out;
}

double gp_energy(const RadialField& field, double g) {
  const std::size_t m = field.grid.size();
  const double h = field.grid.dr;
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = field.grid.r(i);
    const cplx dp = fd::d1(field.psi, i, h, fd::Parity::even);
    const double dens = std::norm(field.psi[i]);
    const double w = (i == 0 || i + 1 == m) ? 0.5 : 1.0;
    acc += w * (std::norm(dp) + 0.5 * g * dens * dens) * r * r;
  }
  return 4.0 * kPi * acc * h;
}

CouplingComparison coupling_comparison(const InitialOrbital& orbital, double g_a, double g_b,
                                       const std::vector<double>& times, double dt,
                                       const GpOptions& opts) {
  if (times.empty()) throw validation_error("coupling_comparison: no sample times");
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (!(times[j] >= 0.0) || (j > 0 && !(times[j] > times[j - 1]))) {
      throw validation_error("coupling_comparison: times must be nonnegative and increasing");
    }
  }
  const RadialGrid grid = make_grid(opts.dr, opts.r_max);
  const RadialField phi0 =
      make_radial_field(grid, 1.0, [&](double r) { return cplx(orbital(r), 0.0); });

  // Predicted aligned-divergence slope: the part of |phi0|^2 phi0 that a
  // global phase cannot absorb, ||nu||^2 - <phi0, nu>^2 / ||phi0||^2 with
  // nu = |phi0|^2 phi0 (the projection needs the actual mass of phi0).
  const double l4p4 = orbital.l4_pow4();
  const double l6p6 =
      integrate_radial([&](double r) { return std::pow(orbital(r), 6.0); }, 0.0,
                       12.0 * orbital.sigma(), 1e-11);
  const double l2p2 =
      integrate_radial([&](double r) { return std::pow(orbital(r), 2.0); }, 0.0,
                       12.0 * orbital.sigma(), 1e-11);
  CouplingComparison out;
  out.rate_constant =
      std::abs(g_b - g_a) * std::sqrt(std::max(0.0, l6p6 - l4p4 * l4p4 / l2p2));

  RadialField a = phi0, b = phi0;
  double t_prev = 0.0;
  for (double t : times) {
    const double span = t - t_prev;
    if (span > 0.0) {
      a = evolve_gp(a, g_a, span, dt);
      b = evolve_gp(b, g_b, span, dt);
    }
    t_prev = t;
    out.times.push_back(t);
    out.divergence.push_back(l2_distance(b, a));
    // Aligned distance: min over theta of ||b - e^{i theta} a||.
    cplx inner(0.0, 0.0);
    double na2 = 0.0, nb2 = 0.0;
    const double h = grid.dr;
    for (std::size_t i = 0; i <= grid.n; ++i) {
      const double r = grid.r(i);
      const double w = (i == 0 || i == grid.n) ? 0.5 : 1.0;
      const double vol = 4.0 * kPi * w * r * r * h;
      inner += vol * std::conj(a.psi[i]) * b.psi[i];
      na2 += vol * std::norm(a.psi[i]);
      nb2 += vol * std::norm(b.psi[i]);
    }
    const double aligned2 = na2 + nb2 - 2.0 * std::abs(inner);
    out.divergence_aligned.push_back(std::sqrt(std::max(0.0, aligned2)));
    out.mass_a.push_back(na2);
    out.mass_b.push_back(nb2);
    out.energy_a.push_back(gp_energy(a, g_a));
    out.energy_b.push_back(gp_energy(b, g_b));
  }
  return out;
}

}  // namespace corrlab
