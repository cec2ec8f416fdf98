#include "corrlab/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "corrlab/errors.hpp"
#include "corrlab/fft.hpp"
#include "corrlab/quadrature.hpp"

namespace corrlab {

namespace {

using cplx = std::complex<double>;

/// psi(0) from the odd-extended mode u: u'(0) by the 4th-order parity-aware
/// stencil (8 u1 - u2) / (6 h).
cplx origin_value(const std::vector<cplx>& u, double h) {
  return (8.0 * u[1] - u[2]) / (6.0 * h);
}

std::vector<cplx> field_to_u(const RadialField& field, std::vector<std::string>* warnings) {
  const std::size_t n = field.grid.n;
  std::vector<cplx> u(n + 1);
  u[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) u[i] = field.psi[i] * field.grid.r(i);
  double sup = 0.0;
  for (const auto& z : field.psi) sup = std::max(sup, std::abs(z));
  if (std::abs(u[n]) > 1e-10 * sup * field.grid.r_max() && warnings) {
    warnings->push_back("data does not vanish at r_max; Dirichlet edge clips it");
  }
  u[n] = 0.0;
  return u;
}

RadialField u_to_field(const RadialGrid& grid, const std::vector<cplx>& u, double mu) {
  RadialField out;
  out.grid = grid;
  out.mu = mu;
  out.psi.resize(grid.size());
  out.psi[0] = origin_value(u, grid.dr);
  for (std::size_t i = 1; i <= grid.n; ++i) out.psi[i] = u[i] / grid.r(i);
  out.norm_at_construction = l2_norm(out);
  return out;
}

void check_finite(const std::vector<cplx>& u, const char* who) {
  for (const auto& z : u) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw numerical_error(std::string(who) + ": non-finite sample produced");
    }
  }
}

/// Crank–Nicolson factorization for a fixed step size. The tridiagonal
/// A = I + (i dt/2) H is LU-factorized once; each step is one B-multiply and
/// one forward/back substitution.
class CrankNicolson {
 public:
  CrankNicolson(const RadialGrid& grid, double mu, const std::vector<double>& v,
                const std::vector<double>& w_absorb, double dt)
      : n_(grid.n), aoff_(0.0), boff_(0.0) {
    const double h = grid.dr;
    const cplx half_idt(0.0, 0.5 * dt);
    aoff_ = -half_idt * (mu / (h * h));
    boff_ = -aoff_;
    adiag_.resize(n_ + 1);
    bdiag_.resize(n_ + 1);
    for (std::size_t i = 1; i < n_; ++i) {
      const cplx hd = 2.0 * mu / (h * h) + cplx(v[i], -w_absorb[i]);
      adiag_[i] = 1.0 + half_idt * hd;
      bdiag_[i] = 1.0 - half_idt * hd;
    }
    cp_.resize(n_ + 1);
    inv_.resize(n_ + 1);
    inv_[1] = 1.0 / adiag_[1];
    cp_[1] = aoff_ * inv_[1];
    for (std::size_t i = 2; i < n_; ++i) {
      inv_[i] = 1.0 / (adiag_[i] - aoff_ * cp_[i - 1]);
      cp_[i] = aoff_ * inv_[i];
    }
    d_.resize(n_ + 1);
  }

  void step(std::vector<cplx>& u) {
    // d = B u (Dirichlet ends are zero)
    d_[0] = 0.0;
    d_[n_] = 0.0;
    for (std::size_t i = 1; i < n_; ++i) {
      d_[i] = bdiag_[i] * u[i] + boff_ * (u[i - 1] + u[i + 1]);
    }
    // solve A u = d
    u[0] = 0.0;
    u[n_] = 0.0;
    d_[1] *= inv_[1];
    for (std::size_t i = 2; i < n_; ++i) d_[i] = (d_[i] - aoff_ * d_[i - 1]) * inv_[i];
    u[n_ - 1] = d_[n_ - 1];
    for (std::size_t i = n_ - 1; i-- > 1;) u[i] = d_[i] - cp_[i] * u[i + 1];
  }

 private:
  std::size_t n_;
  cplx aoff_, boff_;
  std::vector<cplx> adiag_, bdiag_, cp_, inv_, d_;
};

std::vector<double> absorber_profile(const RadialGrid& grid, const EvolveOptions& opts) {
  std::vector<double> w(grid.size(), 0.0);
  if (!opts.absorbing) return w;
  const double ra = opts.ramp_fraction * grid.r_max();
  const double width = grid.r_max() - ra;
  for (std::size_t i = 0; i <= grid.n; ++i) {
    const double r = grid.r(i);
    if (r > ra) {
      const double x = (r - ra) / width;
      w[i] = opts.absorber_w0 * x * x * x;
    }
  }
  return w;
}

double u_mass(const std::vector<cplx>& u, double h) {
  double acc = 0.0;
  for (const auto& z : u) acc += std::norm(z);
  return 4.0 * kPi * acc * h;
}

void fill_report(EvolveReport* report, const std::vector<cplx>& u, const RadialGrid& grid,
                 double mass0) {
  if (!report) return;
  report->mass_initial = mass0;
  report->mass_final = u_mass(u, grid.dr);
  double amp = 0.0;
  const std::size_t from = grid.n - std::max<std::size_t>(2, grid.n / 50);
  for (std::size_t i = from; i <= grid.n; ++i) {
    const double r = grid.r(i);
    if (r > 0.0) amp = std::max(amp, std::abs(u[i]) / r);
  }
  report->boundary_amp = amp;
}

}  // namespace

RadialField evolve_radial(const RadialField& field, const PotentialSpec& spec, double T,
                          double dt, const EvolveOptions& opts, EvolveReport* report) {
  if (!(dt > 0.0)) throw validation_error("evolve_radial: dt must be > 0");
  std::vector<std::string> warnings;
  std::vector<cplx> u = field_to_u(field, &warnings);
  const double mass0 = u_mass(u, field.grid.dr);

  if (T != 0.0) {
    const double span = std::abs(T);
    const double step_mag = std::min(dt, span);  // dt clamped to the requested horizon
    const std::size_t steps =
        static_cast<std::size_t>(std::ceil(span / step_mag - 1e-12));
    const double dt_eff = T / static_cast<double>(steps);

    std::vector<double> v(field.grid.size());
    for (std::size_t i = 0; i < field.grid.size(); ++i) v[i] = spec.eval(field.grid.r(i));
    const std::vector<double> w = absorber_profile(field.grid, opts);
    CrankNicolson cn(field.grid, field.mu, v, w, dt_eff);
    for (std::size_t s = 0; s < steps; ++s) cn.step(u);
    check_finite(u, "evolve_radial");
  }

  RadialField out = u_to_field(field.grid, u, field.mu);
  out.absorber_start = opts.absorbing ? opts.ramp_fraction * field.grid.r_max()
                                      : field.absorber_start;
  fill_report(report, u, field.grid, mass0);
  if (report) report->warnings = std::move(warnings);
  return out;
}

void evolve_radial_sampled(const RadialField& field, const PotentialSpec& spec,
                           const std::vector<double>& sample_times, double dt,
                           const std::function<void(double, const RadialField&)>& visit,
                           const EvolveOptions& opts) {
  if (!(dt > 0.0)) throw validation_error("evolve_radial_sampled: dt must be > 0");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (sample_times[i] < 0.0 || (i > 0 && sample_times[i] <= sample_times[i - 1])) {
      throw validation_error("evolve_radial_sampled: times must be nonnegative and increasing");
    }
  }
  std::vector<cplx> u = field_to_u(field, nullptr);
  std::vector<double> v(field.grid.size());
  for (std::size_t i = 0; i < field.grid.size(); ++i) v[i] = spec.eval(field.grid.r(i));
  const std::vector<double> w = absorber_profile(field.grid, opts);
  const double absorber_start =
      opts.absorbing ? opts.ramp_fraction * field.grid.r_max() : field.absorber_start;

  double t = 0.0;
  for (double target : sample_times) {
    const double seg = target - t;
    if (seg > 0.0) {
      const double step_mag = std::min(dt, seg);
      const std::size_t steps = static_cast<std::size_t>(std::ceil(seg / step_mag - 1e-12));
      const double dt_eff = seg / static_cast<double>(steps);
      CrankNicolson cn(field.grid, field.mu, v, w, dt_eff);
      for (std::size_t s = 0; s < steps; ++s) cn.step(u);
      check_finite(u, "evolve_radial_sampled");
      t = target;
    }
    RadialField snap = u_to_field(field.grid, u, field.mu);
    snap.absorber_start = absorber_start;
    visit(target, snap);
  }
}

RadialField evolve_free(const RadialField& field, double mu, double T,
                        std::vector<std::string>* warnings) {
  const std::size_t n = field.grid.n;
  std::vector<cplx> u = field_to_u(field, warnings);

  Fft1d fft(2 * n);
  cplx* z = fft.data();
  z[0] = 0.0;
  z[n] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    z[i] = u[i];
    z[2 * n - i] = -u[i];
  }
  fft.forward();

  // Spectral-tail diagnostic: mass in the top 10% of sine modes.
  if (warnings) {
    double total = 0.0, tail = 0.0;
    for (std::size_t m = 0; m < 2 * n; ++m) {
      const std::size_t mm = std::min(m, 2 * n - m);
      const double p = std::norm(z[m]);
      total += p;
      if (mm >= (9 * n) / 10) tail += p;
    }
    if (total > 0.0 && tail > 1e-12 * total) {
      warnings->push_back("spectral tail above 1e-12 of mass; grid under-resolves the data");
    }
  }

  const double k1 = kPi / field.grid.r_max();
  for (std::size_t m = 0; m < 2 * n; ++m) {
    const double mm = static_cast<double>(std::min(m, 2 * n - m));
    const double k = k1 * mm;
    z[m] *= std::polar(1.0 / (2.0 * static_cast<double>(n)), -mu * k * k * T);
  }
  fft.backward();

  for (std::size_t i = 1; i < n; ++i) u[i] = z[i];
  u[0] = 0.0;
  u[n] = 0.0;
  check_finite(u, "evolve_free");
  RadialField out = u_to_field(field.grid, u, field.mu);
  out.absorber_start = field.absorber_start;
  return out;
}

RadialField evolve_weighted(const RadialField& field, const ScatteringSolution& sol,
                            const PotentialSpec& spec, double T, double dt,
                            const EvolveOptions& opts) {
  if (std::abs(field.mu - 2.0) > 1e-12) {
    throw validation_error("evolve_weighted: the quotient flow is defined for pair fields (mu = 2)");
  }
  if (sol.potential_hash != spec.hash()) {
    throw validation_error("evolve_weighted: solution was built from a different potential");
  }
  RadialField damped = field;
  for (std::size_t i = 0; i < field.grid.size(); ++i) {
    damped.psi[i] *= (1.0 - omega_at(sol, 1, field.grid.r(i)));
  }
  damped.norm_at_construction = l2_norm(damped);
  RadialField evolved = evolve_radial(damped, spec, T, dt, opts);
  for (std::size_t i = 0; i < field.grid.size(); ++i) {
    evolved.psi[i] /= (1.0 - omega_at(sol, 1, field.grid.r(i)));
  }
  evolved.norm_at_construction = l2_norm(evolved);
  return evolved;
}

double weighted_norm(const RadialField& field, const ScatteringSolution& sol) {
  const std::size_t n = field.grid.n;
  const double h = field.grid.dr;
  double acc = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double r = field.grid.r(i);
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    const double om = 1.0 - omega_at(sol, 1, r);
    acc += w * om * om * std::norm(field.psi[i]) * r * r * h;
  }
  return std::sqrt(4.0 * kPi * acc);
}

CartesianField evolve_cartesian(const CartesianField& field, const PotentialSpec& spec,
                                double T, double dt, EvolveReport* report) {
  const std::size_t n = field.n;
  if (n == 0 || (n & (n - 1)) != 0) {
    throw validation_error("evolve_cartesian: box size must be a power of two");
  }
  if (n > 512) throw resource_error("evolve_cartesian: box exceeds the allocation guard");
  if (!(dt > 0.0)) throw validation_error("evolve_cartesian: dt must be > 0");

  // Packet-extent precondition: the box must be at least 4x the radius that
  // holds all but 1e-6 of the mass.
  {
    const std::size_t bins = n;
    std::vector<double> shell(bins, 0.0);
    double total = 0.0;
    const double rmax = 0.5 * std::sqrt(3.0) * field.box_side();
    for (std::size_t iz = 0; iz < n; ++iz) {
      for (std::size_t iy = 0; iy < n; ++iy) {
        for (std::size_t ix = 0; ix < n; ++ix) {
          const double x = field.coord(ix), y = field.coord(iy), zc = field.coord(iz);
          const double rad = std::sqrt(x * x + y * y + zc * zc);
          const double p = std::norm(field.psi[field.index(ix, iy, iz)]);
          shell[std::min(bins - 1, static_cast<std::size_t>(rad / rmax * bins))] += p;
          total += p;
        }
      }
    }
    double outside = total;
    double extent = rmax;
    for (std::size_t b = 0; b < bins; ++b) {
      outside -= shell[b];
      if (outside <= 1e-6 * total) {
        extent = rmax * static_cast<double>(b + 1) / static_cast<double>(bins);
        break;
      }
    }
    if (field.box_side() < 4.0 * extent) {
      throw validation_error("evolve_cartesian: box smaller than 4x the packet extent");
    }
  }

  const double span = std::abs(T);
  CartesianField out = field;
  if (span == 0.0) {
    if (report) {
      report->mass_initial = report->mass_final = l2_norm(field);
    }
    return out;
  }
  const double step_mag = std::min(dt, span);
  const std::size_t steps = static_cast<std::size_t>(std::ceil(span / step_mag - 1e-12));
  const double dt_eff = T / static_cast<double>(steps);

  // Half-step potential phases and separable kinetic phases.
  std::vector<cplx> vhalf(n * n * n);
  for (std::size_t iz = 0; iz < n; ++iz) {
    for (std::size_t iy = 0; iy < n; ++iy) {
      for (std::size_t ix = 0; ix < n; ++ix) {
        const double x = out.coord(ix), y = out.coord(iy), zc = out.coord(iz);
        const double v = spec.eval(std::sqrt(x * x + y * y + zc * zc));
        vhalf[out.index(ix, iy, iz)] = std::polar(1.0, -0.5 * v * dt_eff);
      }
    }
  }
  const double dk = 2.0 * kPi / out.box_side();
  std::vector<cplx> kin(n);
  const double norm3 = 1.0 / static_cast<double>(n * n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = (i <= n / 2) ? static_cast<double>(i)
                                  : static_cast<double>(i) - static_cast<double>(n);
    const double k = dk * f;
    kin[i] = std::polar(1.0, -field.mu * k * k * dt_eff);
  }

  Fft3d fft(n);
  cplx* buf = fft.data();
  const double mass0 = l2_norm(field);

  std::copy(out.psi.begin(), out.psi.end(), buf);
  for (std::size_t s = 0; s < steps; ++s) {
    for (std::size_t idx = 0; idx < out.psi.size(); ++idx) buf[idx] *= vhalf[idx];
    fft.forward();
    for (std::size_t iz = 0; iz < n; ++iz) {
      for (std::size_t iy = 0; iy < n; ++iy) {
        const cplx kyz = kin[iy] * kin[iz];
        cplx* row = buf + out.index(0, iy, iz);
        for (std::size_t ix = 0; ix < n; ++ix) row[ix] *= kin[ix] * kyz * norm3;
      }
    }
    fft.backward();
    for (std::size_t idx = 0; idx < out.psi.size(); ++idx) buf[idx] *= vhalf[idx];
  }
  std::copy(buf, buf + out.psi.size(), out.psi.begin());

  for (const auto& z : out.psi) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw numerical_error("evolve_cartesian: non-finite sample produced");
    }
  }
  if (report) {
    report->mass_initial = mass0;
    report->mass_final = l2_norm(out);
    // Wrap-around diagnostic: mass accumulating on the box faces.
    double face = 0.0, total = 0.0;
    for (std::size_t iz = 0; iz < n; ++iz) {
      for (std::size_t iy = 0; iy < n; ++iy) {
        for (std::size_t ix = 0; ix < n; ++ix) {
          const double p = std::norm(out.psi[out.index(ix, iy, iz)]);
          total += p;
          const auto edge = [n](std::size_t i) { return i < 2 || i + 2 >= n; };
          if (edge(ix) || edge(iy) || edge(iz)) face += p;
        }
      }
    }
    if (face > 1e-8 * total) {
      report->warnings.push_back("mass reached the box faces; wrap-around contamination likely");
    }
  }
  return out;
}

RadialField evolve_onebody(const RadialField& field, const PotentialSpec& spec, double T,
                           double dt) {
  if (!(dt > 0.0)) throw validation_error("evolve_onebody: dt must be > 0");
  const std::size_t n = field.grid.n;
  std::vector<cplx> u = field_to_u(field, nullptr);
  if (T == 0.0) {
    RadialField out = u_to_field(field.grid, u, 1.0);
    out.absorber_start = field.absorber_start;
    return out;
  }
  const double span = std::abs(T);
  const double step_mag = std::min(dt, span);
  const std::size_t steps = static_cast<std::size_t>(std::ceil(span / step_mag - 1e-12));
  const double dt_eff = T / static_cast<double>(steps);

  // Strang split: half kinetic, (full potential, full kinetic)^(steps-1),
  // full potential, half kinetic. Kinetic factors are exact in the odd-
  // extension sine basis, so no phase error accumulates on free segments.
  std::vector<cplx> vphase(n + 1), kin_full(2 * n), kin_half(2 * n);
  for (std::size_t i = 0; i <= n; ++i) {
    vphase[i] = std::polar(1.0, -0.5 * spec.eval(field.grid.r(i)) * dt_eff);
  }
  const double k1 = kPi / field.grid.r_max();
  const double fft_norm = 1.0 / (2.0 * static_cast<double>(n));
  for (std::size_t m = 0; m < 2 * n; ++m) {
    const double mm = static_cast<double>(std::min(m, 2 * n - m));
    const double k2 = k1 * k1 * mm * mm;
    kin_full[m] = std::polar(fft_norm, -k2 * dt_eff);
    kin_half[m] = std::polar(fft_norm, -0.5 * k2 * dt_eff);
  }

  Fft1d fft(2 * n);
  cplx* z = fft.data();
  auto load = [&]() {
    z[0] = 0.0;
    z[n] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      z[i] = u[i];
      z[2 * n - i] = -u[i];
    }
  };
  auto store = [&]() {
    for (std::size_t i = 1; i < n; ++i) u[i] = z[i];
  };
  auto kinetic = [&](const std::vector<cplx>& phase) {
    load();
    fft.forward();
    for (std::size_t m = 0; m < 2 * n; ++m) z[m] *= phase[m];
    fft.backward();
    store();
  };
  auto potential = [&]() {
    for (std::size_t i = 1; i < n; ++i) u[i] *= vphase[i];
  };

  kinetic(kin_half);
  for (std::size_t s = 0; s + 1 < steps; ++s) {
    potential();
    kinetic(kin_full);
  }
  potential();
  kinetic(kin_half);

  check_finite(u, "evolve_onebody");
  RadialField out = u_to_field(field.grid, u, 1.0);
  out.absorber_start = field.absorber_start;
  return out;
}

MollerResult moller_transform(const RadialField& field, const PotentialSpec& spec, double t0,
                              MollerDirection direction, double dt) {
  if (!(t0 > 0.0)) throw validation_error("moller_transform: t0 must be > 0");
  MollerResult res;
  if (direction == MollerDirection::adjoint) {
    RadialField s1 = evolve_onebody(field, spec, t0, dt);
    RadialField s2 = evolve_onebody(s1, spec, t0, dt);
    RadialField a1 = evolve_free(s1, 1.0, -t0);
    RadialField a2 = evolve_free(s2, 1.0, -2.0 * t0);
    res.cauchy_defect = l2_distance(a1, a2);
    res.field = std::move(a1);
  } else {
    RadialField f1 = evolve_free(field, 1.0, t0);
    RadialField b1 = evolve_onebody(f1, spec, -t0, dt);
    RadialField f2 = evolve_free(field, 1.0, 2.0 * t0);
    RadialField b2 = evolve_onebody(f2, spec, -2.0 * t0, dt);
    res.cauchy_defect = l2_distance(b1, b2);
    res.field = std::move(b1);
  }
  return res;
}

}  // namespace corrlab
