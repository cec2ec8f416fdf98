#include "corrlab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>

#include "corrlab/errors.hpp"
#include "corrlab/fd.hpp"
#include "corrlab/quadrature.hpp"

namespace corrlab {

namespace {

using cplx = std::complex<double>;

/// Trapezoid rule over uniformly spaced samples.
double trapezoid(const std::vector<double>& f, double h) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * h;
}

double sup_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, x);
  return s;
}

/// Largest third-difference magnitude on the stride-2 subsample; used to
/// check that third derivatives are resolved before trusting them.
double radial_sup3_stride2(const std::vector<cplx>& f, double h) {
  std::vector<cplx> sub;
  sub.reserve(f.size() / 2 + 1);
  for (std::size_t i = 0; i < f.size(); i += 2) sub.push_back(f[i]);
  std::vector<double> m3(sub.size());
  fd::rotational_magnitudes(sub, 2.0 * h, nullptr, nullptr, &m3);
  return sup_of(m3);
}

void check_stride2(double sup_h, double sup_2h) {
  const double scale = std::max(sup_h, sup_2h);
  if (scale < 1e-300) return;  // identically flat data
  if (std::abs(sup_h - sup_2h) > 0.25 * scale) {
    throw validation_error(
        "triple_norm: third differences change by more than 25% under grid "
        "coarsening; the sampling is too coarse to certify them");
  }
}

}  // namespace

DataProfile data_profile(const std::string& name) {
  CutoffChi chi;
  DataProfile p;
  p.name = name;
  if (name == "cap") {
    p.support = 2.0;
    p.f = [chi](double rho) { return chi(rho); };
  } else if (name == "expcone") {
    p.support = 3.0;
    p.f = [chi](double rho) { return std::exp(-rho) * chi(rho / 1.5); };
  } else if (name == "gauss") {
    p.support = 4.0;
    p.f = [chi](double rho) { return std::exp(-0.5 * rho * rho) * chi(rho / 2.0); };
  } else {
    throw validation_error("data_profile: unknown profile '" + name +
                           "' (expected cap, expcone or gauss)");
  }
  return p;
}

RadialField make_scaled_data(const DataProfile& profile, double lambda, double dr, double r_max) {
  if (!(lambda > 0.0)) throw validation_error("make_scaled_data: lambda must be positive");
  if (!(r_max >= profile.support * lambda)) {
    throw validation_error("make_scaled_data: grid must contain the full data support " +
                           std::to_string(profile.support * lambda));
  }
  const RadialGrid grid = make_grid(dr, r_max);
  return make_radial_field(grid, 2.0,
                           [&](double r) { return cplx(profile.f(r / lambda), 0.0); });
}

double window_functional(const RadialField& evolved, const ScatteringSolution& sol, double L,
                         const CutoffChi& chi) {
  if (!(L > 0.0)) throw validation_error("window_functional: L must be positive");
  const double h = evolved.grid.dr;
  const double window_edge = 2.0 * L;
  if (window_edge + 2.0 * h > evolved.grid.r_max()) {
    throw validation_error("window_functional: window of radius 2L exceeds the grid");
  }
  if (evolved.absorber_start > 0.0 && window_edge > evolved.absorber_start) {
    throw validation_error(
        "window_functional: window overlaps the absorbing layer the field passed through");
  }

  // Quotient q = psi / (1 - omega) on the window plus one stencil cell.
  const std::size_t iend =
      std::min(evolved.grid.n, static_cast<std::size_t>(std::ceil(window_edge / h)) + 2);
  std::vector<cplx> q(iend + 1);
  for (std::size_t i = 0; i <= iend; ++i) {
    q[i] = evolved.psi[i] / (1.0 - omega_at(sol, 1, evolved.grid.r(i)));
  }

  std::vector<double> integrand(iend + 1, 0.0);
  for (std::size_t i = 1; i < iend; ++i) {
    const double r = evolved.grid.r(i);
    const double w = chi(r / L);
    if (w == 0.0) continue;
    const cplx dq = (q[i + 1] - q[i - 1]) / (2.0 * h);
    integrand[i] = w * std::norm(dq) * r * r;
  }
  return 4.0 * kPi * trapezoid(integrand, h);
}

WindowSplit window_split(const RadialField& psi_data, const ScatteringSolution& sol,
                         const PotentialSpec& spec, double L, double T, double dt,
                         const CutoffChi& chi, const EvolveOptions& opts) {
  if (spec.hash() != sol.potential_hash) {
    throw validation_error("window_split: potential does not match the correlation profile");
  }
  if (psi_data.mu != 2.0) {
    throw validation_error("window_split: data must use the pair convention mu = 2");
  }
  if (!(T >= 0.0)) throw validation_error("window_split: T must be nonnegative");

  RadialField part1 = psi_data;  // omega * psi: the correlation-carrying piece
  RadialField part2 = psi_data;  // (1 - omega) * psi: the smooth piece
  for (std::size_t i = 0; i <= psi_data.grid.n; ++i) {
    const double w = omega_at(sol, 1, psi_data.grid.r(i));
    part1.psi[i] *= w;
    part2.psi[i] *= 1.0 - w;
  }
  if (T > 0.0) {
    part1 = evolve_radial(part1, spec, T, dt, opts);
    part2 = evolve_radial(part2, spec, T, dt, opts);
  }
  WindowSplit out;
  out.F1 = window_functional(part1, sol, L, chi);
  out.F2 = window_functional(part2, sol, L, chi);
  return out;
}

double radial_autocorrelation(const InitialOrbital& orbital, double z) {
  z = std::abs(z);
  if (z < 1e-9) return orbital.l4_pow4();
  const double sigma = orbital.sigma();
  const double reach = 12.0 * sigma + z;
  auto density = [&orbital](double r) {
    const double v = orbital(r);
    return v * v;
  };
  // Two-center reduction: the angular integral over the sphere |y| = s of
  // rho(|y + z e|) collapses to a 1D integral over w = |y + z e|. The window
  // can be arbitrarily narrow (z -> 0), where adaptive error estimators
  // stall on the near-linear integrand; fixed Gauss panels on the sigma
  // scale are machine-exact there and need no estimate.
  auto inner_int = [&](double lo, double hi) {
    const int panels = 1 + static_cast<int>((hi - lo) / (0.25 * sigma));
    const double w = (hi - lo) / static_cast<double>(panels);
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
      acc += boost::math::quadrature::gauss<double, 15>::integrate(
          [&](double t) { return density(t) * t; }, lo + p * w, lo + (p + 1) * w);
    }
    return acc;
  };
  auto outer = [&](double s) {
    return s * density(s) * inner_int(std::abs(s - z), s + z);
  };
  return (2.0 * kPi / z) * integrate(outer, 0.0, reach, 1e-10);
}

FnInitialResult fn_initial(const InitialOrbital& orbital, const ScatteringSolution& sol, long n,
                           double ell, const CutoffChi& chi) {
  if (n < 1) throw validation_error("fn_initial: n must be >= 1");
  if (!(ell > 0.0)) throw validation_error("fn_initial: ell must be positive");

  auto gsq = [&](double rho) {
    const double w = omega_at(sol, n, rho);
    const double q = w / (1.0 - w);
    return q * q;
  };

  // The autocorrelation is smooth and expensive; sample it once on the window
  // and interpolate (clamped spline, even symmetry at z = 0).
  const double edge = 2.0 * ell;
  const std::size_t m = 128;
  const double hz = edge / static_cast<double>(m);
  std::vector<double> gs(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    gs[j] = radial_autocorrelation(orbital, hz * static_cast<double>(j));
  }
  const double slope_end = (25.0 * gs[m] - 48.0 * gs[m - 1] + 36.0 * gs[m - 2] -
                            16.0 * gs[m - 3] + 3.0 * gs[m - 4]) /
                           (12.0 * hz);
  const CubicSpline autocorr(0.0, hz, gs, 0.0, slope_end);

  FnInitialResult out;
  out.value = integrate_radial(
      [&](double rho) { return chi(rho / ell) * gsq(rho) * autocorr(rho); }, 0.0, edge, 1e-9);

  const double i_ell =
      integrate_radial([&](double rho) { return chi(rho / ell) * gsq(rho); }, 0.0, edge, 1e-9);
  const double g0 = orbital.l4_pow4();
  out.value_separable = g0 * i_ell;

  double max_drop = 0.0;
  for (double g : gs) max_drop = std::max(max_drop, g0 - g);
  out.correction_bound = i_ell * max_drop;

  out.asymptotic_constant = 4.0 * kPi * sol.a * sol.a * chi.l1_mass() * g0;
  return out;
}

TripleNormReport triple_norm(const RadialField& field) {
  if (field.grid.size() < 32) {
    throw validation_error("triple_norm: need at least 32 radial samples");
  }
  const double h = field.grid.dr;
  const std::size_t m = field.grid.size();
  std::vector<double> m1(m), m2(m), m3(m);
  fd::rotational_magnitudes(field.psi, h, &m1, &m2, &m3);
  check_stride2(sup_of(m3), radial_sup3_stride2(field.psi, h));

  TripleNormReport rep;
  std::vector<double> weighted(m);
  const std::vector<double>* mags[4] = {nullptr, &m1, &m2, &m3};
  for (int order = 0; order <= 3; ++order) {
    double sup = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double r = field.grid.r(i);
      const double mag = order == 0 ? std::abs(field.psi[i]) : (*mags[order])[i];
      sup = std::max(sup, mag);
      weighted[i] = mag * r * r;
    }
    rep.w31 += 4.0 * kPi * trapezoid(weighted, h);
    rep.w3inf += sup;
  }
  rep.total = rep.w31 + rep.w3inf;
  return rep;
}

namespace {

/// Derivative of order `order` along `axis` of a cubic array, 4th-order
/// central stencils with index clamping (data is required to vanish near the
/// box edge, so the clamp never sees signal).
void cartesian_derivative(const CartesianField& geom, const std::vector<cplx>& in, int axis,
                          int order, std::vector<cplx>& out) {
  const long n = static_cast<long>(geom.n);
  const double h = geom.h;
  const long stride = axis == 0 ? 1 : (axis == 1 ? n : n * n);
  out.assign(in.size(), cplx(0.0, 0.0));

  auto line_at = [&](long base) {
    return [&in, base, stride, n](long j) -> cplx {
      j = std::clamp(j, 0L, n - 1);
      return in[static_cast<std::size_t>(base + j * stride)];
    };
  };

  // Iterate over all lines parallel to `axis`.
  const long n2 = n * n;
  for (long outer = 0; outer < n2; ++outer) {
    long base = 0;
    if (axis == 0) {
      base = outer * n;  // outer enumerates (y, z)
    } else if (axis == 1) {
      base = (outer % n) + (outer / n) * n2;  // (x, z)
    } else {
      base = outer;  // (x, y)
    }
    auto f = line_at(base);
    for (long j = 0; j < n; ++j) {
      cplx v;
      if (order == 1) {
        v = (f(j - 2) - f(j + 2) + 8.0 * (f(j + 1) - f(j - 1))) / (12.0 * h);
      } else if (order == 2) {
        v = (-(f(j + 2) + f(j - 2)) + 16.0 * (f(j + 1) + f(j - 1)) - 30.0 * f(j)) /
            (12.0 * h * h);
      } else {
        v = (f(j - 3) - f(j + 3) + 8.0 * (f(j + 2) - f(j - 2)) +
             13.0 * (f(j - 1) - f(j + 1))) /
            (8.0 * h * h * h);
      }
      out[static_cast<std::size_t>(base + j * stride)] = v;
    }
  }
}

/// sup over the box of the pure (axis-aligned) third-derivative magnitude.
double cartesian_sup_pure3(const CartesianField& geom, const std::vector<cplx>& psi) {
  std::vector<cplx> tmp;
  std::vector<double> acc(psi.size(), 0.0);
  for (int axis = 0; axis < 3; ++axis) {
    cartesian_derivative(geom, psi, axis, 3, tmp);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::norm(tmp[i]);
  }
  double sup = 0.0;
  for (double v : acc) sup = std::max(sup, v);
  return std::sqrt(sup);
}

}  // namespace

TripleNormReport triple_norm(const CartesianField& field) {
  const std::size_t n = field.n;
  if (n < 16) throw validation_error("triple_norm: box must have at least 16 cells per side");
  if (n > 128) throw resource_error("triple_norm: box larger than 128^3 is not supported");

  // The clamped stencils assume the data is quiet near the box edge.
  double edge_amp = 0.0, peak = 0.0;
  for (std::size_t iz = 0; iz < n; ++iz) {
    for (std::size_t iy = 0; iy < n; ++iy) {
      for (std::size_t ix = 0; ix < n; ++ix) {
        const double a = std::abs(field.psi[field.index(ix, iy, iz)]);
        peak = std::max(peak, a);
        const bool boundary = ix < 2 || iy < 2 || iz < 2 || ix >= n - 2 || iy >= n - 2 ||
                              iz >= n - 2;
        if (boundary) edge_amp = std::max(edge_amp, a);
      }
    }
  }
  if (peak > 0.0 && edge_amp > 1e-6 * peak) {
    throw validation_error("triple_norm: data reaches the box edge; enlarge the box");
  }

  const std::size_t total = field.psi.size();
  std::vector<cplx> gx, gy, gz, dyz, tmp;
  cartesian_derivative(field, field.psi, 0, 1, gx);
  cartesian_derivative(field, field.psi, 1, 1, gy);
  cartesian_derivative(field, field.psi, 2, 1, gz);

  std::vector<double> acc2(total, 0.0), acc3(total, 0.0);
  auto accumulate = [&](std::vector<double>& acc, const std::vector<cplx>& d, double mult) {
    for (std::size_t i = 0; i < total; ++i) acc[i] += mult * std::norm(d[i]);
  };

  // Hessian: three pure and three mixed entries (each mixed counts twice).
  cartesian_derivative(field, field.psi, 0, 2, tmp);
  accumulate(acc2, tmp, 1.0);
  cartesian_derivative(field, field.psi, 1, 2, tmp);
  accumulate(acc2, tmp, 1.0);
  cartesian_derivative(field, field.psi, 2, 2, tmp);
  accumulate(acc2, tmp, 1.0);
  cartesian_derivative(field, gy, 0, 1, tmp);  // d_x d_y
  accumulate(acc2, tmp, 2.0);
  cartesian_derivative(field, gz, 0, 1, tmp);  // d_x d_z
  accumulate(acc2, tmp, 2.0);
  cartesian_derivative(field, gz, 1, 1, dyz);  // d_y d_z (kept for d_x d_y d_z)
  accumulate(acc2, dyz, 2.0);

  // Third order: pure (x1), two-repeated-index (x3), all-distinct (x6).
  std::vector<double> pure3(total, 0.0);
  for (int axis = 0; axis < 3; ++axis) {
    cartesian_derivative(field, field.psi, axis, 3, tmp);
    accumulate(acc3, tmp, 1.0);
    accumulate(pure3, tmp, 1.0);
  }
  cartesian_derivative(field, gy, 0, 2, tmp);  // d_xx d_y
  accumulate(acc3, tmp, 3.0);
  cartesian_derivative(field, gz, 0, 2, tmp);  // d_xx d_z
  accumulate(acc3, tmp, 3.0);
  cartesian_derivative(field, gx, 1, 2, tmp);  // d_yy d_x
  accumulate(acc3, tmp, 3.0);
  cartesian_derivative(field, gz, 1, 2, tmp);  // d_yy d_z
  accumulate(acc3, tmp, 3.0);
  cartesian_derivative(field, gx, 2, 2, tmp);  // d_zz d_x
  accumulate(acc3, tmp, 3.0);
  cartesian_derivative(field, gy, 2, 2, tmp);  // d_zz d_y
  accumulate(acc3, tmp, 3.0);
  cartesian_derivative(field, dyz, 0, 1, tmp);  // d_x d_y d_z
  accumulate(acc3, tmp, 6.0);

  // Stride-2 resolution audit on the pure third derivatives.
  {
    CartesianField coarse;
    coarse.n = n / 2;
    coarse.h = 2.0 * field.h;
    coarse.mu = field.mu;
    coarse.psi.resize(coarse.n * coarse.n * coarse.n);
    for (std::size_t iz = 0; iz < coarse.n; ++iz) {
      for (std::size_t iy = 0; iy < coarse.n; ++iy) {
        for (std::size_t ix = 0; ix < coarse.n; ++ix) {
          coarse.psi[coarse.index(ix, iy, iz)] = field.psi[field.index(2 * ix, 2 * iy, 2 * iz)];
        }
      }
    }
    double sup_fine = 0.0;
    for (double v : pure3) sup_fine = std::max(sup_fine, v);
    check_stride2(std::sqrt(sup_fine), cartesian_sup_pure3(coarse, coarse.psi));
  }

  TripleNormReport rep;
  const double cell = field.h * field.h * field.h;
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  double x0 = 0.0, x1 = 0.0, x2 = 0.0, x3 = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    const double m0 = std::abs(field.psi[i]);
    const double m1 = std::sqrt(std::norm(gx[i]) + std::norm(gy[i]) + std::norm(gz[i]));
    const double m2 = std::sqrt(acc2[i]);
    const double m3 = std::sqrt(acc3[i]);
    s0 += m0;
    s1 += m1;
    s2 += m2;
    s3 += m3;
    x0 = std::max(x0, m0);
    x1 = std::max(x1, m1);
    x2 = std::max(x2, m2);
    x3 = std::max(x3, m3);
  }
  rep.w31 = cell * (s0 + s1 + s2 + s3);
  rep.w3inf = x0 + x1 + x2 + x3;
  rep.total = rep.w31 + rep.w3inf;
  return rep;
}

HamiltonianMoments hamiltonian_moments(const InitialOrbital& orbital, const PotentialSpec& spec,
                                       double n) {
  if (spec.scale_n() != 1) {
    throw validation_error(
        "hamiltonian_moments: pass the unscaled profile; the particle number supplies the "
        "rescaling");
  }
  if (!(n >= 2.0)) throw validation_error("hamiltonian_moments: need n >= 2");

  const double R = spec.range();

  // Over the interaction range the autocorrelation argument w / n stays tiny,
  // so the factor is smooth and nearly flat; sample it once and interpolate
  // (clamped spline, even symmetry at w = 0) instead of re-deriving it at
  // every quadrature node.
  const std::size_t m = 128;
  const double hw = R / static_cast<double>(m);
  std::vector<double> gs(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    gs[j] = radial_autocorrelation(orbital, hw * static_cast<double>(j) / n);
  }
  const double slope_end = (25.0 * gs[m] - 48.0 * gs[m - 1] + 36.0 * gs[m - 2] -
                            16.0 * gs[m - 3] + 3.0 * gs[m - 4]) /
                           (12.0 * hw);
  const CubicSpline gspline(0.0, hw, gs, 0.0, slope_end);
  auto g_at = [&](double w) { return gspline(w); };

  // Pair reductions, substituted back to the unscaled variable w = n x.
  const double ivg =
      4.0 * kPi * integrate([&](double w) { return spec(w) * g_at(w) * w * w; }, 0.0, R, 1e-10);
  const double iv2g = 4.0 * kPi * integrate(
                                      [&](double w) {
                                        const double v = spec(w);
                                        return v * v * g_at(w) * w * w;
                                      },
                                      0.0, R, 1e-10);

  const PotentialNorms norms = potential_norms(spec);
  const double g0 = orbital.l4_pow4();
  const double grad2 = orbital.grad_l2() * orbital.grad_l2();
  const double lap = orbital.lap_l2();

  HamiltonianMoments out;
  out.e1_per_N = grad2 + (n - 1.0) / (2.0 * n) * ivg;
  out.e1_limit = grad2 + 0.5 * norms.L1 * g0;
  out.h2_leading_per_N3 = (n - 1.0) / n * 0.5 * iv2g;
  out.h2_limit = 0.5 * norms.L2 * norms.L2 * g0;

  // Crude envelopes of the non-leading second-moment terms, all divided by
  // n^3; reported for inspection, not asserted.
  const double vbar = ivg / n;             // <V_n> on one pair
  const double q2n = n * iv2g;             // <V_n^2> on one pair
  double sup_density = orbital(0.0) * orbital(0.0);
  for (int j = 1; j <= 512; ++j) {
    const double r = 8.0 * orbital.sigma() * static_cast<double>(j) / 512.0;
    sup_density = std::max(sup_density, orbital(r) * orbital(r));
  }
  const double n3 = n * n * n;
  std::map<std::string, double>& d = out.diagnostics;
  d["vbar_pair"] = vbar;
  d["q2_pair"] = q2n;
  d["kinetic_sq"] = (n * lap * lap + n * (n - 1.0) * grad2 * grad2) / n3;
  d["kin_pot_cross_bound"] =
      (n * (n - 1.0) * (n - 2.0) * grad2 * vbar + 2.0 * n * (n - 1.0) * lap * std::sqrt(q2n)) /
      n3;
  d["pot_offdiag_bound"] = (0.25 * n * (n - 1.0) * (n - 2.0) * (n - 3.0) * vbar * vbar +
                            n * (n - 1.0) * (n - 2.0) * (norms.L1 / n) * sup_density * vbar) /
                           n3;
  d["gap_leading"] = norms.L1 * g0 / (2.0 * n);
  return out;
}

CouplingConstants coupling_constants(const PotentialSpec& spec, const ScatteringSolution& sol) {
  if (spec.scale_n() != 1) {
    throw validation_error("coupling_constants: couplings are defined for the unscaled profile");
  }
  if (spec.hash() != sol.potential_hash) {
    throw validation_error("coupling_constants: potential does not match the solution");
  }
  CouplingConstants out;
  out.b = potential_norms(spec).L1;
  out.eight_pi_a = 8.0 * kPi * sol.a;
  // Int V omega over space: omega = 1 - u/r with the interpolated mode.
  out.excess = 4.0 * kPi * integrate(
                               [&](double r) {
                                 const double om = 1.0 - sol.u_spline(r) / r;
                                 return spec(r) * om * r * r;
                               },
                               0.0, spec.range(), 1e-11);
  return out;
}

NormTable uniform_norm_table(const DataProfile& profile, const ScatteringSolution& sol,
                             const std::vector<double>& lambdas, int m, double p) {
  if (m < 0 || m > 3) throw validation_error("uniform_norm_table: derivative order must be 0..3");
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw validation_error("uniform_norm_table: need a finite exponent p >= 1");
  }
  if (!(p * (m + 1.0) > 3.0)) {
    throw validation_error(
        "uniform_norm_table: p (m+1) <= 3 makes the tail integral diverge; no uniform bound "
        "exists");
  }
  if (lambdas.empty()) throw validation_error("uniform_norm_table: empty scale list");

  NormTable table;
  table.lambdas = lambdas;
  for (double lambda : lambdas) {
    if (!(lambda >= 1.0)) throw validation_error("uniform_norm_table: scales must be >= 1");
    const double dr = std::min(0.01, sol.support_radius / 100.0);
    const double r_max = profile.support * lambda + 10.0 * dr;
    const RadialGrid grid = make_grid(dr, r_max);
    std::vector<cplx> f(grid.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double r = grid.r(i);
      f[i] = cplx(omega_at(sol, 1, r) * profile.f(r / lambda), 0.0);
    }
    std::vector<double> mag(f.size());
    if (m == 0) {
      for (std::size_t i = 0; i < f.size(); ++i) mag[i] = std::abs(f[i]);
    } else {
      fd::rotational_magnitudes(f, dr, m == 1 ? &mag : nullptr, m == 2 ? &mag : nullptr,
                                   m == 3 ? &mag : nullptr);
    }
    std::vector<double> integrand(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double r = grid.r(i);
      integrand[i] = std::pow(mag[i], p) * r * r;
    }
    const double lp = std::pow(4.0 * kPi * trapezoid(integrand, dr), 1.0 / p);
    table.values.push_back(lp);
  }
  const auto [lo, hi] = std::minmax_element(table.values.begin(), table.values.end());
  table.max_over_min = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
  table.uniform = table.max_over_min <= 4.0;
  return table;
}

MacroParams micro_to_macro(double n, double ell, double t) {
  if (!(n >= 1.0)) throw validation_error("micro_to_macro: need n >= 1");
  if (!(t >= 0.0)) throw validation_error("micro_to_macro: need t >= 0");
  if (!(ell * n >= 1.0 - 1e-12)) {
    throw validation_error(
        "micro_to_macro: window radius below the interaction resolution scale (need ell >= "
        "1/n)");
  }
  return MacroParams{n, 2.0 * n * ell, n * n * t};
}

MicroParams macro_to_micro(double lambda, double L, double T) {
  if (!(lambda >= 1.0)) throw validation_error("macro_to_micro: need lambda >= 1");
  if (!(T >= 0.0)) throw validation_error("macro_to_micro: need T >= 0");
  if (!(L >= 2.0 - 1e-12)) {
    throw validation_error("macro_to_micro: L < 2 maps below the resolution scale ell = 1/n");
  }
  return MicroParams{lambda, L / (2.0 * lambda), T / (lambda * lambda)};
}

}  // namespace corrlab
