#include "corrlab/dispersive.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "corrlab/errors.hpp"
#include "corrlab/fd.hpp"
#include "corrlab/fft.hpp"
#include "corrlab/quadrature.hpp"

namespace corrlab {

namespace {

using cplx = std::complex<double>;

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

/// Smallest sine-mode index M such that the modes above M hold at most
/// tail_mass of the spectral energy. coef is the full length-2n spectrum of
/// the odd extension; entries m and 2n-m belong to the same physical mode.
std::size_t band_mode(const std::vector<cplx>& coef, std::size_t n, double tail_mass) {
  std::vector<double> band(n + 1, 0.0);
  double total = 0.0;
  for (std::size_t m = 0; m < 2 * n; ++m) {
    const std::size_t mm = std::min(m, 2 * n - m);
    band[mm] += std::norm(coef[m]);
    total += std::norm(coef[m]);
  }
  if (total == 0.0) return 0;
  const double thresh = tail_mass * total;
  double tail = 0.0;
  std::size_t m_eff = n;
  while (m_eff > 0 && tail + band[m_eff] <= thresh) {
    tail += band[m_eff];
    --m_eff;
  }
  return m_eff;
}

/// Full spectrum of the odd extension of r * psi on [0, 2 r_max].
std::vector<cplx> sine_spectrum(const RadialField& field) {
  const std::size_t n = field.grid.n;
  Fft1d fft(2 * n);
  cplx* z = fft.data();
  z[0] = 0.0;
  z[n] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const cplx u = field.psi[i] * field.grid.r(i);
    z[i] = u;
    z[2 * n - i] = -u;
  }
  fft.forward();
  return std::vector<cplx>(z, z + 2 * n);
}

/// Radial L^p norm (4 pi Int mag^p r^2 dr)^(1/p) of sampled magnitudes;
/// p = inf gives the sup.
double lp_radial(const std::vector<double>& mag, double h, double p) {
  if (std::isinf(p)) {
    double s = 0.0;
    for (double v : mag) s = std::max(s, v);
    return s;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < mag.size(); ++i) {
    const double r = h * static_cast<double>(i);
    const double w = (i == 0 || i + 1 == mag.size()) ? 0.5 : 1.0;
    acc += w * std::pow(mag[i], p) * r * r;
  }
  return std::pow(4.0 * kPi * acc * h, 1.0 / p);
}

}  // namespace

DecayIndices validate_decay_indices(double s, double q, double r) {
  if (std::isnan(s) || std::isnan(q) || std::isnan(r)) {
    throw validation_error("decay indices: NaN exponent");
  }
  if (!(s >= 1.5)) throw validation_error("decay indices: s must lie in [3/2, inf]");
  if (!(q >= 3.0) || !(q >= s)) {
    throw validation_error("decay indices: q must lie in [max(s, 3), inf]");
  }
  const double r_hi = std::isinf(q) ? 1.5 : 3.0 * q / (3.0 + 2.0 * q);
  if (!(r >= 1.0) || !(r <= r_hi + 1e-12)) {
    throw validation_error("decay indices: r must lie in [1, 3q/(3+2q)]");
  }
  DecayIndices idx;
  idx.s = s;
  idx.q = q;
  idx.r = r;
  idx.grad_index = std::isinf(s) ? 3.0 : 3.0 * s / (s + 3.0);
  idx.power_main = 1.5 * (inv(s) - inv(q));
  idx.power_hessian = 1.5 * (inv(r) - inv(q)) - 1.0;
  return idx;
}

RhsReport estimate_rhs(const RadialField& field, double s) {
  if (std::isnan(s) || !(s >= 3.0)) {
    throw validation_error(
        "estimate_rhs: the sup-norm form needs s in [3, inf] so that the forced second-"
        "derivative index stays >= 1");
  }
  RhsReport rep;
  rep.s = s;
  rep.q_f = s;
  rep.q_grad = std::isinf(s) ? 3.0 : 3.0 * s / (s + 3.0);
  rep.q_hess = std::isinf(s) ? 1.5 : 3.0 * s / (2.0 * s + 3.0);
  rep.predicted_power = std::isinf(s) ? 0.0 : 1.5 / s;

  const double h = field.grid.dr;
  const std::size_t m = field.grid.size();
  std::vector<double> m0(m), m1(m), m2(m);
  for (std::size_t i = 0; i < m; ++i) m0[i] = std::abs(field.psi[i]);
  fd::rotational_magnitudes(field.psi, h, &m1, &m2, nullptr);

  rep.norm_f = lp_radial(m0, h, rep.q_f);
  rep.norm_grad = lp_radial(m1, h, rep.q_grad);
  rep.norm_hess = lp_radial(m2, h, rep.q_hess);
  rep.total = rep.norm_f + rep.norm_grad + rep.norm_hess;
  return rep;
}

double spectral_band(const RadialField& field, double tail_mass) {
  if (std::isnan(tail_mass) || !(tail_mass > 0.0) || !(tail_mass < 1.0)) {
    throw validation_error("spectral_band: tail_mass must lie in (0, 1)");
  }
  const std::vector<cplx> coef = sine_spectrum(field);
  const std::size_t m_eff = band_mode(coef, field.grid.n, tail_mass);
  return kPi / field.grid.r_max() * static_cast<double>(m_eff);
}

DecaySeries supnorm_series(const RadialField& field, const std::vector<double>& times) {
  if (field.mu != 1.0) {
    throw validation_error("supnorm_series: free decay uses the one-body convention mu = 1");
  }
  if (times.empty()) throw validation_error("supnorm_series: no sample times");
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (!(times[j] >= 0.0) || (j > 0 && !(times[j] > times[j - 1]))) {
      throw validation_error("supnorm_series: times must be nonnegative and increasing");
    }
  }

  const std::size_t n = field.grid.n;
  const double h = field.grid.dr;
  const double r_max = field.grid.r_max();

  Fft1d fft(2 * n);
  cplx* z = fft.data();
  z[0] = 0.0;
  z[n] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const cplx u = field.psi[i] * field.grid.r(i);
    z[i] = u;
    z[2 * n - i] = -u;
  }
  fft.forward();
  std::vector<cplx> coef(z, z + 2 * n);

  double total = 0.0;
  for (std::size_t m = 0; m < 2 * n; ++m) total += std::norm(coef[m]);
  // Effective band: everything above it carries at most 1e-6 of the spectral
  // energy; a hard cutoff would overreact to the slow algebraic tails that
  // origin kinks in the data put into the sine coefficients.
  const std::size_t m_eff = band_mode(coef, n, 1e-6);
  const double k1 = kPi / r_max;
  const double k_eff = k1 * static_cast<double>(m_eff);

  DecaySeries out;
  out.times = times;
  if (total == 0.0) {
    out.sup.assign(times.size(), 0.0);
    out.grad_sup.assign(times.size(), 0.0);
    return out;
  }

  // Horizon guard: the populated modes travel at speed 2k; the slow spatial
  // tail of the data must not be pushed into the far boundary.
  double sup0 = 0.0;
  for (std::size_t i = 0; i <= n; ++i) sup0 = std::max(sup0, std::abs(field.psi[i]));
  double r_support = 0.0;
  for (std::size_t i = n + 1; i-- > 0;) {
    if (std::abs(field.psi[i]) > 1e-10 * sup0) {
      r_support = field.grid.r(i);
      break;
    }
  }
  const double horizon = r_support + 2.0 * k_eff * times.back();
  if (horizon > r_max) {
    std::ostringstream msg;
    msg << "supnorm_series: time horizon needs r_max >= " << horizon << " but the grid ends at "
        << r_max;
    throw numerical_error(msg.str());
  }
  if (m_eff >= (9 * n) / 10) {
    out.warnings.push_back("spectral band reaches 90% of the grid Nyquist; data under-resolved");
  }

  std::vector<cplx> psi_t(n + 1);
  const std::size_t edge_lo = n - std::max<std::size_t>(2, n / 50);
  bool edge_warned = false;
  for (double t : times) {
    for (std::size_t m = 0; m < 2 * n; ++m) {
      const double mm = static_cast<double>(std::min(m, 2 * n - m));
      const double k = k1 * mm;
      z[m] = coef[m] * std::polar(1.0 / (2.0 * static_cast<double>(n)), -k * k * t);
    }
    fft.backward();
    psi_t[0] = (8.0 * z[1] - z[2]) / (6.0 * h);
    for (std::size_t i = 1; i <= n; ++i) {
      psi_t[i] = (i == n ? cplx(0.0, 0.0) : z[i]) / field.grid.r(i);
    }
    double sup = 0.0, gsup = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      sup = std::max(sup, std::abs(psi_t[i]));
      gsup = std::max(gsup, std::abs(fd::d1(psi_t, i, h, fd::Parity::even)));
    }
    // A posteriori boundary watch: the outer 2% of nodes must stay quiet, or
    // the periodic images of the extension are feeding back into the samples.
    double edge = 0.0;
    for (std::size_t i = edge_lo; i <= n; ++i) edge = std::max(edge, std::abs(psi_t[i]));
    if (sup > 0.0 && edge > 1e-3 * sup) {
      std::ostringstream msg;
      msg << "supnorm_series: boundary contamination at t = " << t
          << " (outer-shell amplitude above 1e-3 of the sup); enlarge r_max";
      throw numerical_error(msg.str());
    }
    if (sup > 0.0 && edge > 1e-6 * sup && !edge_warned) {
      std::ostringstream msg;
      msg << "outer 2% of the grid reached 1e-6 of the sup by t = " << t;
      out.warnings.push_back(msg.str());
      edge_warned = true;
    }
    out.sup.push_back(sup);
    out.grad_sup.push_back(gsup);
  }
  return out;
}

ExponentFit fit_exponent(const std::vector<double>& times, const std::vector<double>& values) {
  if (times.size() != values.size()) {
    throw validation_error("fit_exponent: times and values differ in length");
  }
  if (times.size() < 5) throw validation_error("fit_exponent: need at least 5 samples");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0) || !(values[i] > 0.0)) {
      throw validation_error("fit_exponent: samples must be strictly positive");
    }
    x.push_back(std::log(times[i]));
    y.push_back(std::log(values[i]));
  }
  const double nn = static_cast<double>(x.size());
  double xb = 0.0, yb = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xb += x[i];
    yb += y[i];
  }
  xb /= nn;
  yb /= nn;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - xb) * (x[i] - xb);
    sxy += (x[i] - xb) * (y[i] - yb);
  }
  if (!(sxx > 0.0)) throw validation_error("fit_exponent: degenerate time samples");
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (yb + slope * (x[i] - xb));
    rss += e * e;
  }
  ExponentFit fit;
  fit.alpha = -slope;
  fit.residual = std::sqrt(rss / nn);
  return fit;
}

double l1_norm(const RadialField& field) {
  const double h = field.grid.dr;
  double acc = 0.0;
  for (std::size_t i = 0; i <= field.grid.n; ++i) {
    const double r = field.grid.r(i);
    const double w = (i == 0 || i == field.grid.n) ? 0.5 : 1.0;
    acc += w * std::abs(field.psi[i]) * r * r;
  }
  return 4.0 * kPi * acc * h;
}

}  // namespace corrlab
