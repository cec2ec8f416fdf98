#pragma once

#include <string>
#include <vector>

#include "corrlab/field.hpp"

namespace corrlab {

/// Exponent triple for the weighted decay estimate
///   ||exp(i t Laplacian) f||_q <= C t^{-3/2 (1/s - 1/q)} (||f||_s + ||grad f||_{3s/(s+3)})
///                               + C t^{-[3/2 (1/r - 1/q) - 1]} ||grad^2 f||_r.
/// Admissible ranges: s in [3/2, inf], q in [max(s, 3), inf],
/// r in [1, 3q/(3+2q)]; infinities are allowed and mean sup norms / zero
/// decay contribution from that slot.
struct DecayIndices {
  double s = 0.0;
  double q = 0.0;
  double r = 0.0;
  double grad_index = 0.0;    // 3s/(s+3), the forced index of grad f
  double power_main = 0.0;    // 3/2 (1/s - 1/q)
  double power_hessian = 0.0; // 3/2 (1/r - 1/q) - 1
};

/// Validates the triple and computes the derived exponents; throws
/// validation_error naming the violated constraint otherwise.
DecayIndices validate_decay_indices(double s, double q, double r);

/// Right-hand side of the sup-norm specialization (q = inf, r = 3s/(2s+3),
/// admissible for s in [3, inf]): the three norms, their sum, and the
/// predicted decay power 3/(2s). Norms are rotationally correct radial
/// L^p integrals of the sampled field.
struct RhsReport {
  double s = 0.0;
  double q_f = 0.0;     // = s
  double q_grad = 0.0;  // 3s/(s+3)
  double q_hess = 0.0;  // 3s/(2s+3)
  double norm_f = 0.0;
  double norm_grad = 0.0;
  double norm_hess = 0.0;
  double total = 0.0;
  double predicted_power = 0.0;
};
RhsReport estimate_rhs(const RadialField& field, double s);

/// Effective spectral bandwidth of the sampled data: the smallest wavenumber
/// k such that the modes above k hold at most `tail_mass` of the spectral
/// energy (sine basis of the odd extension on [0, r_max]). Used to size grids
/// so that free flight up to a chosen horizon stays clear of the boundary.
double spectral_band(const RadialField& field, double tail_mass = 1e-6);

/// sup |exp(i t Laplacian) f| and sup |grad exp(i t Laplacian) f| at the
/// requested times, via one spectral decomposition of the data (exact free
/// propagator, mu = 1 convention required). Refuses time horizons the grid
/// clearly cannot hold (the effective band at tail mass 1e-6 must not carry
/// the support into the far boundary), and additionally watches the outer 2%
/// of nodes at every sample: amplitude there above 1e-3 of the instantaneous
/// sup is an error, above 1e-6 a recorded warning.
struct DecaySeries {
  std::vector<double> times;
  std::vector<double> sup;
  std::vector<double> grad_sup;
  std::vector<std::string> warnings;
};
DecaySeries supnorm_series(const RadialField& field, const std::vector<double>& times);

/// Least-squares power-law fit value ~ t^{-alpha} on log-log axes over all
/// supplied samples (at least 5, strictly positive). residual is the RMS of
/// the log-space misfit.
struct ExponentFit {
  double alpha = 0.0;
  double residual = 0.0;
};
ExponentFit fit_exponent(const std::vector<double>& times, const std::vector<double>& values);

/// Plain L1 mass 4 pi Int |f| r^2 dr; the input the unweighted decay bound
/// would need, recorded to show when it diverges with the data scale.
double l1_norm(const RadialField& field);

}  // namespace corrlab
