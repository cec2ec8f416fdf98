#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "corrlab/cutoff.hpp"
#include "corrlab/field.hpp"
#include "corrlab/orbital.hpp"
#include "corrlab/potential.hpp"
#include "corrlab/propagator.hpp"
#include "corrlab/scattering.hpp"

namespace corrlab {

/// Envelope profile for scaled data psi_Lambda(r) = f(r / Lambda). support is
/// in units of Lambda; all profiles vanish identically beyond it.
struct DataProfile {
  std::string name;
  double support = 2.0;
  std::function<double(double)> f;
};

/// Built-in profiles:
///   cap      flat plateau (the window shape itself): 1 up to Lambda,
///            smoothly down to 0 at 2 Lambda
///   expcone  exp(-rho) tapered to 0 at 3 Lambda; its unit gradient at the
///            origin makes window gradients scale exactly like 1/Lambda
///   gauss    exp(-rho^2/2) tapered to 0 at 4 Lambda
DataProfile data_profile(const std::string& name);

/// Scaled data field profile(r / Lambda) on a grid reaching r_max (pair
/// convention, mu = 2).
RadialField make_scaled_data(const DataProfile& profile, double lambda, double dr, double r_max);

/// Localized correlation-energy functional
///   F = 4 pi Int chi(r/L) |d/dr (psi / (1 - omega))|^2 r^2 dr,
/// centered differences on the quotient. Rejects windows that overlap the
/// absorbing layer the field passed through.
double window_functional(const RadialField& evolved, const ScatteringSolution& sol, double L,
                         const CutoffChi& chi);

/// Evolves the two pieces of the data split psi = omega psi + (1-omega) psi
/// under the pair Hamiltonian and evaluates the window functional on each.
struct WindowSplit {
  double F1 = 0.0;  // from data omega * psi   (correlation-carrying piece)
  double F2 = 0.0;  // from data (1-omega) psi (smooth piece)
};
WindowSplit window_split(const RadialField& psi_data, const ScatteringSolution& sol,
                         const PotentialSpec& spec, double L, double T, double dt,
                         const CutoffChi& chi, const EvolveOptions& opts = {});

/// Density autocorrelation G(z) = Int |phi(y)|^2 |phi(y + z e)|^2 dy of a
/// radial orbital, via the two-center (bipolar) reduction of the angular
/// integral. G(0) = ||phi||_4^4.
double radial_autocorrelation(const InitialOrbital& orbital, double z);

/// Initial correlation content of uncorrelated two-body data at microscopic
/// scale: value = 4 pi Int chi(rho/ell) [omega_N/(1-omega_N)]^2 G(rho) rho^2
/// drho (exact), its separable approximation G -> G(0), a rigorous bound on
/// their difference, and the predicted large-(N ell) constant
/// 4 pi a^2 * l1_mass(chi) * ||phi||_4^4 for (N^2/ell) * value.
struct FnInitialResult {
  double value = 0.0;
  double value_separable = 0.0;
  double correction_bound = 0.0;
  double asymptotic_constant = 0.0;
};
FnInitialResult fn_initial(const InitialOrbital& orbital, const ScatteringSolution& sol, long n,
                           double ell, const CutoffChi& chi);

/// Sobolev-type size of smooth data: w31 = sum_{m<=3} ||grad^m f||_1,
/// w3inf = sum_{m<=3} sup |grad^m f|, with rotationally correct derivative
/// magnitudes; 4th-order differences. Rejects grids too coarse for stable
/// third differences.
struct TripleNormReport {
  double w31 = 0.0;
  double w3inf = 0.0;
  double total = 0.0;
};
TripleNormReport triple_norm(const RadialField& field);
TripleNormReport triple_norm(const CartesianField& field);

/// First and second moment of the scaled N-body energy on an uncorrelated
/// product state, reduced to pair quadratures:
///   e1_per_N        <H>/N     = ||grad phi||^2 + ((N-1)/(2N)) Int V G(./N)
///   h2_leading_per_N3         = leading pair term of <H^2>/N^3
/// together with their N -> infinity limits and crude upper envelopes of the
/// non-leading terms (reported, not asserted) in diagnostics.
struct HamiltonianMoments {
  double e1_per_N = 0.0;
  double e1_limit = 0.0;
  double h2_leading_per_N3 = 0.0;
  double h2_limit = 0.0;
  std::map<std::string, double> diagnostics;
};
HamiltonianMoments hamiltonian_moments(const InitialOrbital& orbital, const PotentialSpec& spec,
                                       double n);

/// First-order coupling b = Int V, renormalized coupling 8 pi a, and their
/// difference Int V omega >= 0, each computed by an independent route.
struct CouplingConstants {
  double b = 0.0;
  double eight_pi_a = 0.0;
  double excess = 0.0;
};
CouplingConstants coupling_constants(const PotentialSpec& spec, const ScatteringSolution& sol);

/// L^p size of grad^m (omega * psi_Lambda) across a Lambda sweep. The decay
/// gate p (m+1) > 3 is required for the tail integral to converge; the table
/// is 'uniform' when max/min <= 4 across the sweep.
struct NormTable {
  std::vector<double> lambdas;
  std::vector<double> values;
  double max_over_min = 0.0;
  bool uniform = false;
};
NormTable uniform_norm_table(const DataProfile& profile, const ScatteringSolution& sol,
                             const std::vector<double>& lambdas, int m, double p);

/// Scale dictionary between microscopic (N, ell, t) and macroscopic
/// (Lambda, L, T) = (N, 2 N ell, N^2 t). Requests with ell < 1/N are outside
/// the modelled regime and rejected.
struct MacroParams {
  double lambda = 0.0;
  double L = 0.0;
  double T = 0.0;
};
struct MicroParams {
  double n = 0.0;
  double ell = 0.0;
  double t = 0.0;
};
MacroParams micro_to_macro(double n, double ell, double t);
MicroParams macro_to_micro(double lambda, double L, double T);

}  // namespace corrlab
