#pragma once

#include <functional>
#include <vector>

#include "corrlab/field.hpp"
#include "corrlab/potential.hpp"
#include "corrlab/scattering.hpp"

namespace corrlab {

/// Knobs for the radial Crank–Nicolson evolution.
struct EvolveOptions {
  /// Complex absorbing layer on the outer band. Off by default: the plain
  /// evolution is exactly unitary and that is the contract unit tests pin.
  bool absorbing = false;
  /// Ramp start as a fraction of r_max (cubic ramp from there to the edge).
  double ramp_fraction = 0.875;
  /// Peak absorber strength.
  double absorber_w0 = 1.0;
};

/// Mass bookkeeping and warnings from one evolution call.
struct EvolveReport {
  double mass_initial = 0.0;
  double mass_final = 0.0;
  double boundary_amp = 0.0;  // max |psi| over the outer 2% of the grid at T
  std::vector<std::string> warnings;
};

/// Crank–Nicolson integration of i d/dt psi = (-mu Laplacian + V) psi on
/// u = r psi with Dirichlet ends. Unconditionally stable, exactly unitary
/// (up to roundoff) without the absorber, and exactly time-reversible:
/// one step with -dt inverts one step with +dt.
RadialField evolve_radial(const RadialField& field, const PotentialSpec& spec, double T,
                          double dt, const EvolveOptions& opts = {},
                          EvolveReport* report = nullptr);

/// Same scheme, invoking visit(t, field) at each requested sample time
/// (ascending; t = 0 allowed). Step sizes are shortened per segment so
/// samples land exactly on the requested times.
void evolve_radial_sampled(const RadialField& field, const PotentialSpec& spec,
                           const std::vector<double>& sample_times, double dt,
                           const std::function<void(double, const RadialField&)>& visit,
                           const EvolveOptions& opts = {});

/// Exact free propagator exp(i mu T Laplacian) via odd extension of u = r psi
/// and a complex FFT: mode k_m = pi m / r_max picks up exp(-i mu k_m^2 T).
/// Appends a resolution warning if the spectral tail (top 10% of modes)
/// carries more than 1e-12 of the mass.
RadialField evolve_free(const RadialField& field, double mu, double T,
                        std::vector<std::string>* warnings = nullptr);

/// Quotient-space evolution exp(-2 i L T) phi realized by conjugation:
/// evolve (1-omega) phi under the pair Hamiltonian (mu = 2) and divide the
/// result by (1-omega). Requires field.mu == 2 and a solution built from the
/// same potential.
RadialField evolve_weighted(const RadialField& field, const ScatteringSolution& sol,
                            const PotentialSpec& spec, double T, double dt,
                            const EvolveOptions& opts = {});

/// Weighted norm sqrt(4 pi Int (1-omega)^2 |phi|^2 r^2 dr): the invariant of
/// the quotient flow.
double weighted_norm(const RadialField& field, const ScatteringSolution& sol);

/// Strang split-step integration of i d/dt psi = (-mu Lap + V(|x|)) psi on a
/// periodic n^3 box (n a power of two). Mass is conserved to roundoff.
CartesianField evolve_cartesian(const CartesianField& field, const PotentialSpec& spec,
                                double T, double dt, EvolveReport* report = nullptr);

/// Split-step Fourier evolution under the one-body Hamiltonian
/// h = -Laplacian + V/2 (mu = 1); used for the long wave-operator legs where
/// the spectral kinetic step has no phase-accumulation error.
RadialField evolve_onebody(const RadialField& field, const PotentialSpec& spec, double T,
                           double dt);

enum class MollerDirection { forward, adjoint };

/// Finite-time wave-operator approximants.
///   adjoint: exp(-i Delta t0) exp(-i h t0) psi   (scattering-out state)
///   forward: exp(+i h t0) exp(+i Delta t0) psi
/// cauchy_defect is the L2 distance between the t0 and 2 t0 approximants,
/// computed in the same call; it must shrink as t0 grows.
struct MollerResult {
  RadialField field;
  double cauchy_defect = 0.0;
};

MollerResult moller_transform(const RadialField& field, const PotentialSpec& spec, double t0,
                              MollerDirection direction, double dt = 0.01);

}  // namespace corrlab
