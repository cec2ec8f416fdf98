#pragma once

#include <string>
#include <vector>

#include "corrlab/interp.hpp"

namespace corrlab {

enum class PotentialKind { bump, square_well, tabulated };

/// Nonnegative, compactly supported radial interaction profile together with
/// its short-range rescaling state. eval() returns the rescaled value
/// N^2 V(N r); the unscaled profile corresponds to scale_n == 1.
///
/// Profiles:
///   bump        V(r) = V0 * exp(-R^2/(R^2 - r^2) + 1) for r < R (so V(0) = V0)
///   square-well V(r) = V0 for r < R (V(R) = V0/2 by midpoint convention)
///   tabulated   clamped cubic interpolation of (r, V) samples
///
/// The square well is non-smooth and is reserved for closed-form oracles;
/// experiments that assume smoothness must reject it via smooth().
class PotentialSpec {
 public:
  static PotentialSpec bump(double v0, double radius);
  static PotentialSpec square_well(double v0, double radius);
  static PotentialSpec tabulated(const std::vector<double>& r, const std::vector<double>& v);

  /// N^2 V(N r) for the stored scale factor N.
  double eval(double r) const;
  double operator()(double r) const { return eval(r); }

  PotentialKind kind() const { return kind_; }
  double amplitude() const { return v0_; }
  /// Support radius of the *rescaled* profile, R / N.
  double range() const;
  long scale_n() const { return scale_n_; }
  bool smooth() const { return kind_ != PotentialKind::square_well; }

  /// Stable content hash (kind, parameters, scale) for manifests and
  /// cross-checking solutions against the potential they were built from.
  std::string hash() const;

  std::string describe() const;

  friend PotentialSpec scale_potential(const PotentialSpec& spec, long n);

 private:
  PotentialSpec() = default;
  double eval_unscaled(double r) const;

  PotentialKind kind_ = PotentialKind::bump;
  double v0_ = 0.0;
  double radius_ = 0.0;
  long scale_n_ = 1;
  std::vector<double> tab_v_;
  CubicSpline tab_spline_;
};

PotentialSpec make_potential(PotentialKind kind, double v0, double radius);

/// Composes the rescaling: the factor n multiplies whatever scale the spec
/// already carries. On an unscaled profile the result evaluates n^2 V(n r)
/// and has range R / n.
PotentialSpec scale_potential(const PotentialSpec& spec, long n);

/// Integral norms of the (rescaled) profile, by adaptive quadrature with
/// relative tolerance 1e-10. born_b duplicates L1: for a nonnegative profile
/// the first-order coupling equals the L1 mass.
struct PotentialNorms {
  double L1 = 0.0;
  double L3over2 = 0.0;
  double L2 = 0.0;
  double Linf = 0.0;
  double born_b = 0.0;
};

PotentialNorms potential_norms(const PotentialSpec& spec);

}  // namespace corrlab
