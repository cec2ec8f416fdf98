#pragma once

#include <string>

namespace corrlab {

/// Smooth, rapidly decaying, L2-normalized radial orbital used as one-body
/// data. Carries its norm bundle, computed once at construction:
/// l4 = ||phi||_4, grad_l2 = ||grad phi||_2, and the weighted sup
/// max_{m<=4} sup_r (1+r)^alpha |d^m phi / dr^m| certifying the decay class.
class InitialOrbital {
 public:
  static InitialOrbital gaussian(double sigma, double alpha = 4.0);

  double operator()(double r) const;
  double d1(double r) const;
  double d2(double r) const;

  const std::string& kind() const { return kind_; }
  double sigma() const { return sigma_; }
  double alpha() const { return alpha_; }

  double l4() const { return l4_; }
  double l4_pow4() const { return l4_ * l4_ * l4_ * l4_; }
  double grad_l2() const { return grad_l2_; }
  double weighted_sup() const { return weighted_sup_; }
  /// ||Laplacian phi||_2, used by moment diagnostics.
  double lap_l2() const { return lap_l2_; }

  std::string describe() const;

 private:
  InitialOrbital() = default;

  std::string kind_;
  double sigma_ = 1.0;
  double alpha_ = 4.0;
  double amp_ = 0.0;
  double l4_ = 0.0;
  double grad_l2_ = 0.0;
  double weighted_sup_ = 0.0;
  double lap_l2_ = 0.0;
};

}  // namespace corrlab
