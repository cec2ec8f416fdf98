// Free-decay checks. Gaussian data gives closed forms for every quantity:
// the evolved sup norm is (1 + 4 t^2)^{-3/4}, its gradient sup carries the
// extra factor e^{-1/2}, and all the weighted right-side norms reduce to
// Gamma-function integrals evaluated by a 40-digit oracle and frozen here.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "corrlab/dispersive.hpp"
#include "corrlab/errors.hpp"
#include "corrlab/field.hpp"

using namespace corrlab;
using cd = std::complex<double>;

namespace {
const double kPi = 3.14159265358979323846;

RadialField unit_gaussian(const RadialGrid& g) {
  return make_radial_field(g, 1.0, [](double r) { return cd(std::exp(-r * r / 2.0), 0.0); });
}
}  // namespace

TEST_CASE("free flight of Gaussian data: sup norms match the closed form") {
  const RadialGrid g = make_grid(0.01, 60.0);
  const DecaySeries s = supnorm_series(unit_gaussian(g), {1.0, 5.0});
  REQUIRE(s.sup.size() == 2);
  // sup = (1 + 4 t^2)^{-3/4}; the gradient sup peaks at r = sqrt of the
  // complex width, giving exactly the extra factor e^{-1/2} / width.
  CHECK(std::abs(s.sup[0] - 0.29906975624424411) < 1e-8);
  CHECK(std::abs(s.sup[1] - 0.031387662175472282) < 1e-8);
  CHECK(std::abs(s.grad_sup[0] - 0.18139497655491785) < 5e-6);
  CHECK(s.warnings.empty());
  CHECK(s.times == std::vector<double>{1.0, 5.0});
}

TEST_CASE("free flight refuses horizons the grid cannot hold") {
  const RadialGrid g = make_grid(0.01, 20.0);
  RadialField f = unit_gaussian(g);
  CHECK_THROWS_AS(supnorm_series(f, {15.0}), numerical_error);
  CHECK_THROWS_AS(supnorm_series(f, {}), validation_error);
  CHECK_THROWS_AS(supnorm_series(f, {2.0, 1.0}), validation_error);
  RadialField pair = f;
  pair.mu = 2.0;
  CHECK_THROWS_AS(supnorm_series(pair, {1.0}), validation_error);
}

TEST_CASE("weighted right side at s = 4: frozen norms and power 3/8") {
  const RadialGrid g = make_grid(0.01, 60.0);
  const RhsReport r = estimate_rhs(unit_gaussian(g), 4.0);
  CHECK(r.q_f == 4.0);
  CHECK(r.q_grad == doctest::Approx(12.0 / 7.0).epsilon(1e-14));
  CHECK(r.q_hess == doctest::Approx(12.0 / 11.0).epsilon(1e-14));
  CHECK(std::abs(r.norm_f - 1.1845269712143392) < 1e-7);
  CHECK(std::abs(r.norm_grad - 4.0329933629328663) < 1e-7);
  CHECK(std::abs(r.norm_hess - 29.718016820073629) < 1e-7);
  CHECK(std::abs(r.total - 34.935537154220835) < 1e-6);
  CHECK(r.predicted_power == doctest::Approx(0.375).epsilon(1e-14));
}

TEST_CASE("decay index triples: derived exponents and admissibility walls") {
  const DecayIndices d = validate_decay_indices(2.0, 4.0, 1.0);
  CHECK(d.grad_index == doctest::Approx(1.2).epsilon(1e-14));       // 3s/(s+3)
  CHECK(d.power_main == doctest::Approx(0.375).epsilon(1e-14));     // 3/2 (1/2 - 1/4)
  CHECK(d.power_hessian == doctest::Approx(0.125).epsilon(1e-14));  // 3/2 (1 - 1/4) - 1

  const double inf = std::numeric_limits<double>::infinity();
  const DecayIndices dinf = validate_decay_indices(3.0, inf, 1.0);
  CHECK(dinf.power_main == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(dinf.power_hessian == doctest::Approx(0.5).epsilon(1e-14));

  CHECK_THROWS_AS(validate_decay_indices(1.0, 4.0, 1.0), validation_error);   // s < 3/2
  CHECK_THROWS_AS(validate_decay_indices(2.0, 2.0, 1.0), validation_error);   // q < 3
  CHECK_THROWS_AS(validate_decay_indices(4.0, 3.5, 1.0), validation_error);   // q < s
  CHECK_THROWS_AS(validate_decay_indices(2.0, 4.0, 0.5), validation_error);   // r < 1
  CHECK_THROWS_AS(validate_decay_indices(2.0, 4.0, 2.0), validation_error);   // r too large
}

TEST_CASE("power-law fits recover exact exponents") {
  std::vector<double> times, values;
  for (int i = 1; i <= 8; ++i) {
    times.push_back(static_cast<double>(i));
    values.push_back(2.0 / std::sqrt(static_cast<double>(i)));
  }
  const ExponentFit fit = fit_exponent(times, values);
  CHECK(fit.alpha == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.residual < 1e-12);

  CHECK_THROWS_AS(fit_exponent({1, 2, 3, 4}, {1, 1, 1, 1}), validation_error);
  CHECK_THROWS_AS(fit_exponent({1, 2, 3, 4, 5}, {1, 1, -1, 1, 1}), validation_error);
  CHECK_THROWS_AS(fit_exponent({1, 2, 3}, {1, 1, 1, 1, 1}), validation_error);
}

TEST_CASE("spectral band: exact for a pure mode, shrinks with looser tails") {
  const RadialGrid g = make_grid(0.01, 60.0);
  const double k40 = kPi * 40.0 / 60.0;
  RadialField mode = make_radial_field(g, 1.0, [&](double r) {
    return cd(r < 1e-12 ? k40 : std::sin(k40 * r) / r, 0.0);
  });
  CHECK(std::abs(spectral_band(mode) - k40) <= kPi / 60.0 + 1e-12);

  RadialField f = unit_gaussian(g);
  CHECK(spectral_band(f, 1e-3) < spectral_band(f, 1e-6));
  CHECK(spectral_band(f) > 1.0);
  CHECK(spectral_band(f) < 8.0);
  CHECK_THROWS_AS(spectral_band(f, 0.0), validation_error);
  CHECK_THROWS_AS(spectral_band(f, 1.5), validation_error);
}

TEST_CASE("plain L1 mass of the Gaussian") {
  const RadialGrid g = make_grid(0.01, 60.0);
  CHECK(std::abs(l1_norm(unit_gaussian(g)) - std::pow(2.0 * kPi, 1.5)) < 1e-10);
}
