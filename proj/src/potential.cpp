#include "corrlab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>

#include "corrlab/errors.hpp"
#include "corrlab/interp.hpp"
#include "corrlab/quadrature.hpp"

namespace corrlab {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

PotentialSpec PotentialSpec::bump(double v0, double radius) {
  if (!(v0 >= 0.0)) throw validation_error("PotentialSpec: amplitude must be >= 0");
  if (!(radius > 0.0)) throw validation_error("PotentialSpec: range must be > 0");
  PotentialSpec s;
  s.kind_ = PotentialKind::bump;
  s.v0_ = v0;
  s.radius_ = radius;
  return s;
}

PotentialSpec PotentialSpec::square_well(double v0, double radius) {
  if (!(v0 >= 0.0)) throw validation_error("PotentialSpec: amplitude must be >= 0");
  if (!(radius > 0.0)) throw validation_error("PotentialSpec: range must be > 0");
  PotentialSpec s;
  s.kind_ = PotentialKind::square_well;
  s.v0_ = v0;
  s.radius_ = radius;
  return s;
}

PotentialSpec PotentialSpec::tabulated(const std::vector<double>& r, const std::vector<double>& v) {
  if (r.size() != v.size() || r.size() < 4) {
    throw validation_error("PotentialSpec: tabulated profile needs >= 4 matched samples");
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(v[i] >= 0.0)) throw validation_error("PotentialSpec: tabulated values must be >= 0");
    if (i > 0 && !(r[i] > r[i - 1])) {
      throw validation_error("PotentialSpec: tabulated radii must increase");
    }
  }
  if (std::abs(r.front()) > 1e-12) {
    throw validation_error("PotentialSpec: tabulated profile must start at r = 0");
  }
  const double dr = r[1] - r[0];
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    if (std::abs((r[i + 1] - r[i]) - dr) > 1e-9 * dr) {
      throw validation_error("PotentialSpec: tabulated radii must be uniform");
    }
  }
  PotentialSpec s;
  s.kind_ = PotentialKind::tabulated;
  s.radius_ = r.back();
  s.v0_ = *std::max_element(v.begin(), v.end());
  s.tab_v_ = v;
  // Clamped ends: zero slope at r = 0 (even profile) and at the support edge.
  s.tab_spline_ = CubicSpline(0.0, dr, v, 0.0, 0.0);
  return s;
}

double PotentialSpec::range() const {
  return radius_ / static_cast<double>(scale_n_);
}

double PotentialSpec::eval_unscaled(double r) const {
  r = std::abs(r);
  switch (kind_) {
    case PotentialKind::bump: {
      if (r >= radius_) return 0.0;
      const double r2 = r * r;
      const double R2 = radius_ * radius_;
      return v0_ * std::exp(1.0 - R2 / (R2 - r2));
    }
    case PotentialKind::square_well: {
      if (r < radius_) return v0_;
      if (r == radius_) return 0.5 * v0_;
      return 0.0;
    }
    case PotentialKind::tabulated: {
      if (r >= radius_) return 0.0;
      return std::max(0.0, tab_spline_(r));
    }
  }
  return 0.0;
}

double PotentialSpec::eval(double r) const {
  const double n = static_cast<double>(scale_n_);
  return n * n * eval_unscaled(n * r);
}

std::string PotentialSpec::hash() const {
  std::string key;
  switch (kind_) {
    case PotentialKind::bump: key = "bump"; break;
    case PotentialKind::square_well: key = "square-well"; break;
    case PotentialKind::tabulated: key = "tabulated"; break;
  }
  key += "|" + format_double(v0_) + "|" + format_double(radius_) + "|N=" + std::to_string(scale_n_);
  if (kind_ == PotentialKind::tabulated) {
    for (double v : tab_v_) key += "," + format_double(v);
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(key)));
  return buf;
}

std::string PotentialSpec::describe() const {
  std::string key;
  switch (kind_) {
    case PotentialKind::bump: key = "bump"; break;
    case PotentialKind::square_well: key = "square-well"; break;
    case PotentialKind::tabulated: key = "tabulated"; break;
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s(v0=%g, R=%g, N=%ld)", key.c_str(), v0_, radius_, scale_n_);
  return buf;
}

PotentialSpec make_potential(PotentialKind kind, double v0, double radius) {
  switch (kind) {
    case PotentialKind::bump: return PotentialSpec::bump(v0, radius);
    case PotentialKind::square_well: return PotentialSpec::square_well(v0, radius);
    case PotentialKind::tabulated:
      throw validation_error("make_potential: tabulated profiles need explicit samples");
  }
  throw validation_error("make_potential: unknown kind");
}

PotentialSpec scale_potential(const PotentialSpec& spec, long n) {
  if (n < 1) throw validation_error("scale_potential: scale factor must be >= 1");
  PotentialSpec s = spec;
  s.scale_n_ = spec.scale_n_ * n;
  return s;
}

PotentialNorms potential_norms(const PotentialSpec& spec) {
  PotentialNorms out;
  const double R = spec.range();
  auto pnorm = [&](double p) {
    const double integral =
        integrate_radial([&](double r) { return std::pow(spec.eval(r), p); }, 0.0, R, 1e-10);
    return std::pow(integral, 1.0 / p);
  };
  out.L1 = integrate_radial([&](double r) { return spec.eval(r); }, 0.0, R, 1e-10);
  out.L3over2 = pnorm(1.5);
  out.L2 = pnorm(2.0);
  // Profiles peak at the origin; dense sampling guards tabulated inputs.
  double sup = spec.eval(0.0);
  for (int i = 1; i <= 4096; ++i) {
    sup = std::max(sup, spec.eval(R * static_cast<double>(i) / 4096.0));
  }
  out.Linf = sup;
  out.born_b = out.L1;
  return out;
}

}  // namespace corrlab
