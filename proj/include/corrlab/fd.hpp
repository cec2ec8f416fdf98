#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace corrlab::fd {

/// Reflection behaviour of radial samples about r = 0. A smooth radial scalar
/// extends evenly (f(-r) = f(r)); u = r*psi extends oddly.
enum class Parity { even, odd };

namespace detail {
template <class T>
T sample(const std::vector<T>& f, long j, Parity p) {
  const long n = static_cast<long>(f.size()) - 1;
  if (j < 0) return p == Parity::even ? f[static_cast<std::size_t>(-j)] : T(-1.0) * f[static_cast<std::size_t>(-j)];
  if (j > n) return f[static_cast<std::size_t>(n)];  // only reached in outer fallback paths
  return f[static_cast<std::size_t>(j)];
}
}  // namespace detail

/// 4th-order central first derivative at node i. Near the outer edge the
/// stencil degrades to a 2nd-order one-sided difference (fields of interest
/// vanish there).
template <class T>
T d1(const std::vector<T>& f, std::size_t i, double h, Parity p) {
  const long n = static_cast<long>(f.size()) - 1;
  const long k = static_cast<long>(i);
  if (k > n - 2) {
    if (k == n) return (f[i] * 3.0 - f[i - 1] * 4.0 + f[i - 2]) / (2.0 * h);
    return (f[i + 1] - f[i - 1]) / (2.0 * h);
  }
  using detail::sample;
  return (sample(f, k - 2, p) - sample(f, k + 2, p) +
          (sample(f, k + 1, p) - sample(f, k - 1, p)) * 8.0) /
         (12.0 * h);
}

/// 4th-order central second derivative at node i (2nd-order one-sided at the
/// outer edge).
template <class T>
T d2(const std::vector<T>& f, std::size_t i, double h, Parity p) {
  const long n = static_cast<long>(f.size()) - 1;
  const long k = static_cast<long>(i);
  if (k > n - 2) {
    if (k == n) return (f[i] * 2.0 - f[i - 1] * 5.0 + f[i - 2] * 4.0 - f[i - 3]) / (h * h);
    return (f[i + 1] - f[i] * 2.0 + f[i - 1]) / (h * h);
  }
  using detail::sample;
  return (T(-1.0) * (sample(f, k + 2, p) + sample(f, k - 2, p)) +
          (sample(f, k + 1, p) + sample(f, k - 1, p)) * 16.0 - f[i] * 30.0) /
         (12.0 * h * h);
}

/// 4th-order central third derivative at node i (7-point stencil; 2nd-order
/// 5-point central fallback near the outer edge).
template <class T>
T d3(const std::vector<T>& f, std::size_t i, double h, Parity p) {
  const long n = static_cast<long>(f.size()) - 1;
  const long k = static_cast<long>(i);
  using detail::sample;
  if (k > n - 3) {
    if (k >= n - 1) {
      return (f[static_cast<std::size_t>(n)] - f[static_cast<std::size_t>(n - 1)] * 3.0 +
              f[static_cast<std::size_t>(n - 2)] * 3.0 - f[static_cast<std::size_t>(n - 3)]) /
             (h * h * h);
    }
    return (sample(f, k + 2, p) - sample(f, k - 2, p) -
            (sample(f, k + 1, p) - sample(f, k - 1, p)) * 2.0) /
           (2.0 * h * h * h);
  }
  return (sample(f, k - 3, p) - sample(f, k + 3, p) +
          (sample(f, k + 2, p) - sample(f, k - 2, p)) * 8.0 +
          (sample(f, k - 1, p) - sample(f, k + 1, p)) * 13.0) /
         (8.0 * h * h * h);
}

/// 6th-order central second derivative (7-point stencil); used by residual
/// checks so the checker's truncation error stays far below the gate.
template <class T>
T d2_order6(const std::vector<T>& f, std::size_t i, double h, Parity p) {
  using detail::sample;
  const long k = static_cast<long>(i);
  return ((sample(f, k + 3, p) + sample(f, k - 3, p)) * 2.0 -
          (sample(f, k + 2, p) + sample(f, k - 2, p)) * 27.0 -
          f[i] * 490.0 + (sample(f, k + 1, p) + sample(f, k - 1, p)) * 270.0) /
         (180.0 * h * h);
}

/// Pointwise rotational derivative magnitudes of a radial profile f(r)
/// sampled uniformly from r = 0 (even reflection at the origin):
///   out1 = |grad f|           = |f'|
///   out2 = |grad^2 f|         = sqrt(f''^2 + 2 (f'/r)^2)   (Frobenius)
///   out3 = |grad^3 f|         = sqrt(f'''^2 + 6 ((f'' - f'/r)/r)^2)
/// with the smooth-data limits at r = 0. Outputs may be null; sizes must
/// match f on entry.
inline void rotational_magnitudes(const std::vector<std::complex<double>>& f, double h,
                                  std::vector<double>* out1, std::vector<double>* out2,
                                  std::vector<double>* out3) {
  using cplx = std::complex<double>;
  const std::size_t m = f.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double r = h * static_cast<double>(i);
    const cplx g1 = d1(f, i, h, Parity::even);
    const cplx g2 = d2(f, i, h, Parity::even);
    if (out1) (*out1)[i] = std::abs(g1);
    if (out2) {
      (*out2)[i] = i == 0 ? std::sqrt(3.0) * std::abs(g2)
                          : std::sqrt(std::norm(g2) + 2.0 * std::norm(g1 / r));
    }
    if (out3) {
      if (i == 0) {
        (*out3)[i] = 0.0;  // both terms vanish at the origin for even data
      } else {
        const cplx g3 = d3(f, i, h, Parity::even);
        const cplx mixed = (g2 - g1 / r) / r;
        (*out3)[i] = std::sqrt(std::norm(g3) + 6.0 * std::norm(mixed));
      }
    }
  }
}

}  // namespace corrlab::fd
