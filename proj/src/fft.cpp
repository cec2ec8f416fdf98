#include "corrlab/fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "corrlab/errors.hpp"

namespace corrlab {

namespace {
// The FFTW planner mutates global state and is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft1d::Fft1d(std::size_t n) : n_(n) {
  if (n_ < 2) throw validation_error("Fft1d: transform length must be >= 2");
  buf_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * n_));
  if (!buf_) throw resource_error("Fft1d: allocation failed");
  auto* raw = reinterpret_cast<fftw_complex*>(buf_);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fwd_ = fftw_plan_dft_1d(static_cast<int>(n_), raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_1d(static_cast<int>(n_), raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft1d::~Fft1d() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  fftw_free(buf_);
}

void Fft1d::forward() { fftw_execute(static_cast<fftw_plan>(fwd_)); }
void Fft1d::backward() { fftw_execute(static_cast<fftw_plan>(bwd_)); }

Fft3d::Fft3d(std::size_t n) : n_(n) {
  if (n_ < 2) throw validation_error("Fft3d: transform length must be >= 2");
  const std::size_t total = n_ * n_ * n_;
  buf_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * total));
  if (!buf_) throw resource_error("Fft3d: allocation failed");
  auto* raw = reinterpret_cast<fftw_complex*>(buf_);
  const int m = static_cast<int>(n_);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fwd_ = fftw_plan_dft_3d(m, m, m, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_3d(m, m, m, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft3d::~Fft3d() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  fftw_free(buf_);
}

void Fft3d::forward() { fftw_execute(static_cast<fftw_plan>(fwd_)); }
void Fft3d::backward() { fftw_execute(static_cast<fftw_plan>(bwd_)); }

}  // namespace corrlab
