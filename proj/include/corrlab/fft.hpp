#pragma once

#include <complex>
#include <cstddef>

namespace corrlab {

/// In-place complex DFT of length n on an fftw-aligned internal buffer.
/// Plans are created with FFTW_ESTIMATE: plan selection is then a pure
/// function of the transform size, which keeps results bit-reproducible
/// between runs (FFTW_MEASURE picks algorithms by wall-clock timing).
class Fft1d {
 public:
  explicit Fft1d(std::size_t n);
  ~Fft1d();
  Fft1d(const Fft1d&) = delete;
  Fft1d& operator=(const Fft1d&) = delete;

  std::size_t size() const { return n_; }
  std::complex<double>* data() { return buf_; }
  const std::complex<double>* data() const { return buf_; }

  void forward();   // unnormalized, exp(-i 2 pi j k / n) convention
  void backward();  // unnormalized inverse

 private:
  std::size_t n_;
  std::complex<double>* buf_;
  void* fwd_;
  void* bwd_;
};

/// In-place complex DFT on an n x n x n cube (row-major, x fastest).
class Fft3d {
 public:
  explicit Fft3d(std::size_t n);
  ~Fft3d();
  Fft3d(const Fft3d&) = delete;
  Fft3d& operator=(const Fft3d&) = delete;

  std::size_t size() const { return n_; }
  std::complex<double>* data() { return buf_; }

  void forward();
  void backward();

 private:
  std::size_t n_;
  std::complex<double>* buf_;
  void* fwd_;
  void* bwd_;
};

}  // namespace corrlab
