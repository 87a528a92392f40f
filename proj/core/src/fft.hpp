#pragma once

// Thin RAII wrapper over FFTW for square periodic grids. Plans are created
// under a global mutex because the FFTW planner is not thread-safe; executing
// a plan is.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace magobs::detail {

class Fft2D {
 public:
  explicit Fft2D(int n);
  ~Fft2D();
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  int size() const { return n_; }
  std::complex<double>& at(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  std::span<std::complex<double>> data() { return data_; }

  /// data <- sum_k data_k e^{+i k.z_j} (coefficients to grid values).
  void to_grid();
  /// data <- n^-2 sum_j data_j e^{-i k.z_j} (grid values to coefficients).
  void to_coeffs();

 private:
  int n_;
  std::vector<std::complex<double>> data_;
  void* forward_ = nullptr;
  void* backward_ = nullptr;
};

class Fft1D {
 public:
  explicit Fft1D(int n);
  ~Fft1D();
  Fft1D(const Fft1D&) = delete;
  Fft1D& operator=(const Fft1D&) = delete;

  int size() const { return n_; }
  /// The plans are bound to this buffer: write through it, never assign a
  /// new vector to it.
  std::span<std::complex<double>> data() { return data_; }
  void to_grid();
  void to_coeffs();

 private:
  int n_;
  std::vector<std::complex<double>> data_;
  void* forward_ = nullptr;
  void* backward_ = nullptr;
};

inline int wrap_index(int k, int n) {
  const int r = k % n;
  return r < 0 ? r + n : r;
}

/// Smallest power of two >= n (and >= 8).
int fft_size_at_least(int n);

}  // namespace magobs::detail
