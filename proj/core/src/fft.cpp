#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace magobs::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::vector<std::complex<double>>& v) {
  return reinterpret_cast<fftw_complex*>(v.data());
}
}  // namespace

int fft_size_at_least(int n) {
  int s = 8;
  while (s < n) s *= 2;
  return s;
}

Fft2D::Fft2D(int n) : n_(n), data_(static_cast<std::size_t>(n) * n) {
  std::lock_guard lock(planner_mutex());
  forward_ = fftw_plan_dft_2d(n, n, as_fftw(data_), as_fftw(data_), FFTW_FORWARD, FFTW_ESTIMATE);
  backward_ =
      fftw_plan_dft_2d(n, n, as_fftw(data_), as_fftw(data_), FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft2D::~Fft2D() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

void Fft2D::to_grid() { fftw_execute(static_cast<fftw_plan>(backward_)); }

void Fft2D::to_coeffs() {
  fftw_execute(static_cast<fftw_plan>(forward_));
  const double scale = 1.0 / (double(n_) * n_);
  for (auto& c : data_) c *= scale;
}

Fft1D::Fft1D(int n) : n_(n), data_(static_cast<std::size_t>(n)) {
  std::lock_guard lock(planner_mutex());
  forward_ = fftw_plan_dft_1d(n, as_fftw(data_), as_fftw(data_), FFTW_FORWARD, FFTW_ESTIMATE);
  backward_ = fftw_plan_dft_1d(n, as_fftw(data_), as_fftw(data_), FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft1D::~Fft1D() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

void Fft1D::to_grid() { fftw_execute(static_cast<fftw_plan>(backward_)); }

void Fft1D::to_coeffs() {
  fftw_execute(static_cast<fftw_plan>(forward_));
  const double scale = 1.0 / n_;
  for (auto& c : data_) c *= scale;
}

}  // namespace magobs::detail
