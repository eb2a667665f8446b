#include "oseen/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <new>
#include <numbers>

namespace oseen::fft {
namespace {

// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

template <class T>
AlignedBuffer<T>::AlignedBuffer(std::size_t count)
    : data_(static_cast<T*>(fftw_malloc(sizeof(T) * (count == 0 ? 1 : count)))), size_(count) {
  if (data_ == nullptr) throw std::bad_alloc();
  std::fill_n(data_, count, T{});
}

template <class T>
AlignedBuffer<T>::~AlignedBuffer() {
  if (data_ != nullptr) fftw_free(data_);
}

template class AlignedBuffer<double>;
template class AlignedBuffer<std::complex<double>>;

RealFft2D::RealFft2D(std::size_t m) : m_(m) {
  AlignedBuffer<double> real(m * m);
  AlignedBuffer<std::complex<double>> spec(m * (m / 2 + 1));
  const int mi = static_cast<int>(m);
  std::lock_guard lock(planner_mutex());
  // ESTIMATE keeps the chosen algorithm, and hence the rounding, identical
  // from run to run.
  forward_plan_ = fftw_plan_dft_r2c_2d(mi, mi, real.data(),
                                       reinterpret_cast<fftw_complex*>(spec.data()), FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_2d(mi, mi, reinterpret_cast<fftw_complex*>(spec.data()),
                                       real.data(), FFTW_ESTIMATE);
  if (forward_plan_ == nullptr || inverse_plan_ == nullptr) {
    throw std::runtime_error("FFTW planning failed");
  }
}

RealFft2D::~RealFft2D() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void RealFft2D::forward(AlignedBuffer<double>& in, AlignedBuffer<std::complex<double>>& out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft2D::inverse(AlignedBuffer<std::complex<double>>& in, AlignedBuffer<double>& out) const {
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(in.data()), out.data());
}

std::shared_ptr<const RealFft2D> real_fft(std::size_t m) {
  static std::mutex cache_mutex;
  static std::map<std::size_t, std::shared_ptr<const RealFft2D>> cache;
  std::lock_guard lock(cache_mutex);
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, std::make_shared<const RealFft2D>(m)).first;
  return it->second;
}

void pad_into(const ScalarField& f, AlignedBuffer<double>& padded) {
  const std::size_t n = f.grid().n();
  const std::size_t m = 2 * n;
  std::fill_n(padded.data(), m * m, 0.0);
  const auto values = f.values();
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(values.data() + i * n, n, padded.data() + i * m);
  }
}

void crop_from(const AlignedBuffer<double>& padded, double scale, std::span<double> out,
               std::size_t n) {
  const std::size_t m = 2 * n;
  for (std::size_t i = 0; i < n; ++i) {
    const double* src = padded.data() + i * m;
    double* dst = out.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) dst[j] = scale * src[j];
  }
}

void crop_from(const AlignedBuffer<double>& padded, double scale, ScalarField& out) {
  crop_from(padded, scale, out.values(), out.grid().n());
}

double wavenumber(std::size_t k, std::size_t m, double h) {
  const double signed_k =
      k <= m / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(m);
  return 2.0 * std::numbers::pi * signed_k / (static_cast<double>(m) * h);
}

}  // namespace oseen::fft
