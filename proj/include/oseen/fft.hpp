#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

#include "oseen/grid.hpp"

namespace oseen::fft {

/// fftw_malloc-backed array; every transform buffer uses this so that the
/// new-array execute functions see the alignment the plans were made with.
template <class T>
class AlignedBuffer {
 public:
  AlignedBuffer() = default;
  explicit AlignedBuffer(std::size_t count);
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  AlignedBuffer(AlignedBuffer&& other) noexcept { swap(other); }
  AlignedBuffer& operator=(AlignedBuffer&& other) noexcept {
    swap(other);
    return *this;
  }
  ~AlignedBuffer();

  T* data() { return data_; }
  const T* data() const { return data_; }
  std::size_t size() const { return size_; }
  std::span<T> span() { return {data_, size_}; }
  std::span<const T> span() const { return {data_, size_}; }
  T& operator[](std::size_t k) { return data_[k]; }
  const T& operator[](std::size_t k) const { return data_[k]; }

 private:
  void swap(AlignedBuffer& other) noexcept {
    std::swap(data_, other.data_);
    std::swap(size_, other.size_);
  }
  T* data_ = nullptr;
  std::size_t size_ = 0;
};

/// Real 2-D transform pair on an m x m periodic lattice. Plans are immutable
/// after construction and the execute calls are reentrant.
class RealFft2D {
 public:
  explicit RealFft2D(std::size_t m);
  ~RealFft2D();
  RealFft2D(const RealFft2D&) = delete;
  RealFft2D& operator=(const RealFft2D&) = delete;

  std::size_t size() const { return m_; }
  std::size_t spectrum_size() const { return m_ * (m_ / 2 + 1); }
  std::size_t spectrum_columns() const { return m_ / 2 + 1; }

  AlignedBuffer<double> make_real() const { return AlignedBuffer<double>(m_ * m_); }
  AlignedBuffer<std::complex<double>> make_spectrum() const {
    return AlignedBuffer<std::complex<double>>(spectrum_size());
  }

  /// Unnormalized forward transform.
  void forward(AlignedBuffer<double>& in, AlignedBuffer<std::complex<double>>& out) const;
  /// Unnormalized inverse; destroys `in`.
  void inverse(AlignedBuffer<std::complex<double>>& in, AlignedBuffer<double>& out) const;

 private:
  std::size_t m_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

/// Shared plan for an m x m lattice, created on first use.
std::shared_ptr<const RealFft2D> real_fft(std::size_t m);

/// Copy f into the lower-left n x n block of a zeroed 2n x 2n buffer.
void pad_into(const ScalarField& f, AlignedBuffer<double>& padded);
/// Copy the lower-left n x n block back out, scaled by `scale`.
void crop_from(const AlignedBuffer<double>& padded, double scale, ScalarField& out);
void crop_from(const AlignedBuffer<double>& padded, double scale, std::span<double> out,
               std::size_t n);

/// Angular wavenumber of FFT index k on an m-point lattice of spacing h.
double wavenumber(std::size_t k, std::size_t m, double h);

}  // namespace oseen::fft
