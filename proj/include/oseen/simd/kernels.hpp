#pragma once

// Data-parallel inner loops shared by the field, spectral and transport code.
//
// Every kernel has a scalar reference implementation and, on x86-64 builds
// with compiler support, an AVX2+FMA variant. The active table is chosen once
// at startup from CPUID; OSEEN_SIMD=scalar|avx2 overrides the choice. The
// variants agree to a few ulps (reductions reassociate across lanes), which
// tests/test_simd.cpp pins down.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace oseen::simd {

enum class Level { kScalar, kAvx2 };

std::string_view level_name(Level level);

/// Lattice description for bilinear sampling of a cell-centred field.
/// Index-space coordinate of a physical point p is (p - origin) * inv_spacing;
/// values outside [0, n-1] read as zero (zero extension of the field).
struct BilinearLattice {
  const double* values = nullptr;  // n*n, row-major, first index = x1
  std::size_t n = 0;
  double origin = 0.0;             // physical coordinate of index 0
  double inv_spacing = 1.0;
};

struct KernelTable {
  Level level;
  // Compensated (Neumaier) reductions.
  double (*sum)(const double* x, std::size_t count);
  double (*dot)(const double* x, const double* y, std::size_t count);
  double (*abs_sum)(const double* x, std::size_t count);
  double (*sum_squares)(const double* x, std::size_t count);
  double (*max_abs)(const double* x, std::size_t count);
  // out[i] = x[i] * multiplier[i], complex by real.
  void (*scale_complex)(std::complex<double>* x, const double* multiplier, std::size_t count);
  // out[i] = a[i] * b[i], complex by complex.
  void (*mul_complex)(const std::complex<double>* a, const std::complex<double>* b,
                      std::complex<double>* out, std::size_t count);
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t count);
  // out[i] = bilinear(lattice, x1[i], x2[i])
  void (*bilinear)(const BilinearLattice& lattice, const double* x1, const double* x2,
                   double* out, std::size_t count);
};

const KernelTable& scalar_table();
/// nullptr when the AVX2 variant was not compiled in or the CPU lacks it.
const KernelTable* avx2_table();

/// Table selected at startup.
const KernelTable& active();
Level active_level();
/// Test hook; throws if the requested level is unavailable.
void force_level(Level level);

// Convenience wrappers over the active table.
inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }
inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}
inline double abs_sum(std::span<const double> x) { return active().abs_sum(x.data(), x.size()); }
inline double sum_squares(std::span<const double> x) {
  return active().sum_squares(x.data(), x.size());
}
inline double max_abs(std::span<const double> x) { return active().max_abs(x.data(), x.size()); }

}  // namespace oseen::simd
