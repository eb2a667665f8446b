#include "oseen/simd/kernels.hpp"

#include <cmath>

namespace oseen::simd {
namespace {

struct Neumaier {
  double s = 0.0;
  double c = 0.0;
  void add(double x) {
    const double t = s + x;
    if (std::fabs(s) >= std::fabs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }
  double result() const { return s + c; }
};

double sum_scalar(const double* x, std::size_t count) {
  Neumaier acc;
  for (std::size_t i = 0; i < count; ++i) acc.add(x[i]);
  return acc.result();
}

double dot_scalar(const double* x, const double* y, std::size_t count) {
  Neumaier acc;
  for (std::size_t i = 0; i < count; ++i) acc.add(x[i] * y[i]);
  return acc.result();
}

double abs_sum_scalar(const double* x, std::size_t count) {
  Neumaier acc;
  for (std::size_t i = 0; i < count; ++i) acc.add(std::fabs(x[i]));
  return acc.result();
}

double sum_squares_scalar(const double* x, std::size_t count) {
  Neumaier acc;
  for (std::size_t i = 0; i < count; ++i) acc.add(x[i] * x[i]);
  return acc.result();
}

double max_abs_scalar(const double* x, std::size_t count) {
  double m = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double a = std::fabs(x[i]);
    if (a > m) m = a;
  }
  return m;
}

void scale_complex_scalar(std::complex<double>* x, const double* multiplier, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    x[i] = {x[i].real() * multiplier[i], x[i].imag() * multiplier[i]};
  }
}

void mul_complex_scalar(const std::complex<double>* a, const std::complex<double>* b,
                        std::complex<double>* out, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = {ar * br - ai * bi, ar * bi + ai * br};
  }
}

void axpy_scalar(double a, const double* x, double* y, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) y[i] += a * x[i];
}

inline double lattice_at(const BilinearLattice& g, long i, long j) {
  const long n = static_cast<long>(g.n);
  if (i < 0 || j < 0 || i >= n || j >= n) return 0.0;
  return g.values[static_cast<std::size_t>(i) * g.n + static_cast<std::size_t>(j)];
}

void bilinear_scalar(const BilinearLattice& g, const double* x1, const double* x2, double* out,
                     std::size_t count) {
  for (std::size_t k = 0; k < count; ++k) {
    const double a = (x1[k] - g.origin) * g.inv_spacing;
    const double b = (x2[k] - g.origin) * g.inv_spacing;
    const double fa = std::floor(a);
    const double fb = std::floor(b);
    const double ta = a - fa;
    const double tb = b - fb;
    // Far-away points: avoid overflow in the integer conversion.
    if (!(fa > -2.0 && fb > -2.0 && fa < static_cast<double>(g.n) + 1.0 &&
          fb < static_cast<double>(g.n) + 1.0)) {
      out[k] = 0.0;
      continue;
    }
    const long i = static_cast<long>(fa);
    const long j = static_cast<long>(fb);
    const double v00 = lattice_at(g, i, j);
    const double v01 = lattice_at(g, i, j + 1);
    const double v10 = lattice_at(g, i + 1, j);
    const double v11 = lattice_at(g, i + 1, j + 1);
    const double row0 = v00 + tb * (v01 - v00);
    const double row1 = v10 + tb * (v11 - v10);
    out[k] = row0 + ta * (row1 - row0);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{
      Level::kScalar,     sum_scalar,         dot_scalar,  abs_sum_scalar,  sum_squares_scalar,
      max_abs_scalar,     scale_complex_scalar, mul_complex_scalar, axpy_scalar, bilinear_scalar,
  };
  return table;
}

}  // namespace oseen::simd
