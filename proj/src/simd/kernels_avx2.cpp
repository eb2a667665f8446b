// AVX2 + FMA variants. Compiled with -mavx2 -mfma; only called after the
// dispatcher has confirmed CPU support.

#include <immintrin.h>

#include <cmath>

#include "oseen/simd/kernels.hpp"

namespace oseen::simd {
namespace {

const __m256d kSignMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

inline __m256d vabs(__m256d x) { return _mm256_and_pd(x, kSignMask); }

// Four independent Neumaier accumulators, one per lane.
struct Neumaier4 {
  __m256d s = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();

  void add(__m256d x) {
    const __m256d t = _mm256_add_pd(s, x);
    const __m256d big_s = _mm256_cmp_pd(vabs(s), vabs(x), _CMP_GE_OQ);
    const __m256d when_s = _mm256_add_pd(_mm256_sub_pd(s, t), x);
    const __m256d when_x = _mm256_add_pd(_mm256_sub_pd(x, t), s);
    c = _mm256_add_pd(c, _mm256_blendv_pd(when_x, when_s, big_s));
    s = t;
  }

  // Fold lanes and a scalar tail with the same compensated rule.
  double finish(const double* tail, std::size_t tail_count, bool square, bool absolute,
                const double* tail_y = nullptr) const {
    alignas(32) double ls[4];
    alignas(32) double lc[4];
    _mm256_store_pd(ls, s);
    _mm256_store_pd(lc, c);
    double acc = 0.0, comp = 0.0;
    auto add = [&](double x) {
      const double t = acc + x;
      if (std::fabs(acc) >= std::fabs(x)) {
        comp += (acc - t) + x;
      } else {
        comp += (x - t) + acc;
      }
      acc = t;
    };
    for (int k = 0; k < 4; ++k) add(ls[k]);
    for (std::size_t k = 0; k < tail_count; ++k) {
      double v = tail[k];
      if (tail_y != nullptr) v *= tail_y[k];
      if (square) v *= v;
      if (absolute) v = std::fabs(v);
      add(v);
    }
    for (int k = 0; k < 4; ++k) comp += lc[k];
    return acc + comp;
  }
};

double sum_avx2(const double* x, std::size_t count) {
  Neumaier4 acc;
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) acc.add(_mm256_loadu_pd(x + i));
  return acc.finish(x + i, count - i, false, false);
}

double dot_avx2(const double* x, const double* y, std::size_t count) {
  Neumaier4 acc;
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    acc.add(_mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  return acc.finish(x + i, count - i, false, false, y + i);
}

double abs_sum_avx2(const double* x, std::size_t count) {
  Neumaier4 acc;
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) acc.add(vabs(_mm256_loadu_pd(x + i)));
  return acc.finish(x + i, count - i, false, true);
}

double sum_squares_avx2(const double* x, std::size_t count) {
  Neumaier4 acc;
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc.add(_mm256_mul_pd(v, v));
  }
  return acc.finish(x + i, count - i, true, false);
}

double max_abs_avx2(const double* x, std::size_t count) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) m = _mm256_max_pd(m, vabs(_mm256_loadu_pd(x + i)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = 0.0;
  for (double v : lanes) r = v > r ? v : r;
  for (; i < count; ++i) {
    const double a = std::fabs(x[i]);
    r = a > r ? a : r;
  }
  return r;
}

void scale_complex_avx2(std::complex<double>* x, const double* multiplier, std::size_t count) {
  auto* p = reinterpret_cast<double*>(x);
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    // [m0 m0 m1 m1]
    const __m128d m2 = _mm_loadu_pd(multiplier + i);
    const __m256d m = _mm256_permute4x64_pd(_mm256_castpd128_pd256(m2), 0b01010000);
    _mm256_storeu_pd(p + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(p + 2 * i), m));
  }
  for (; i < count; ++i) x[i] = {x[i].real() * multiplier[i], x[i].imag() * multiplier[i]};
}

void mul_complex_avx2(const std::complex<double>* a, const std::complex<double>* b,
                      std::complex<double>* out, std::size_t count) {
  const auto* pa = reinterpret_cast<const double*>(a);
  const auto* pb = reinterpret_cast<const double*>(b);
  auto* po = reinterpret_cast<double*>(out);
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);        // ar ai ar ai
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);        // br bi br bi
    const __m256d br = _mm256_movedup_pd(vb);              // br br
    const __m256d bi = _mm256_permute_pd(vb, 0b1111);      // bi bi
    const __m256d a_swap = _mm256_permute_pd(va, 0b0101);  // ai ar
    // (ar*br - ai*bi, ai*br + ar*bi)
    _mm256_storeu_pd(po + 2 * i, _mm256_fmaddsub_pd(va, br, _mm256_mul_pd(a_swap, bi)));
  }
  for (; i < count; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = {ar * br - ai * bi, ar * bi + ai * br};
  }
}

void axpy_avx2(double a, const double* x, double* y, std::size_t count) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < count; ++i) y[i] += a * x[i];
}

void bilinear_avx2(const BilinearLattice& g, const double* x1, const double* x2, double* out,
                   std::size_t count) {
  const __m256d origin = _mm256_set1_pd(g.origin);
  const __m256d inv_h = _mm256_set1_pd(g.inv_spacing);
  const __m256d lo = _mm256_set1_pd(-2.0);
  const __m256d hi = _mm256_set1_pd(static_cast<double>(g.n) + 1.0);
  const __m256i zero_i = _mm256_setzero_si256();
  const __m256i n_i = _mm256_set1_epi64x(static_cast<long long>(g.n));
  const __m256i one_i = _mm256_set1_epi64x(1);
  const __m256d zero = _mm256_setzero_pd();

  // Gather one corner; lanes whose (i,j) fall outside the lattice read 0.
  auto corner = [&](__m256i i, __m256i j) {
    const __m256i in_i = _mm256_andnot_si256(_mm256_cmpgt_epi64(zero_i, i),
                                             _mm256_cmpgt_epi64(n_i, i));
    const __m256i in_j = _mm256_andnot_si256(_mm256_cmpgt_epi64(zero_i, j),
                                             _mm256_cmpgt_epi64(n_i, j));
    const __m256i mask = _mm256_and_si256(in_i, in_j);
    // Clamp to keep masked-off addresses harmless.
    const __m256i ic = _mm256_blendv_epi8(zero_i, i, mask);
    const __m256i jc = _mm256_blendv_epi8(zero_i, j, mask);
    // idx = ic * n + jc, computed with 32-bit multiply (n < 2^31).
    const __m256i idx = _mm256_add_epi64(_mm256_mul_epu32(ic, n_i), jc);
    return _mm256_mask_i64gather_pd(zero, g.values, idx, _mm256_castsi256_pd(mask), 8);
  };

  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    const __m256d a = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(x1 + k), origin), inv_h);
    const __m256d b = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(x2 + k), origin), inv_h);
    const __m256d fa = _mm256_floor_pd(a);
    const __m256d fb = _mm256_floor_pd(b);
    const __m256d ta = _mm256_sub_pd(a, fa);
    const __m256d tb = _mm256_sub_pd(b, fb);
    const __m256d near = _mm256_and_pd(
        _mm256_and_pd(_mm256_cmp_pd(fa, lo, _CMP_GT_OQ), _mm256_cmp_pd(fb, lo, _CMP_GT_OQ)),
        _mm256_and_pd(_mm256_cmp_pd(fa, hi, _CMP_LT_OQ), _mm256_cmp_pd(fb, hi, _CMP_LT_OQ)));
    // Far lanes are replaced by index -2 so every corner reads zero.
    const __m256d fa_s = _mm256_blendv_pd(lo, fa, near);
    const __m256d fb_s = _mm256_blendv_pd(lo, fb, near);
    const __m256i i = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(fa_s));
    const __m256i j = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(fb_s));
    const __m256i i1 = _mm256_add_epi64(i, one_i);
    const __m256i j1 = _mm256_add_epi64(j, one_i);
    const __m256d v00 = corner(i, j);
    const __m256d v01 = corner(i, j1);
    const __m256d v10 = corner(i1, j);
    const __m256d v11 = corner(i1, j1);
    const __m256d row0 = _mm256_add_pd(v00, _mm256_mul_pd(tb, _mm256_sub_pd(v01, v00)));
    const __m256d row1 = _mm256_add_pd(v10, _mm256_mul_pd(tb, _mm256_sub_pd(v11, v10)));
    const __m256d r = _mm256_add_pd(row0, _mm256_mul_pd(ta, _mm256_sub_pd(row1, row0)));
    _mm256_storeu_pd(out + k, _mm256_and_pd(r, near));
  }
  if (k < count) scalar_table().bilinear(g, x1 + k, x2 + k, out + k, count - k);
}

}  // namespace

const KernelTable& avx2_kernel_table() {
  static const KernelTable table{
      Level::kAvx2,      sum_avx2,          dot_avx2,         abs_sum_avx2, sum_squares_avx2,
      max_abs_avx2,      scale_complex_avx2, mul_complex_avx2, axpy_avx2,   bilinear_avx2,
  };
  return table;
}

}  // namespace oseen::simd
