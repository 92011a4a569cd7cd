// AVX2 kernel backend.  Compiled with -mavx2; callers dispatch here only after a
// runtime cpuid check.  Elementwise kernels deliberately use mul+add (no FMA) so
// every element is rounded exactly as in the scalar backend; max-reductions are
// bitwise-equal to scalar; sum-reductions use four lane accumulators and agree
// with scalar only to rounding error.
#include "rwave/kernels.hpp"

#ifdef RWAVE_HAVE_AVX2

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace rwave::simd {

namespace {

const __m256d kAbsMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

inline __m256d reverse4(__m256d v) { return _mm256_permute4x64_pd(v, 0x1B); }

void v_add(double* dst, const double* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_loadu_pd(dst + i);
    __m256d s = _mm256_loadu_pd(src + i);
    _mm256_storeu_pd(dst + i, _mm256_add_pd(d, s));
  }
  for (; i < n; ++i) dst[i] += src[i];
}

void v_sub(double* dst, const double* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_loadu_pd(dst + i);
    __m256d s = _mm256_loadu_pd(src + i);
    _mm256_storeu_pd(dst + i, _mm256_sub_pd(d, s));
  }
  for (; i < n; ++i) dst[i] -= src[i];
}

void v_add_rev(double* dst, const double* src_hi, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_loadu_pd(dst + i);
    __m256d s = reverse4(_mm256_loadu_pd(src_hi - i - 3));
    _mm256_storeu_pd(dst + i, _mm256_add_pd(d, s));
  }
  for (; i < n; ++i) dst[i] += src_hi[-static_cast<std::ptrdiff_t>(i)];
}

void v_sub_rev(double* dst, const double* src_hi, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_loadu_pd(dst + i);
    __m256d s = reverse4(_mm256_loadu_pd(src_hi - i - 3));
    _mm256_storeu_pd(dst + i, _mm256_sub_pd(d, s));
  }
  for (; i < n; ++i) dst[i] -= src_hi[-static_cast<std::ptrdiff_t>(i)];
}

void v_add_const(double* dst, double c, std::size_t n) {
  __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(dst + i), vc));
  for (; i < n; ++i) dst[i] += c;
}

void v_vadd(double* dst, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) dst[i] = a[i] + b[i];
}

void v_vsub(double* dst, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(dst + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) dst[i] = a[i] - b[i];
}

void v_axpy(double* dst, double c, const double* src, std::size_t n) {
  __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_loadu_pd(dst + i);
    __m256d s = _mm256_mul_pd(vc, _mm256_loadu_pd(src + i));  // mul+add, not FMA
    _mm256_storeu_pd(dst + i, _mm256_add_pd(d, s));
  }
  for (; i < n; ++i) dst[i] += c * src[i];
}

void v_scale(double* dst, double c, std::size_t n) {
  __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(dst + i, _mm256_mul_pd(_mm256_loadu_pd(dst + i), vc));
  for (; i < n; ++i) dst[i] *= c;
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d m = _mm_max_pd(lo, hi);
  m = _mm_max_sd(m, _mm_unpackhi_pd(m, m));
  return _mm_cvtsd_f64(m);
}

double v_max_abs_mul(const double* a, const double* w, std::size_t n) {
  __m256d vm = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_and_pd(_mm256_loadu_pd(a + i), kAbsMask);
    v = _mm256_mul_pd(v, _mm256_loadu_pd(w + i));
    vm = _mm256_max_pd(vm, v);
  }
  double m = hmax(vm);
  for (; i < n; ++i) {
    double v = std::fabs(a[i]) * w[i];
    if (v > m) m = v;
  }
  return m;
}

double v_max_abs_mul3(const double* a, const double* w1, const double* w2, const double* w3,
                      std::size_t n) {
  __m256d vm = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_and_pd(_mm256_loadu_pd(a + i), kAbsMask);
    v = _mm256_mul_pd(v, _mm256_loadu_pd(w1 + i));
    v = _mm256_mul_pd(v, _mm256_loadu_pd(w2 + i));
    v = _mm256_mul_pd(v, _mm256_loadu_pd(w3 + i));
    vm = _mm256_max_pd(vm, v);
  }
  double m = hmax(vm);
  for (; i < n; ++i) {
    double v = std::fabs(a[i]) * w1[i] * w2[i] * w3[i];
    if (v > m) m = v;
  }
  return m;
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d s = _mm_add_pd(lo, hi);
  s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
  return _mm_cvtsd_f64(s);
}

double v_sum(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i];
  return s;
}

double v_energy_row(const double* a, const double* b, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d va = _mm256_loadu_pd(a + i);
    __m256d vb = _mm256_loadu_pd(b + i);
    __m256d t = _mm256_add_pd(_mm256_mul_pd(va, va), _mm256_mul_pd(vb, vb));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(t, _mm256_loadu_pd(w + i)));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += (a[i] * a[i] + b[i] * b[i]) * w[i];
  return s;
}

const Ops kAvx2Ops = {
    v_add,  v_sub,   v_add_rev,     v_sub_rev,      v_add_const, v_vadd, v_vsub,
    v_axpy, v_scale, v_max_abs_mul, v_max_abs_mul3, v_sum,       v_energy_row,
};

}  // namespace

const Ops& avx2_ops() { return kAvx2Ops; }

}  // namespace rwave::simd

#endif  // RWAVE_HAVE_AVX2
