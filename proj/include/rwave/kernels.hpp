// Low-level array kernels used by the operator and norm inner loops.
//
// Two backends: a scalar reference implementation and an AVX2 variant compiled in
// its own translation unit with -mavx2 and selected at runtime via cpuid.  The
// environment variable RWAVE_SIMD=scalar|avx2 forces a backend (falling back to
// scalar if the requested one is unavailable).
//
// Equivalence contract, relied on by tests and by the bit-reproducibility policy:
//   * elementwise kernels (add/sub/axpy/...) produce bitwise-identical results in
//     every backend (the AVX2 variants use mul+add rather than FMA for this);
//   * max-reductions are bitwise-identical (max is associative and commutative
//     over finite doubles);
//   * sum-style reductions (sum, dot_weighted) may reassociate across lanes and
//     agree only to rounding error; callers treat them accordingly.
#pragma once

#include <cstddef>

namespace rwave::simd {

enum class Backend { scalar, avx2 };

Backend active_backend();
const char* backend_name();
bool avx2_compiled_in();
bool avx2_supported();
// Test hook: force a backend (ignores the environment); returns the one in effect.
Backend force_backend(Backend b);

struct Ops {
  // dst[i] += src[i]
  void (*add)(double* dst, const double* src, std::size_t n);
  // dst[i] -= src[i]
  void (*sub)(double* dst, const double* src, std::size_t n);
  // dst[i] += src_hi[-i]  (reads src_hi, src_hi-1, ... descending)
  void (*add_rev)(double* dst, const double* src_hi, std::size_t n);
  // dst[i] -= src_hi[-i]
  void (*sub_rev)(double* dst, const double* src_hi, std::size_t n);
  // dst[i] += c
  void (*add_const)(double* dst, double c, std::size_t n);
  // dst[i] = a[i] + b[i]
  void (*vadd)(double* dst, const double* a, const double* b, std::size_t n);
  // dst[i] = a[i] - b[i]
  void (*vsub)(double* dst, const double* a, const double* b, std::size_t n);
  // dst[i] += c * src[i]
  void (*axpy)(double* dst, double c, const double* src, std::size_t n);
  // dst[i] *= c
  void (*scale)(double* dst, double c, std::size_t n);
  // max_i |a[i]| * w[i]          (w finite, nonnegative)
  double (*max_abs_mul)(const double* a, const double* w, std::size_t n);
  // max_i |a[i]| * w1[i] * w2[i] * w3[i]
  double (*max_abs_mul3)(const double* a, const double* w1, const double* w2,
                         const double* w3, std::size_t n);
  // sum_i a[i]
  double (*sum)(const double* a, std::size_t n);
  // sum_i (a[i]^2 + b[i]^2) * w[i]
  double (*energy_row)(const double* a, const double* b, const double* w, std::size_t n);
};

const Ops& ops();                 // active backend's table
const Ops& scalar_ops();          // always the reference implementation
#ifdef RWAVE_HAVE_AVX2
const Ops& avx2_ops();            // defined only when compiled in
#endif

}  // namespace rwave::simd
