// Scalar reference kernels and runtime backend dispatch.
#include "rwave/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace rwave::simd {

namespace {

void s_add(double* dst, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += src[i];
}
void s_sub(double* dst, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] -= src[i];
}
void s_add_rev(double* dst, const double* src_hi, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += src_hi[-static_cast<std::ptrdiff_t>(i)];
}
void s_sub_rev(double* dst, const double* src_hi, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] -= src_hi[-static_cast<std::ptrdiff_t>(i)];
}
void s_add_const(double* dst, double c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += c;
}
void s_vadd(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] + b[i];
}
void s_vsub(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] - b[i];
}
void s_axpy(double* dst, double c, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += c * src[i];
}
void s_scale(double* dst, double c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] *= c;
}
double s_max_abs_mul(const double* a, const double* w, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = std::fabs(a[i]) * w[i];
    if (v > m) m = v;
  }
  return m;
}
double s_max_abs_mul3(const double* a, const double* w1, const double* w2, const double* w3,
                      std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = std::fabs(a[i]) * w1[i] * w2[i] * w3[i];
    if (v > m) m = v;
  }
  return m;
}
double s_sum(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i];
  return s;
}
double s_energy_row(const double* a, const double* b, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += (a[i] * a[i] + b[i] * b[i]) * w[i];
  return s;
}

const Ops kScalarOps = {
    s_add,  s_sub,  s_add_rev,     s_sub_rev,      s_add_const, s_vadd, s_vsub,
    s_axpy, s_scale, s_max_abs_mul, s_max_abs_mul3, s_sum,       s_energy_row,
};

Backend g_backend = Backend::scalar;
const Ops* g_ops = &kScalarOps;
bool g_initialized = false;

void init_dispatch() {
  if (g_initialized) return;
  g_initialized = true;
  Backend want = Backend::scalar;
#ifdef RWAVE_HAVE_AVX2
  if (avx2_supported()) want = Backend::avx2;
#endif
  if (const char* env = std::getenv("RWAVE_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) want = Backend::scalar;
#ifdef RWAVE_HAVE_AVX2
    if (std::strcmp(env, "avx2") == 0 && avx2_supported()) want = Backend::avx2;
#endif
  }
  force_backend(want);
}

}  // namespace

bool avx2_compiled_in() {
#ifdef RWAVE_HAVE_AVX2
  return true;
#else
  return false;
#endif
}

bool avx2_supported() {
#ifdef RWAVE_HAVE_AVX2
#if defined(__GNUC__) || defined(__clang__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
#else
  return false;
#endif
}

Backend force_backend(Backend b) {
  g_initialized = true;
#ifdef RWAVE_HAVE_AVX2
  if (b == Backend::avx2 && avx2_supported()) {
    g_backend = Backend::avx2;
    g_ops = &avx2_ops();
    return g_backend;
  }
#endif
  g_backend = Backend::scalar;
  g_ops = &kScalarOps;
  return g_backend;
}

Backend active_backend() {
  init_dispatch();
  return g_backend;
}

const char* backend_name() {
  init_dispatch();
  return g_backend == Backend::avx2 ? "avx2" : "scalar";
}

const Ops& ops() {
  init_dispatch();
  return *g_ops;
}

const Ops& scalar_ops() { return kScalarOps; }

}  // namespace rwave::simd
