// Backend equivalence and semantics of the low-level array kernels.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "rwave/kernels.hpp"

using namespace rwave;

namespace {

std::vector<double> random_vec(std::mt19937& gen, std::size_t n, double lo = -1.0,
                               double hi = 1.0) {
  std::uniform_real_distribution<double> U(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = U(gen);
  return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  return a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("backend selection is consistent") {
  CHECK((simd::active_backend() == simd::Backend::scalar ||
         simd::active_backend() == simd::Backend::avx2));
  CHECK(simd::backend_name() != nullptr);
  // Forcing the scalar backend always succeeds.
  CHECK(simd::force_backend(simd::Backend::scalar) == simd::Backend::scalar);
  // Forcing AVX2 succeeds exactly when it is compiled in and supported.
  const simd::Backend got = simd::force_backend(simd::Backend::avx2);
  if (simd::avx2_compiled_in() && simd::avx2_supported())
    CHECK(got == simd::Backend::avx2);
  else
    CHECK(got == simd::Backend::scalar);
}

TEST_CASE("elementwise kernels are bitwise-identical across backends") {
  const simd::Backend got = simd::force_backend(simd::Backend::avx2);
  const simd::Ops& fast = simd::ops();
  simd::force_backend(simd::Backend::scalar);
  const simd::Ops& ref = simd::scalar_ops();
  INFO("comparing scalar against " << (got == simd::Backend::avx2 ? "avx2" : "scalar"));

  std::mt19937 gen(20240817);
  for (std::size_t n = 0; n <= 67; ++n) {
    const auto a = random_vec(gen, n);
    const auto b = random_vec(gen, n);
    const auto base = random_vec(gen, n);
    const double c = 1.7360451812345;

    auto d1 = base, d2 = base;
    ref.add(d1.data(), a.data(), n);
    fast.add(d2.data(), a.data(), n);
    CHECK(bitwise_equal(d1, d2));

    d1 = base;
    d2 = base;
    ref.sub(d1.data(), a.data(), n);
    fast.sub(d2.data(), a.data(), n);
    CHECK(bitwise_equal(d1, d2));

    if (n > 0) {
      d1 = base;
      d2 = base;
      ref.add_rev(d1.data(), a.data() + n - 1, n);
      fast.add_rev(d2.data(), a.data() + n - 1, n);
      CHECK(bitwise_equal(d1, d2));

      d1 = base;
      d2 = base;
      ref.sub_rev(d1.data(), a.data() + n - 1, n);
      fast.sub_rev(d2.data(), a.data() + n - 1, n);
      CHECK(bitwise_equal(d1, d2));
    }

    d1 = base;
    d2 = base;
    ref.add_const(d1.data(), c, n);
    fast.add_const(d2.data(), c, n);
    CHECK(bitwise_equal(d1, d2));

    d1.assign(n, 0.0);
    d2.assign(n, 0.0);
    ref.vadd(d1.data(), a.data(), b.data(), n);
    fast.vadd(d2.data(), a.data(), b.data(), n);
    CHECK(bitwise_equal(d1, d2));

    d1.assign(n, 0.0);
    d2.assign(n, 0.0);
    ref.vsub(d1.data(), a.data(), b.data(), n);
    fast.vsub(d2.data(), a.data(), b.data(), n);
    CHECK(bitwise_equal(d1, d2));

    d1 = base;
    d2 = base;
    ref.axpy(d1.data(), c, a.data(), n);
    fast.axpy(d2.data(), c, a.data(), n);
    CHECK(bitwise_equal(d1, d2));

    d1 = base;
    d2 = base;
    ref.scale(d1.data(), c, n);
    fast.scale(d2.data(), c, n);
    CHECK(bitwise_equal(d1, d2));
  }
}

TEST_CASE("max reductions are bitwise-identical across backends") {
  const simd::Backend got = simd::force_backend(simd::Backend::avx2);
  const simd::Ops& fast = simd::ops();
  simd::force_backend(simd::Backend::scalar);
  const simd::Ops& ref = simd::scalar_ops();
  INFO("comparing scalar against " << (got == simd::Backend::avx2 ? "avx2" : "scalar"));

  std::mt19937 gen(987654);
  for (std::size_t n = 1; n <= 67; ++n) {
    const auto a = random_vec(gen, n);
    const auto w1 = random_vec(gen, n, 0.0, 2.0);
    const auto w2 = random_vec(gen, n, 0.0, 2.0);
    const auto w3 = random_vec(gen, n, 0.0, 2.0);
    const double m_ref = ref.max_abs_mul(a.data(), w1.data(), n);
    const double m_fast = fast.max_abs_mul(a.data(), w1.data(), n);
    CHECK(m_ref == m_fast);
    const double t_ref = ref.max_abs_mul3(a.data(), w1.data(), w2.data(), w3.data(), n);
    const double t_fast = fast.max_abs_mul3(a.data(), w1.data(), w2.data(), w3.data(), n);
    CHECK(t_ref == t_fast);
  }
}

TEST_CASE("sum-style reductions agree to rounding error across backends") {
  const simd::Backend got = simd::force_backend(simd::Backend::avx2);
  const simd::Ops& fast = simd::ops();
  simd::force_backend(simd::Backend::scalar);
  const simd::Ops& ref = simd::scalar_ops();
  INFO("comparing scalar against " << (got == simd::Backend::avx2 ? "avx2" : "scalar"));

  std::mt19937 gen(5150);
  for (std::size_t n : {1u, 2u, 3u, 5u, 16u, 33u, 64u, 67u, 1000u}) {
    const auto a = random_vec(gen, n);
    const auto b = random_vec(gen, n);
    const auto w = random_vec(gen, n, 0.0, 2.0);
    const double s1 = ref.sum(a.data(), n);
    const double s2 = fast.sum(a.data(), n);
    CHECK(std::fabs(s1 - s2) <= 1e-13 * (std::fabs(s1) + static_cast<double>(n)));
    const double e1 = ref.energy_row(a.data(), b.data(), w.data(), n);
    const double e2 = fast.energy_row(a.data(), b.data(), w.data(), n);
    CHECK(std::fabs(e1 - e2) <= 1e-13 * (std::fabs(e1) + static_cast<double>(n)));
  }
}

TEST_CASE("scalar kernels match naive loops") {
  const simd::Ops& ref = simd::scalar_ops();
  std::mt19937 gen(31337);
  const std::size_t n = 23;
  const auto a = random_vec(gen, n);
  const auto b = random_vec(gen, n);
  const auto w = random_vec(gen, n, 0.0, 2.0);
  const auto base = random_vec(gen, n);
  const double c = -0.37;

  auto d = base;
  ref.axpy(d.data(), c, a.data(), n);
  for (std::size_t i = 0; i < n; ++i) CHECK(d[i] == doctest::Approx(base[i] + c * a[i]).epsilon(1e-15));

  d = base;
  ref.add_rev(d.data(), a.data() + n - 1, n);
  for (std::size_t i = 0; i < n; ++i)
    CHECK(d[i] == doctest::Approx(base[i] + a[n - 1 - i]).epsilon(1e-15));

  d = base;
  ref.sub_rev(d.data(), a.data() + n - 1, n);
  for (std::size_t i = 0; i < n; ++i)
    CHECK(d[i] == doctest::Approx(base[i] - a[n - 1 - i]).epsilon(1e-15));

  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i]) * w[i]);
  CHECK(ref.max_abs_mul(a.data(), w.data(), n) == m);

  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += (a[i] * a[i] + b[i] * b[i]) * w[i];
  CHECK(ref.energy_row(a.data(), b.data(), w.data(), n) ==
        doctest::Approx(s).epsilon(1e-13));
}
