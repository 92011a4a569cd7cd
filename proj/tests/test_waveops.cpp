// Closed-form identities, convergence orders, and source machinery of the
// three lightcone integral operators.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>

#include "rwave/errors.hpp"
#include "rwave/field.hpp"
#include "rwave/grid.hpp"
#include "rwave/norms.hpp"
#include "rwave/profiles.hpp"
#include "rwave/waveops.hpp"

using namespace rwave;

namespace {

Lattice small_lat() { return Lattice(GridSpec{4.0, 4.0, 64, true}, 4.0); }

SourceField constant_source(const Lattice& lat, double value) {
  SourceField F(lat, false);
  for (int k = 0; k <= lat.nt(); ++k) {
    double* row = F.row(k);
    for (int i = 0; i < lat.nr(); ++i) row[i] = value;
  }
  return F;
}

SourceField smooth_source(const Lattice& lat) {
  SourceField F(lat, false);
  for (int k = 0; k <= lat.nt(); ++k) {
    double* row = F.row(k);
    const double td = std::pow(1.0 + lat.t(k), -3.0);
    for (int i = 0; i < lat.nr(); ++i) {
      const double r = lat.r(i);
      row[i] = std::exp(-r * r / 4.0) * td;
    }
  }
  return F;
}

double window_sup_vs(const Field& u, double (*expect)(double, double)) {
  double sup = 0.0;
  const Lattice& lat = u.lat();
  for (int k = 0; k <= lat.nt_window(); ++k)
    for (int i = 0; i < lat.nr_window(); ++i)
      sup = std::max(sup, std::fabs(u.u(i, k) - expect(lat.r(i), lat.t(k))));
  return sup;
}

double field_sup_diff(const Field& a, const Field& b) {
  double sup = 0.0;
  const Lattice& lat = a.lat();
  for (int k = 0; k <= lat.nt(); ++k)
    for (int i = 0; i < lat.nr(); ++i)
      sup = std::max({sup, std::fabs(a.u(i, k) - b.u(i, k)), std::fabs(a.ur(i, k) - b.ur(i, k)),
                      std::fabs(a.ut(i, k) - b.ut(i, k))});
  return sup;
}

}  // namespace

TEST_CASE("forward integral of a unit source is t^2/2") {
  const Lattice lat = small_lat();
  const Field u = apply_L(constant_source(lat, 1.0));
  CHECK(window_sup_vs(u, [](double, double t) { return 0.5 * t * t; }) <= 1e-10);
  double dt_sup = 0.0, trace = 0.0;
  for (int k = 0; k <= lat.nt_window(); ++k)
    for (int i = 0; i < lat.nr_window(); ++i)
      dt_sup = std::max(dt_sup, std::fabs(u.ut(i, k) - lat.t(k)));
  CHECK(dt_sup <= 1e-10);
  for (int i = 0; i < lat.nr_window(); ++i)
    trace = std::max(trace, std::fabs(u.u(i, 0)) + std::fabs(u.ut(i, 0)));
  CHECK(trace <= 1e-12);
}

TEST_CASE("free propagation of constant data stays constant") {
  const Lattice lat = small_lat();
  DataPair d(lat);
  for (int j = 0; j < lat.nl(); ++j) d.f[j] = 1.0;
  const Field u = apply_K(d);
  double sup = 0.0;
  for (int k = 0; k <= lat.nt_window(); ++k)
    for (int i = 0; i < lat.nr_window(); ++i)
      sup = std::max({sup, std::fabs(u.u(i, k) - 1.0), std::fabs(u.ur(i, k)),
                      std::fabs(u.ut(i, k))});
  CHECK(sup <= 1e-12);
}

TEST_CASE("backward integral of a time step has the closed square form") {
  const Lattice lat = small_lat();
  SourceField F(lat, false);
  for (int k = 0; k <= lat.nt(); ++k) {
    const double t = lat.t(k);
    double v = 0.0;
    if (t < 1.0 - 1e-12)
      v = 1.0;
    else if (std::fabs(t - 1.0) <= 1e-12)
      v = 0.5;  // half weight exactly at the jump keeps the trapezoid sums exact
    double* row = F.row(k);
    for (int i = 0; i < lat.nr(); ++i) row[i] = v;
  }
  TruncationPolicy pol;
  const Field u = apply_R(F, pol);
  CHECK(window_sup_vs(u, [](double, double t) {
          return t <= 1.0 ? 0.5 * (1.0 - t) * (1.0 - t) : 0.0;
        }) <= 1e-8);
}

TEST_CASE("backward integral with an explicit horizon") {
  const Lattice lat = small_lat();
  TruncationPolicy pol;
  pol.t_infinity = 2.0;  // integrate t -> 2 only
  const Field u = apply_R(constant_source(lat, 1.0), pol);
  CHECK(window_sup_vs(u, [](double, double t) {
          return t <= 2.0 ? 0.5 * (2.0 - t) * (2.0 - t) : 0.0;
        }) <= 1e-8);
  // At the full horizon the backward integral is empty.
  TruncationPolicy full;
  const Field w = apply_R(smooth_source(lat), full);
  double top = 0.0;
  for (int i = 0; i < lat.nr(); ++i) top = std::max(top, std::fabs(w.u(i, lat.nt())));
  CHECK(top == 0.0);
}

TEST_CASE("free propagation respects the lightcone support bound") {
  const Lattice lat = small_lat();
  DataPair d(lat);
  for (int j = 0; j < lat.nl(); ++j) {
    const double r = lat.lambda(j);
    if (r < 1.0) {
      const double c = std::cos(0.5 * std::acos(-1.0) * r);
      d.f[j] = c * c;
      d.g[j] = -c * c;
    }
  }
  const Field u = apply_K(d);
  double outside = 0.0;
  for (int k = 0; k <= lat.nt_window(); ++k)
    for (int i = 0; i < lat.nr_window(); ++i)
      if (lat.r(i) - lat.t(k) > 1.0 + lat.h())
        outside = std::max(outside, std::fabs(u.u(i, k)));
  CHECK(outside <= 1e-14);
}

TEST_CASE("operators are exactly linear at power-of-two scales") {
  const Lattice lat = small_lat();

  DataPair d = make_profile(lat, ProfileFamily::gaussian, 1.0, 1e-2);
  DataPair d2 = d;
  d2.scale(2.0);
  Field ka = apply_K(d2);
  Field kb = apply_K(d);
  kb.scale(2.0);
  CHECK(field_sup_diff(ka, kb) == 0.0);

  SourceField F = smooth_source(lat);
  SourceField F2 = smooth_source(lat);
  for (int k = 0; k <= lat.nt(); ++k) {
    double* row = F2.row(k);
    for (int i = 0; i < lat.nr(); ++i) row[i] *= 2.0;
  }
  Field la = apply_L(F2);
  Field lb = apply_L(F);
  lb.scale(2.0);
  CHECK(field_sup_diff(la, lb) == 0.0);

  TruncationPolicy pol;
  Field ra = apply_R(F2, pol);
  Field rb = apply_R(F, pol);
  rb.scale(2.0);
  CHECK(field_sup_diff(ra, rb) == 0.0);
}

TEST_CASE("interior residuals converge at second order") {
  auto max_resid = [](const std::string& which, int n) {
    Lattice lat(GridSpec{8.0, 8.0, n, true}, 8.0);
    if (which == "K") {
      DataPair d = make_profile(lat, ProfileFamily::gaussian, 1.0, 1e-2);
      Field u = apply_K(d);
      SourceField zero(lat, false);
      Field res = pde_residual(u, zero);
      return residual_stats(res, 2).max_abs;
    }
    SourceField F = smooth_source(lat);
    TruncationPolicy pol;
    Field u = (which == "L") ? apply_L(F) : apply_R(F, pol);
    Field res = pde_residual(u, F);
    return residual_stats(res, 2).max_abs;
  };
  for (const std::string which : {"K", "L", "R"}) {
    const double lo = max_resid(which, 64);
    const double hi = max_resid(which, 128);
    REQUIRE(lo > 0.0);
    REQUIRE(hi > 0.0);
    INFO("operator " << which << ": " << lo << " -> " << hi);
    CHECK(std::log2(lo / hi) >= 1.8);
  }
}

TEST_CASE("power nonlinearity evaluates |d_t v|^e with a flat radial slope") {
  const Lattice lat(GridSpec{4.0, 4.0, 16, true}, 4.0);
  Field v(lat);
  for (int k = 0; k <= lat.nt(); ++k) {
    double* c = v.ut_row(k);
    for (int i = 0; i < lat.nr(); ++i) c[i] = (k % 2 == 0) ? 2.0 : -2.0;
  }
  const double e = 1.8;
  const SourceField F = nonlinearity(v, e);
  REQUIRE(F.has_fr());
  const double expect = std::pow(2.0, e);
  for (int k = 0; k <= lat.nt(); ++k)
    for (int i = 0; i < lat.nr(); ++i) {
      CHECK(F.row(k)[i] == expect);
      CHECK(F.fr_row(k)[i] == 0.0);
    }
}

TEST_CASE("difference of powers telescopes bitwise") {
  const Lattice lat(GridSpec{4.0, 4.0, 32, true}, 4.0);
  const Field a = apply_K(make_profile(lat, ProfileFamily::gaussian, 1.0, 2e-2));
  const Field b = apply_K(make_profile(lat, ProfileFamily::algebraic, 1.0, 1e-2));
  const double e = 2.4;
  const SourceField diff = difference_source(a, b, e);
  const SourceField fa = nonlinearity(a, e);
  const SourceField fb = nonlinearity(b, e);
  for (int k = 0; k <= lat.nt(); ++k)
    for (int i = 0; i < lat.nr(); ++i)
      CHECK(diff.row(k)[i] == fa.row(k)[i] - fb.row(k)[i]);
}

TEST_CASE("decay classes for power sources satisfy the backward hypotheses") {
  // Fast-decay component: everything lands on the cone-distance weight.
  WeightParams w = power_source_class(3.0, 2.0);
  CHECK(w.alpha == 0.0);
  CHECK(w.beta == 3.0);
  CHECK(w.gamma == 0.0);
  CHECK(w.delta == 6.0);
  CHECK_NOTHROW(validate_weights_for_R(w));

  // Slow-decay component: the class trades cone-distance decay for a growing
  // total-distance factor, keeping the weighted sup finite.
  w = power_source_class(4.0, 0.8);
  CHECK(w.beta == 4.0);
  CHECK(w.gamma == doctest::Approx(-0.8).epsilon(1e-13));
  CHECK(w.delta == 4.0);
  CHECK_NOTHROW(validate_weights_for_R(w));

  w = difference_source_class(1.8, 2.2, 2.2);
  CHECK(w.beta == doctest::Approx(1.8).epsilon(1e-13));
  CHECK(w.gamma == doctest::Approx(1.2).epsilon(1e-13));
  CHECK(w.delta == doctest::Approx(1.0 + 0.8 * 2.2).epsilon(1e-13));
  CHECK_NOTHROW(validate_weights_for_R(w));
}

TEST_CASE("tail classes are attached only when tail checking is on") {
  TruncationPolicy base;
  base.check_tails = false;
  WeightParams stale;
  stale.beta = 9.0;
  base.weight_hint = stale;  // a caller hint never leaks into pipeline calls
  const WeightParams cls = power_source_class(3.0, 2.0);
  TruncationPolicy off = with_tail_class(base, cls);
  CHECK_FALSE(off.weight_hint.has_value());
  base.check_tails = true;
  TruncationPolicy on = with_tail_class(base, cls);
  REQUIRE(on.weight_hint.has_value());
  CHECK(on.weight_hint->beta == 3.0);
  CHECK(on.weight_hint->delta == 6.0);
}

TEST_CASE("tail estimate scales with the source and shrinks with the horizon") {
  const Lattice lat(GridSpec{8.0, 8.0, 64, true}, 8.0);
  SourceField F(lat, false);
  for (int k = 0; k <= lat.nt(); ++k) {
    double* row = F.row(k);
    const double t = lat.t(k);
    for (int i = 0; i < lat.nr(); ++i) {
      const double r = lat.lambda(i);
      row[i] = std::pow(1.0 + r, -3.0) * std::pow(1.0 + std::fabs(r - t), -2.0);
    }
  }
  WeightParams w;
  w.alpha = 0.0;
  w.beta = 3.0;
  w.gamma = 0.0;
  w.delta = 2.0;
  const double tail8 = estimate_R_tail(F, w, 8.0);
  const double tail32 = estimate_R_tail(F, w, 32.0);
  CHECK(tail8 > 0.0);
  CHECK(tail32 < tail8);

  SourceField F2 = F;
  for (int k = 0; k <= lat.nt(); ++k) {
    double* row = F2.row(k);
    for (int i = 0; i < lat.nr(); ++i) row[i] *= 2.0;
  }
  CHECK(estimate_R_tail(F2, w, 8.0) == doctest::Approx(2.0 * tail8).epsilon(1e-12));
}

TEST_CASE("fat tails beyond the horizon are rejected when hinted") {
  const Lattice lat = small_lat();
  const SourceField F = constant_source(lat, 1.0);
  TruncationPolicy pol;
  WeightParams w;
  w.alpha = 0.0;
  w.beta = 1.5;
  w.gamma = 0.0;
  w.delta = 1.5;  // barely integrable: the bound is large against a unit source
  pol.weight_hint = w;
  pol.tail_tol = 1e-12;
  CHECK_THROWS_AS(apply_R(F, pol), TailTooFat);

  pol.tail_tol = 1e12;
  const Field checked = apply_R(F, pol);
  TruncationPolicy bare;
  const Field unchecked = apply_R(F, bare);
  CHECK(field_sup_diff(checked, unchecked) == 0.0);
}
