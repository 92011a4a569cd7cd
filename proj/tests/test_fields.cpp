// Lattice geometry, profiles, weighted norms, energy, and datum extraction.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "rwave/errors.hpp"
#include "rwave/field.hpp"
#include "rwave/grid.hpp"
#include "rwave/norms.hpp"
#include "rwave/profiles.hpp"

using namespace rwave;

TEST_CASE("lattice geometry and halo sizing") {
  const GridSpec spec{4.0, 4.0, 64, true};
  const Lattice lat(spec, 4.0);
  CHECK(lat.h() == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK(lat.nt_window() == 64);
  CHECK(lat.nt() == 64);
  CHECK(lat.nr_window() == 64);
  CHECK(lat.nr() == 128);   // window + one halo cell per time row
  CHECK(lat.nl() == 192);   // data extent feeding the farthest node
  CHECK(lat.r(0) == doctest::Approx(0.03125).epsilon(1e-15));
  CHECK(lat.t(2) == doctest::Approx(0.125).epsilon(1e-15));

  // A horizon beyond the window deepens the halo, not the window.
  const Lattice deep(spec, 8.0);
  CHECK(deep.nt_window() == 64);
  CHECK(deep.nt() == 128);
  CHECK(deep.nr() == 192);
  CHECK(deep.nl() == 256);
  // A horizon below the window is widened to it.
  const Lattice shallow(spec, 2.0);
  CHECK(shallow.nt() == 64);

  CHECK(Lattice::reflect(0) == -1);
  CHECK(Lattice::reflect(3) == -4);
  CHECK(lat.same_geometry(Lattice(spec, 4.0)));
  CHECK_FALSE(lat.same_geometry(deep));
}

TEST_CASE("profiles are scaled into their amplitude class exactly") {
  const Lattice lat(GridSpec{8.0, 8.0, 128, true}, 8.0);
  for (ProfileFamily fam : {ProfileFamily::gaussian, ProfileFamily::algebraic}) {
    for (double nu : {0.5, 1.0, 2.2}) {
      const DataPair d = make_profile(lat, fam, nu, 1e-2);
      CHECK(d.nu == nu);
      CHECK(d.eps == 1e-2);
      const auto [ok, sup] = check_Y_membership(d, nu, 1e-2);
      CHECK(ok);
      CHECK(std::fabs(sup - 1e-2) <= 1e-12 * 1e-2);
    }
  }
  const DataPair z = make_profile(lat, ProfileFamily::zero, 1.0, 0.0);
  const auto [okz, supz] = check_Y_membership(z, 1.0, 0.0);
  CHECK(okz);
  CHECK(supz == 0.0);
  CHECK_THROWS_AS(make_profile(lat, ProfileFamily::zero, 1.0, 0.1), ProfileUnscalable);
}

TEST_CASE("profile family names round-trip") {
  CHECK(profile_family_from_string("gaussian") == ProfileFamily::gaussian);
  CHECK(profile_family_from_string("algebraic") == ProfileFamily::algebraic);
  CHECK(profile_family_from_string("zero") == ProfileFamily::zero);
  CHECK_THROWS_AS(profile_family_from_string("sinusoid"), InvalidArgument);
  CHECK(std::string(profile_family_name(ProfileFamily::gaussian)) == "gaussian");
}

TEST_CASE("norm embeddings hold exactly in floating point") {
  const Lattice lat(GridSpec{8.0, 8.0, 64, true}, 8.0);
  std::mt19937 gen(90210);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Field f(lat);
    for (int k = 0; k <= lat.nt(); ++k) {
      double *a = f.u_row(k), *b = f.ur_row(k), *c = f.ut_row(k);
      for (int i = 0; i < lat.nr(); ++i) {
        a[i] = U(gen);
        b[i] = U(gen);
        c[i] = U(gen);
      }
    }
    for (int s : {1, 2}) {
      for (double nu : {0.5, 1.0}) CHECK(norm_Z(f, s, nu) <= norm_X(f, s, nu));
      CHECK(norm_Z(f, s, 2.0) >= norm_X(f, s, 2.0));
    }
  }
}

TEST_CASE("norms are exactly homogeneous under power-of-two scaling") {
  const Lattice lat(GridSpec{8.0, 8.0, 64, true}, 8.0);
  const DataPair d = make_profile(lat, ProfileFamily::gaussian, 1.0, 1e-2);
  Field u(lat);
  // Synthesize a field from the datum rows so all three planes are nonzero.
  for (int k = 0; k <= lat.nt(); ++k) {
    double *a = u.u_row(k), *b = u.ur_row(k), *c = u.ut_row(k);
    for (int i = 0; i < lat.nr(); ++i) {
      a[i] = d.f[i] * (1.0 + 0.25 * k);
      b[i] = d.fp[i];
      c[i] = d.g[i] * (1.0 - 0.125 * k);
    }
  }
  Field u2(lat);
  u2.copy_from(u);
  u2.scale(2.0);
  for (int s : {1, 2}) {
    CHECK(norm_X(u2, s, 1.5) == 2.0 * norm_X(u, s, 1.5));
    CHECK(norm_Z(u2, s, 0.5) == 2.0 * norm_Z(u, s, 0.5));
  }
}

TEST_CASE("field bracket at a node") {
  // h = 0.8 puts r = 2 on the staggered nodes.
  const Lattice lat(GridSpec{4.0, 4.0, 5, true}, 4.0);
  REQUIRE(lat.r(2) == doctest::Approx(2.0).epsilon(1e-15));
  Field u(lat);
  for (int k = 0; k <= lat.nt(); ++k) {
    double *a = u.u_row(k), *b = u.ur_row(k);
    for (int i = 0; i < lat.nr(); ++i) {
      a[i] = lat.r(i);
      b[i] = 1.0;
    }
  }
  // |u| + r(|u_r| + |u_t|) = 2 + 2 (1 + 0) = 4 at r = 2.
  CHECK(bracket_norm_at(u, 1, 2.0, lat.t(1)) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("lightcone-weighted sup of a constant-bracket field") {
  const Lattice lat(GridSpec{6.0, 6.0, 48, true}, 6.0);
  Field u(lat);
  for (int k = 0; k <= lat.nt(); ++k) {
    double* a = u.u_row(k);
    for (int i = 0; i < lat.nr(); ++i) a[i] = 1.0;
  }
  // The weight peaks at the (r_max - h/2, 0) corner of the window.
  const double expected = 1.0 + lat.r(lat.nr_window() - 1);
  CHECK(norm_X(u, 1, 1.0) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(norm_X(u, 2, 1.0) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("energy norm matches the closed form for a gaussian slope") {
  const Lattice lat(GridSpec{16.0, 16.0, 512, true}, 16.0);
  Field u(lat);
  double* b = u.ur_row(0);
  for (int i = 0; i < lat.nr(); ++i) {
    const double r = lat.lambda(i);
    b[i] = -2.0 * r * std::exp(-r * r);
  }
  const double pi = std::acos(-1.0);
  const double expected = std::sqrt(0.75 * pi * std::sqrt(0.5 * pi));
  CHECK(std::fabs(energy_norm(u, 0.0) - expected) <= 2e-4);
}

TEST_CASE("source weight functional recognizes exact decay profiles") {
  const Lattice lat(GridSpec{8.0, 8.0, 64, true}, 8.0);
  SourceField F(lat, false);
  for (int k = 0; k <= lat.nt(); ++k) {
    double* row = F.row(k);
    const double t = lat.t(k);
    for (int i = 0; i < lat.nr(); ++i) {
      const double r = lat.lambda(i);
      row[i] = std::pow(1.0 + r, -2.0) * std::pow(1.0 + std::fabs(r - t), -1.5);
    }
  }
  WeightParams w;
  w.alpha = 0.0;
  w.beta = 2.0;
  w.gamma = 0.0;
  w.delta = 1.5;
  w.s = 1;
  CHECK(weighted_sup_M(F, w) == doctest::Approx(1.0).epsilon(1e-12));
  // Over-weighting in the cone distance leaves a growing factor behind.
  WeightParams heavier = w;
  heavier.delta = 2.0;
  CHECK(weighted_sup_M(F, heavier) > 1.5);
}

TEST_CASE("weight hypotheses are enforced") {
  WeightParams ok;
  ok.alpha = 0.5;
  ok.beta = 2.0;
  ok.gamma = 0.0;
  ok.delta = 1.5;
  ok.s = 1;
  CHECK_NOTHROW(validate_weights_for_L(ok));
  CHECK_NOTHROW(validate_weights_for_R(ok));

  WeightParams bad = ok;
  bad.alpha = 2.0;  // alpha < 3 - s fails
  CHECK_THROWS_AS(validate_weights_for_L(bad), InvalidArgument);
  CHECK_THROWS_AS(validate_weights_for_R(bad), InvalidArgument);

  bad = ok;
  bad.delta = 1.0;  // needs delta > 1
  CHECK_THROWS_AS(validate_weights_for_L(bad), InvalidArgument);
  CHECK_THROWS_AS(validate_weights_for_R(bad), InvalidArgument);

  bad = ok;
  bad.gamma = -0.5;  // forward estimate needs gamma >= 0; backward one does not
  CHECK_THROWS_AS(validate_weights_for_L(bad), InvalidArgument);
  CHECK_NOTHROW(validate_weights_for_R(bad));

  bad = ok;
  bad.beta = 1.0;
  bad.gamma = 0.5;  // alpha + beta + gamma = 2 fails the backward-sum hypothesis
  CHECK_THROWS_AS(validate_weights_for_R(bad), InvalidArgument);
}

TEST_CASE("datum extraction copies the trace and zero-fills the far extent") {
  const Lattice lat(GridSpec{8.0, 8.0, 64, true}, 8.0);
  const DataPair prof = make_profile(lat, ProfileFamily::gaussian, 1.0, 1e-2);
  Field u(lat);
  for (int k = 0; k <= lat.nt(); ++k) {
    double *a = u.u_row(k), *b = u.ur_row(k), *c = u.ut_row(k);
    for (int i = 0; i < lat.nr(); ++i) {
      a[i] = prof.f[i];
      b[i] = prof.fp[i];
      c[i] = prof.g[i];
    }
  }
  const DataPair d = extract_datum(u);
  for (int i = 0; i < lat.nr(); ++i) {
    CHECK(d.f[i] == u.u(i, 0));
    CHECK(d.fp[i] == u.ur(i, 0));
    CHECK(d.g[i] == u.ut(i, 0));
    CHECK(std::isfinite(d.fpp[i]));
    CHECK(std::isfinite(d.gp[i]));
  }
  for (int j = lat.nr(); j < lat.nl(); ++j) {
    CHECK(d.f[j] == 0.0);
    CHECK(d.fp[j] == 0.0);
    CHECK(d.fpp[j] == 0.0);
    CHECK(d.g[j] == 0.0);
    CHECK(d.gp[j] == 0.0);
  }
}

TEST_CASE("datum scaling is exact for powers of two") {
  const Lattice lat(GridSpec{8.0, 8.0, 32, true}, 8.0);
  const DataPair d = make_profile(lat, ProfileFamily::algebraic, 1.0, 1e-2);
  DataPair s = d;
  s.scale(2.0);
  for (int j = 0; j < lat.nl(); ++j) {
    CHECK(s.f[j] == 2.0 * d.f[j]);
    CHECK(s.g[j] == 2.0 * d.g[j]);
    CHECK(s.fpp[j] == 2.0 * d.fpp[j]);
  }
}
