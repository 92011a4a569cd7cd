// Exponent classification, decay orders, and the correction-depth ladder.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "rwave/errors.hpp"
#include "rwave/params.hpp"

using namespace rwave;

TEST_CASE("classification by exponent pair") {
  CHECK(classify_exponents(3.0, 3.0) == Regime::ShortRange);
  CHECK(classify_exponents(2.5, 4.0) == Regime::ShortRange);
  CHECK(classify_exponents(2.0, 4.0) == Regime::PEqualsTwo);
  CHECK(classify_exponents(1.8, 4.0) == Regime::LongRangeSimple);
  CHECK(classify_exponents(1.5, 5.5) == Regime::LongRangeIterated);

  // Power too weak for any small-data theory: q (p - 1) <= 2.
  CHECK_THROWS_AS(classify_exponents(1.5, 3.0), SubcriticalExponents);
  CHECK_THROWS_AS(classify_exponents(1.5, 2.6), SubcriticalExponents);
  CHECK_THROWS_AS(classify_exponents(2.0, 2.0), SubcriticalExponents);  // exact boundary

  // 1 < p < 2 but the iterated product condition fails: (p-1)^2 (q-1) <= 1.
  CHECK_THROWS_AS(classify_exponents(1.5, 5.0), ConditionViolated);  // exactly 1
  CHECK_THROWS_AS(classify_exponents(1.4, 6.0), ConditionViolated);

  // Domain errors.
  CHECK_THROWS_AS(classify_exponents(1.0, 5.0), InvalidArgument);
  CHECK_THROWS_AS(classify_exponents(3.0, 2.5), InvalidArgument);  // q < p
  CHECK_THROWS_AS(classify_exponents(std::nan(""), 3.0), InvalidArgument);
}

TEST_CASE("decay orders per regime") {
  KappaPair k = kappa_pair(Exponents{3.0, 3.0, {}, {}});
  CHECK(k.k1 == 2.0);
  CHECK(k.k2 == 2.0);

  k = kappa_pair(Exponents{1.8, 4.0, {}, {}});
  CHECK(k.k1 == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(k.k2 == doctest::Approx(2.2).epsilon(1e-14));

  k = kappa_pair(Exponents{1.5, 5.5, {}, {}});
  CHECK(k.k1 == 0.5);
  CHECK(k.k2 == 1.75);

  k = kappa_pair(Exponents{2.0, 4.0, {}, {}});
  CHECK(k.k1 == 0.75);
  CHECK(k.k2 == 2.0);
}

TEST_CASE("decay-order overrides only apply at p = 2 and must be consistent") {
  // One-sided overrides complete the pair through q k1 = k2 + 1.
  KappaPair k = kappa_pair(Exponents{2.0, 4.0, 0.7, {}});
  CHECK(k.k1 == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(k.k2 == doctest::Approx(1.8).epsilon(1e-14));

  k = kappa_pair(Exponents{2.0, 4.0, {}, 1.8});
  CHECK(k.k1 == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(k.k2 == doctest::Approx(1.8).epsilon(1e-14));

  k = kappa_pair(Exponents{2.0, 4.0, 0.9, 2.6});
  CHECK(k.k1 == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(k.k2 == doctest::Approx(2.6).epsilon(1e-14));

  // Inconsistent pair: q k1 != k2 + 1.
  CHECK_THROWS_AS(kappa_pair(Exponents{2.0, 4.0, 0.7, 2.0}), InvalidArgument);
  // Out of range: k1 must stay below 1 (and k2 below q - 1).
  CHECK_THROWS_AS(kappa_pair(Exponents{2.0, 4.0, {}, 3.2}), InvalidArgument);
  CHECK_THROWS_AS(kappa_pair(Exponents{2.0, 4.0, 1.05, {}}), InvalidArgument);
  // Overrides are rejected away from p = 2.
  CHECK_THROWS_AS(kappa_pair(Exponents{3.0, 3.0, 0.5, {}}), InvalidArgument);
  CHECK_THROWS_AS(kappa_pair(Exponents{1.8, 4.0, {}, 2.0}), InvalidArgument);
}

TEST_CASE("ladder members and growth exponents: simple long-range pair") {
  const ExponentLadder lad = build_exponent_ladder(Exponents{1.8, 4.0, {}, {}});
  CHECK(lad.regime == Regime::LongRangeSimple);
  CHECK(lad.ell == 0);
  CHECK_FALSE(lad.degenerate);
  CHECK(lad.a_raw(0) == 1.0);
  CHECK(lad.a_raw(1) == doctest::Approx(2.2).epsilon(1e-13));
  CHECK(lad.a_raw(2) == doctest::Approx(3.16).epsilon(1e-13));
  CHECK(lad.b(0) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(lad.B(0) == doctest::Approx(4.2).epsilon(1e-13));
  CHECK(lad.B(-1) == 1.0);
}

TEST_CASE("ladder members and growth exponents: iterated pair") {
  const ExponentLadder lad = build_exponent_ladder(Exponents{1.5, 5.5, {}, {}});
  CHECK(lad.regime == Regime::LongRangeIterated);
  CHECK(lad.ell == 1);
  CHECK_FALSE(lad.degenerate);
  CHECK(lad.a_raw(0) == 1.0);
  CHECK(lad.a_raw(1) == doctest::Approx(1.75).epsilon(1e-13));
  CHECK(lad.a_raw(2) == doctest::Approx(2.125).epsilon(1e-13));
  CHECK(lad.a_raw(3) == doctest::Approx(2.3125).epsilon(1e-13));
  CHECK(lad.b(1) == doctest::Approx(10.5).epsilon(1e-13));
  CHECK(lad.B(1) == doctest::Approx(6.25).epsilon(1e-13));
  // The depth bracket: k1 a_ell <= 1 < k1 a_{ell+1}.
  CHECK(lad.kappa.k1 * lad.a_raw(lad.ell) <= 1.0);
  CHECK(lad.kappa.k1 * lad.a_raw(lad.ell + 1) > 1.0);
}

TEST_CASE("short-range ladder is trivial") {
  const ExponentLadder lad = build_exponent_ladder(Exponents{3.0, 3.0, {}, {}});
  CHECK(lad.ell == -1);
  CHECK(lad.a.size() == 1);
  CHECK(lad.a_raw(0) == 1.0);
  CHECK(lad.B(lad.ell) == 1.0);
}

TEST_CASE("borderline member is nudged, raw values kept") {
  // k1 = 0.5, k2 = 2: a = (1, 2, 2.5, ...) and k1 a_1 = 1 exactly.
  const ExponentLadder lad = build_exponent_ladder(Exponents{1.5, 6.0, {}, {}});
  CHECK(lad.regime == Regime::LongRangeIterated);
  CHECK(lad.ell == 1);
  CHECK(lad.degenerate);
  CHECK(lad.delta == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(lad.a_raw(1) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(lad.a_raw(2) == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(lad.a_effective(1) == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(lad.a_effective(2) == doctest::Approx(2.25).epsilon(1e-13));
  // The effective members still bracket the crossing with strict margins.
  CHECK(lad.kappa.k1 * lad.a_effective(lad.ell) < 1.0);
  CHECK(lad.kappa.k1 * lad.a_effective(lad.ell + 1) > 1.0);
}

TEST_CASE("recurrence equals the closed form across sampled exponents") {
  std::mt19937 gen(424242);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int built = 0;
  for (int trial = 0; trial < 400 && built < 200; ++trial) {
    const double p = 1.02 + 0.96 * U(gen);
    const double q_min = std::max(2.0 / (p - 1.0), 1.0 + 1.0 / ((p - 1.0) * (p - 1.0)));
    const double q = q_min * (1.0 + 0.02 + 2.0 * U(gen));
    try {
      const ExponentLadder lad = build_exponent_ladder(Exponents{p, q, {}, {}});
      ++built;
      for (int j = 0; j <= lad.ell + 2; ++j) {
        const double ref = lad.closed_form(j);
        CHECK(std::fabs(lad.a_raw(j) - ref) <= 1e-10 * std::max(1.0, std::fabs(ref)));
      }
      CHECK(lad.kappa.k1 * lad.a_raw(lad.ell) <= 1.0);
      CHECK(lad.kappa.k1 * lad.a_raw(lad.ell + 1) > 1.0);
    } catch (const Error&) {
      // Rejections from boundary-grazing samples are fine; we only need the
      // accepted ones.
    }
  }
  CHECK(built == 200);
}
