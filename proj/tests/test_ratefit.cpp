// Decay-exponent fitting on log-log axes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "rwave/errors.hpp"
#include "rwave/ratefit.hpp"

using namespace rwave;

namespace {

std::vector<double> sample_power(const std::vector<double>& t, double amp, double slope) {
  std::vector<double> y;
  y.reserve(t.size());
  for (double x : t) y.push_back(amp * std::pow(1.0 + x, slope));
  return y;
}

}  // namespace

TEST_CASE("exact power law is recovered to rounding") {
  const std::vector<double> t{5.0, 10.0, 20.0, 40.0, 80.0};
  const RateFit f = fit_decay_exponent(t, sample_power(t, 1.0, -1.2), 1.0, 100.0);
  CHECK(std::fabs(f.slope - (-1.2)) <= 1e-10);
  CHECK(f.n_used == 5);
  CHECK(f.stderr_ <= 1e-8);
}

TEST_CASE("fitted exponent is amplitude independent") {
  const std::vector<double> t{5.0, 10.0, 20.0, 40.0, 80.0};
  const RateFit a = fit_decay_exponent(t, sample_power(t, 1.0, -0.76), 1.0, 100.0);
  const RateFit b = fit_decay_exponent(t, sample_power(t, 3.0, -0.76), 1.0, 100.0);
  CHECK(std::fabs(a.slope - (-0.76)) <= 1e-10);
  CHECK(std::fabs(b.slope - a.slope) <= 1e-10);
}

TEST_CASE("bounded oscillation perturbs the slope only slightly") {
  std::vector<double> t, y;
  for (double x = 5.0; x <= 80.0; x += 4.0) {
    t.push_back(x);
    y.push_back(std::pow(1.0 + x, -1.0) * (1.0 + 0.1 * std::sin(x)));
  }
  const RateFit f = fit_decay_exponent(t, y, 5.0, 80.0);
  CHECK(std::fabs(f.slope - (-1.0)) <= 0.05);
}

TEST_CASE("window filtering keeps only points inside [lo, hi]") {
  std::vector<double> t, y;
  for (double x = 1.0; x <= 100.0; x *= 1.5) t.push_back(x);
  y = sample_power(t, 2.0, -1.5);
  const RateFit f = fit_decay_exponent(t, y, 10.0, 80.0);
  int expected = 0;
  for (double x : t)
    if (x >= 10.0 && x <= 80.0) ++expected;
  CHECK(f.n_used == expected);
  CHECK(std::fabs(f.slope - (-1.5)) <= 1e-10);
  CHECK(f.window_lo == 10.0);
  CHECK(f.window_hi == 80.0);
}

TEST_CASE("values at the floor are discarded") {
  std::vector<double> t{5, 10, 20, 30, 40, 50, 60, 70, 80, 90};
  std::vector<double> y = sample_power(t, 1.0, -1.0);
  y[6] = 1e-15;  // below the 1e-14 floor
  y[7] = 0.0;
  y[8] = 1e-16;
  y[9] = 5e-15;
  const RateFit f = fit_decay_exponent(t, y, 1.0, 100.0);
  CHECK(f.n_used == 6);
  CHECK(std::fabs(f.slope - (-1.0)) <= 1e-10);
}

TEST_CASE("too few usable points raises a verification error") {
  const std::vector<double> t{5.0, 10.0, 20.0, 40.0};
  CHECK_THROWS_AS(fit_decay_exponent(t, sample_power(t, 1.0, -1.0), 1.0, 100.0),
                  DegenerateSeries);
  // Enough points overall, too few inside the window.
  const std::vector<double> t2{5, 10, 20, 40, 80, 160, 320};
  CHECK_THROWS_AS(fit_decay_exponent(t2, sample_power(t2, 1.0, -1.0), 100.0, 400.0),
                  DegenerateSeries);
  // All abscissas equal: no spread to regress on.
  const std::vector<double> t3{7, 7, 7, 7, 7, 7};
  CHECK_THROWS_AS(fit_decay_exponent(t3, sample_power(t3, 1.0, -1.0), 1.0, 100.0),
                  DegenerateSeries);
}

TEST_CASE("malformed inputs are rejected") {
  const std::vector<double> t{5.0, 10.0, 20.0};
  const std::vector<double> y{1.0, 0.5};
  CHECK_THROWS_AS(fit_decay_exponent(t, y, 1.0, 100.0), InvalidArgument);
  CHECK_THROWS_AS(fit_decay_exponent(t, sample_power(t, 1.0, -1.0), 50.0, 10.0), InvalidArgument);
}
