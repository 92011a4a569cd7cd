#include "rwave/ratefit.hpp"

#include <cmath>
#include <string>

#include "rwave/errors.hpp"

namespace rwave {

RateFit fit_decay_exponent(const std::vector<double>& a, const std::vector<double>& y,
                           double lo, double hi) {
  if (a.size() != y.size())
    throw InvalidArgument("rate fit needs matching abscissa and value lengths");
  if (!(lo < hi)) throw InvalidArgument("rate-fit window must have lo < hi");

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < lo || a[i] > hi) continue;
    if (!(y[i] > 1e-14)) continue;  // below the value floor (or non-finite)
    xs.push_back(std::log1p(a[i]));
    ys.push_back(std::log(y[i]));
  }
  const int n = static_cast<int>(xs.size());
  if (n < 5)
    throw DegenerateSeries("rate fit needs at least 5 usable points in [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "], got " +
                           std::to_string(n));

  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw DegenerateSeries("rate fit abscissas are all equal");

  RateFit fit;
  fit.slope = sxy / sxx;
  const double intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = ys[i] - (intercept + fit.slope * xs[i]);
    ssr += r * r;
  }
  fit.stderr_ = std::sqrt(ssr / (n - 2) / sxx);
  fit.n_used = n;
  fit.window_lo = lo;
  fit.window_hi = hi;
  return fit;
}

}  // namespace rwave
