// Least-squares decay-exponent fits on log-log axes.
//
// Series values y(a) sampled at abscissas a (times or radii) are fitted as
// log y = slope * log(1 + a) + intercept over a window [lo, hi], so `slope`
// is the algebraic decay exponent of y against (1 + a).
#pragma once

#include <vector>

namespace rwave {

struct RateFit {
  double slope = 0.0;
  double stderr_ = 0.0;  // standard error of the slope estimate
  int n_used = 0;        // points inside the window above the value floor
  double window_lo = 0.0, window_hi = 0.0;
};

// Ordinary least squares on (log(1+a), log y) over a in [lo, hi], skipping
// points with y <= 1e-14 (value floor).  Throws DegenerateSeries when fewer
// than 5 usable points remain.
RateFit fit_decay_exponent(const std::vector<double>& a, const std::vector<double>& y,
                           double lo, double hi);

}  // namespace rwave
