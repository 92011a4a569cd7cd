#include "rwave/field.hpp"

namespace rwave {

DataPair extract_datum(const Field& u) {
  const Lattice& lat = u.lat();
  const int nr = lat.nr();
  const double h = lat.h();
  DataPair d(lat);
  const double* f = u.u_row(0);
  const double* fp = u.ur_row(0);
  const double* g = u.ut_row(0);
  for (int i = 0; i < nr; ++i) {
    d.f[i] = f[i];
    d.fp[i] = fp[i];
    d.g[i] = g[i];
  }
  // f' is odd in r, g is even; reflect across the axis for the first stencil.
  for (int i = 0; i < nr; ++i) {
    double fp_lo = (i == 0) ? -fp[0] : fp[i - 1];
    double fp_hi = (i == nr - 1) ? fp[i] : fp[i + 1];  // one-sided at the outer edge
    double g_lo = (i == 0) ? g[0] : g[i - 1];
    double g_hi = (i == nr - 1) ? g[i] : g[i + 1];
    double den = (i == nr - 1) ? h : 2.0 * h;
    d.fpp[i] = (fp_hi - fp_lo) / den;
    d.gp[i] = (g_hi - g_lo) / den;
  }
  return d;
}

}  // namespace rwave
