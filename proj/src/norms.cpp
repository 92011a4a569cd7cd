#include "rwave/norms.hpp"

#include <cmath>
#include <vector>

namespace rwave {

namespace {

constexpr double kPi = 3.14159265358979323846;

// [u]_s values for row k, nodes [0, imax).  Second derivatives use centered
// differences of the stored first derivatives; u_r is odd and u_t even across
// the axis; time edges fall back to second-order one-sided stencils.
void bracket_row(const Field& a, int s, int k, int imax, double* out) {
  const Lattice& lat = a.lat();
  const double h = lat.h();
  const int nt = lat.nt();
  const double* u = a.u_row(k);
  const double* ur = a.ur_row(k);
  const double* ut = a.ut_row(k);
  if (s == 1) {
    for (int i = 0; i < imax; ++i) {
      double r = lat.r(i);
      out[i] = std::fabs(u[i]) + r * (std::fabs(ur[i]) + std::fabs(ut[i]));
    }
    return;
  }
  // s == 2: assemble one-sided/centered time stencils row-wise.
  const double* ur_m = (k > 0) ? a.ur_row(k - 1) : nullptr;
  const double* ur_p = (k < nt) ? a.ur_row(k + 1) : nullptr;
  const double* ut_m = (k > 0) ? a.ut_row(k - 1) : nullptr;
  const double* ut_p = (k < nt) ? a.ut_row(k + 1) : nullptr;
  const double* ur_2 = nullptr;  // second row for one-sided edges
  const double* ut_2 = nullptr;
  double tsign = 1.0;
  if (k == 0 && nt >= 2) {
    ur_2 = a.ur_row(2);
    ut_2 = a.ut_row(2);
  } else if (k == nt && nt >= 2) {
    ur_2 = a.ur_row(nt - 2);
    ut_2 = a.ut_row(nt - 2);
    tsign = -1.0;
  }
  for (int i = 0; i < imax; ++i) {
    double r = lat.r(i);
    // radial differences (u_r odd, u_t even across the axis; imax < nr so i+1 exists)
    double url = (i == 0) ? -ur[0] : ur[i - 1];
    double utl = (i == 0) ? ut[0] : ut[i - 1];
    double urr = (ur[i + 1] - url) / (2.0 * h);
    double dr_ut = (ut[i + 1] - utl) / (2.0 * h);
    // time differences
    double dt_ur, utt;
    if (ur_m && ur_p) {
      dt_ur = (ur_p[i] - ur_m[i]) / (2.0 * h);
      utt = (ut_p[i] - ut_m[i]) / (2.0 * h);
    } else if (ur_2) {
      const double* near = ur_p ? ur_p : ur_m;
      const double* near_t = ut_p ? ut_p : ut_m;
      dt_ur = tsign * (-3.0 * ur[i] + 4.0 * near[i] - ur_2[i]) / (2.0 * h);
      utt = tsign * (-3.0 * ut[i] + 4.0 * near_t[i] - ut_2[i]) / (2.0 * h);
    } else {  // nt == 1: first-order fallback on a two-row lattice
      const double* near = ur_p ? ur_p : ur_m;
      const double* near_t = ut_p ? ut_p : ut_m;
      dt_ur = tsign * (near[i] - ur[i]) / h;
      utt = tsign * (near_t[i] - ut[i]) / h;
    }
    double urt = 0.5 * (dt_ur + dr_ut);
    out[i] = std::fabs(u[i]) + (1.0 + r) * (std::fabs(ur[i]) + std::fabs(ut[i])) +
             r * (std::fabs(urr) + std::fabs(urt) + std::fabs(utt));
  }
}

void require_s(int s) {
  if (s != 1 && s != 2) throw InvalidArgument("bracket order s must be 1 or 2");
}

int row_of_time(const Lattice& lat, double t) {
  double k_real = t / lat.h();
  int k = static_cast<int>(std::llround(k_real));
  if (k < 0 || k > lat.nt() || std::fabs(k_real - k) > 1e-9 * (1.0 + std::fabs(k_real)))
    throw InvalidArgument("time does not lie on the lattice");
  return k;
}

}  // namespace

void validate_weights_for_L(const WeightParams& w) {
  if (w.s != 1 && w.s != 2) throw InvalidArgument("weight order s must be 1 or 2");
  if (!(w.alpha < 3.0 - w.s)) throw InvalidArgument("interior weight needs alpha < 3 - s");
  if (!(w.delta > 1.0)) throw InvalidArgument("interior weight needs delta > 1");
  if (!(w.gamma >= 0.0)) throw InvalidArgument("interior weight needs gamma >= 0");
}

void validate_weights_for_R(const WeightParams& w) {
  if (w.s != 1 && w.s != 2) throw InvalidArgument("weight order s must be 1 or 2");
  if (!(w.alpha < 3.0 - w.s)) throw InvalidArgument("tail weight needs alpha < 3 - s");
  if (!(w.delta > 1.0)) throw InvalidArgument("tail weight needs delta > 1");
  if (!(w.alpha + w.beta + w.gamma > 2.0))
    throw InvalidArgument("tail weight needs alpha + beta + gamma > 2");
}

double triple_norm_at(const DataPair& d, int j) {
  double r = d.lat.lambda(j);
  return std::fabs(d.f[j]) + (1.0 + r) * (std::fabs(d.fp[j]) + std::fabs(d.g[j])) +
         r * (std::fabs(d.fpp[j]) + std::fabs(d.gp[j]));
}

std::pair<bool, double> check_Y_membership(const DataPair& d, double nu, double eps) {
  double sup = 0.0;
  const int nl = d.lat.nl();
  for (int j = 0; j < nl; ++j) {
    double v = std::pow(1.0 + d.lat.lambda(j), nu) * triple_norm_at(d, j);
    if (v > sup) sup = v;
  }
  return {sup <= eps * (1.0 + 1e-12), sup};
}

double bracket_norm(const Field& u, int s, int i, int k) {
  require_s(s);
  const Lattice& lat = u.lat();
  if (i < 0 || i >= lat.nr() - 1 || k < 0 || k > lat.nt())
    throw InvalidArgument("bracket node outside the lattice");
  std::vector<double> row(i + 1);
  bracket_row(u, s, k, i + 1, row.data());
  return row[i];
}

double bracket_norm_at(const Field& u, int s, double r, double t) {
  const Lattice& lat = u.lat();
  double i_real = r / lat.h() - 0.5;
  int i = static_cast<int>(std::llround(i_real));
  if (std::fabs(i_real - i) > 1e-9 * (1.0 + std::fabs(i_real)))
    throw InvalidArgument("radius does not lie on the staggered lattice");
  return bracket_norm(u, s, i, row_of_time(lat, t));
}

double norm_X(const Field& u, int s, double nu) {
  require_s(s);
  const Lattice& lat = u.lat();
  const int imax = lat.nr_window();
  const int kmax = lat.nt_window();
  const double h = lat.h();
  // (1+|r-t|)^nu indexed by i-k (offset kmax).
  std::vector<double> dw(static_cast<size_t>(imax) + kmax);
  for (int x = 0; x < static_cast<int>(dw.size()); ++x)
    dw[x] = std::pow(1.0 + std::fabs((x - kmax + 0.5) * h), nu);
  std::vector<double> br(imax);
  const auto& ker = simd::ops();
  double best = 0.0;
  for (int k = 0; k <= kmax; ++k) {
    bracket_row(u, s, k, imax, br.data());
    double m = ker.max_abs_mul(br.data(), dw.data() + (kmax - k), imax);
    if (m > best) best = m;
  }
  return best;
}

double norm_Z(const Field& u, int s, double nu) {
  require_s(s);
  const Lattice& lat = u.lat();
  const int imax = lat.nr_window();
  const int kmax = lat.nt_window();
  const double h = lat.h();
  std::vector<double> dw(static_cast<size_t>(imax) + kmax);
  for (int x = 0; x < static_cast<int>(dw.size()); ++x)
    dw[x] = std::pow(1.0 + std::fabs((x - kmax + 0.5) * h), nu);
  std::vector<double> br(imax);
  double best = 0.0;
  const double e = 1.0 - nu;
  for (int k = 0; k <= kmax; ++k) {
    bracket_row(u, s, k, imax, br.data());
    const double* dwk = dw.data() + (kmax - k);
    for (int i = 0; i < imax; ++i) {
      // Z value = X value * ((1+|r-t|)/(1+r+t))^(1-nu); the factor's rounding
      // keeps it on the correct side of 1, making the X/Z embedding exact.
      double d = 1.0 + std::fabs((i - k + 0.5) * h);
      double ssum = 1.0 + (i + k + 0.5) * h;
      double xval = std::fabs(br[i]) * dwk[i];
      double zval = xval * std::pow(d / ssum, e);
      if (zval > best) best = zval;
    }
  }
  return best;
}

double energy_norm(const Field& u, double t) { return energy_norm_checked(u, t).value; }

EnergyCheck energy_norm_checked(const Field& u, double t) {
  const Lattice& lat = u.lat();
  const int k = row_of_time(lat, t);
  const int imax = lat.nr_window();
  std::vector<double> w(imax);
  for (int i = 0; i < imax; ++i) {
    double r = lat.r(i);
    w[i] = r * r;
  }
  double s = simd::ops().energy_row(u.ut_row(k), u.ur_row(k), w.data(), imax);
  EnergyCheck out;
  out.value = std::sqrt(2.0 * kPi * lat.h() * s);
  int e = imax - 1;
  out.edge_integrand =
      (u.ut(e, k) * u.ut(e, k) + u.ur(e, k) * u.ur(e, k)) * w[e];
  return out;
}

double weighted_sup_M(const SourceField& F, const WeightParams& w) {
  if (w.s != 1 && w.s != 2) throw InvalidArgument("weight order s must be 1 or 2");
  if (w.s == 2 && !F.has_fr())
    throw InvalidArgument("derivative-weighted functional needs a source with F_r");
  const Lattice& lat = F.lat;
  const int nr = lat.nr();
  const int nt = lat.nt();
  const double h = lat.h();
  std::vector<double> wr(nr), ws(static_cast<size_t>(nr) + nt), wd(static_cast<size_t>(nr) + nt);
  for (int i = 0; i < nr; ++i) {
    double r = lat.r(i);
    wr[i] = std::pow(r, w.alpha) * std::pow(1.0 + r, w.beta);
  }
  for (int x = 0; x < nr + nt; ++x) {
    ws[x] = std::pow(1.0 + (x + 0.5) * h, w.gamma);
    wd[x] = std::pow(1.0 + std::fabs((x - nt + 0.5) * h), w.delta);
  }
  const auto& ker = simd::ops();
  double m0 = 0.0;
  for (int k = 0; k <= nt; ++k) {
    double m = ker.max_abs_mul3(F.row(k), wr.data(), ws.data() + k, wd.data() + (nt - k), nr);
    if (m > m0) m0 = m;
  }
  if (w.s == 1) return m0;
  std::vector<double> wr1(nr);
  for (int i = 0; i < nr; ++i) {
    double r = lat.r(i);
    wr1[i] = std::pow(r, w.alpha + 1.0) * std::pow(1.0 + r, w.beta - 1.0);
  }
  double m1 = 0.0;
  for (int k = 0; k <= nt; ++k) {
    double m = ker.max_abs_mul3(F.fr_row(k), wr1.data(), ws.data() + k, wd.data() + (nt - k), nr);
    if (m > m1) m1 = m;
  }
  return m0 + m1;
}

}  // namespace rwave
