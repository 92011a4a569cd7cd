#include "rwave/waveops.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rwave/errors.hpp"
#include "rwave/kernels.hpp"

namespace rwave {

namespace {

// Trapezoid prefix of the odd-extended integrand: G[j] = lambda_j F[j],
// Q[j] = int_0^{lambda_j} lambda F dlambda (Q[0] covers [0, h/2]; the cell
// below the first node integrates the odd extension, which the staggered
// trapezoid rule represents as (h/2) * (G[-1] + G[0]) / 2 with G[-1] = -G[0],
// i.e. zero; so Q[0] = 0 and every later cell is a plain trapezoid).
void build_gq(const double* F, double h, int nr, double* G, double* Q) {
  for (int j = 0; j < nr; ++j) G[j] = (j + 0.5) * h * F[j];
  Q[0] = 0.0;
  const double hh = 0.5 * h;
  for (int j = 1; j < nr; ++j) Q[j] = Q[j - 1] + hh * (G[j - 1] + G[j]);
}

}  // namespace

Field apply_K(const DataPair& d) {
  const Lattice& lat = d.lat;
  const int nr = lat.nr(), nt = lat.nt(), nl = lat.nl();
  const double h = lat.h();

  // Prefix integral of lambda * g over the data extent.
  std::vector<double> Pg(nl);
  Pg[0] = 0.0;
  for (int j = 1; j < nl; ++j) {
    Pg[j] = Pg[j - 1] + 0.5 * h * ((j - 0.5) * h * d.g[j - 1] + (j + 0.5) * h * d.g[j]);
  }

  Field out(lat);
  for (int k = 0; k <= nt; ++k) {
    double* u = out.u_row(k);
    double* ur = out.ur_row(k);
    double* ut = out.ut_row(k);
    for (int i = 0; i < nr; ++i) {
      const int jp = i + k;       // outgoing characteristic index, < nl
      const int jm = i - k;       // incoming characteristic index (signed)
      const int jmr = jm >= 0 ? jm : ~jm;
      const double lp = (jp + 0.5) * h;
      const double lm = (jm + 0.5) * h;  // signed abscissa, = -lambda(jmr) if jm < 0
      // Even extension for f and g, odd for f'.
      const double f_p = d.f[jp];
      const double f_m = d.f[jmr];
      const double fp_p = d.fp[jp];
      const double fp_m = jm >= 0 ? d.fp[jmr] : -d.fp[jmr];
      const double g_p = d.g[jp];
      const double g_m = d.g[jmr];
      const double S = Pg[jp] - Pg[jmr];  // int_{|r-t|}^{r+t} lambda g, sign folded by evenness
      const double r = (i + 0.5) * h;
      const double inv2r = 1.0 / (2.0 * r);
      const double uval = (lp * f_p + lm * f_m + S) * inv2r;
      u[i] = uval;
      ut[i] = (f_p + lp * fp_p - f_m - lm * fp_m + lp * g_p + lm * g_m) * inv2r;
      ur[i] = (f_p + lp * fp_p + f_m + lm * fp_m + lp * g_p - lm * g_m) * inv2r - uval / r;
    }
  }
  return out;
}

Field apply_L(const SourceField& F) {
  const Lattice& lat = F.lat;
  const int nr = lat.nr(), nt = lat.nt();
  const double h = lat.h();
  const simd::Ops& ker = simd::ops();

  Field out(lat);

  std::vector<double> G(nr), Q(nr);
  // Diagonal accumulators.  Logical coordinates: c = i + k in [0, nr + nt),
  // e = i - k in [-nt, nr) stored at y = e + nt.
  //   SQp[c] = sum over processed rows m of Qext_m(c - m)
  //   SQm[y] = sum over processed rows m of Qext_m(e + m)
  //   DP, DM hold the same sums of the odd extension Ghat instead of Qext.
  // Qext reflects without sign below zero (Q is even) and clamps at the last
  // stored value (integrand is zero beyond the stored radius); Ghat is odd and
  // zero beyond the stored radius.
  const int nd = nr + nt;
  std::vector<double> SQp(nd, 0.0), SQm(nd, 0.0), DP(nd, 0.0), DM(nd, 0.0);

  // Row-0 tables for the half-weight trapezoid endpoint, extended to every
  // argument the assembly can request: x = j + nt with j in [-nt, nr + nt).
  std::vector<double> Q0E(nr + 2 * nt), G0E(nr + 2 * nt);
  build_gq(F.row(0), h, nr, G.data(), Q.data());
  for (int x = 0; x < nr + 2 * nt; ++x) {
    const int j = x - nt;
    Q0E[x] = j >= 0 ? Q[std::min(j, nr - 1)] : Q[~j];
    G0E[x] = j >= 0 ? (j < nr ? G[j] : 0.0) : -G[~j];
  }

  for (int k = 0; k <= nt; ++k) {
    if (k > 0) build_gq(F.row(k), h, nr, G.data(), Q.data());
    const double qlast = Q[nr - 1];

    // Fold row k into the diagonal tables (trapezoid interior weight 1; the
    // endpoint rows get their -1/2 correction at assembly time).
    // SQp[c] += Qext_k(c - k): reflected for c < k, clamped for c >= k + nr.
    ker.add_rev(SQp.data(), Q.data() + (k - 1), k);
    ker.add(SQp.data() + k, Q.data(), nr);
    ker.add_const(SQp.data() + k + nr, qlast, nt - k);
    // SQm[y] += Qext_k(y - nt + k).
    ker.add_rev(SQm.data(), Q.data() + (nt - k - 1), nt - k);
    ker.add(SQm.data() + (nt - k), Q.data(), nr);
    ker.add_const(SQm.data() + (nt - k) + nr, qlast, k);
    // DP[c] += Ghat_k(c - k); DM[y] += Ghat_k(y - nt + k) (odd, no clamp).
    ker.sub_rev(DP.data(), G.data() + (k - 1), k);
    ker.add(DP.data() + k, G.data(), nr);
    ker.sub_rev(DM.data(), G.data() + (nt - k - 1), nt - k);
    ker.add(DM.data() + (nt - k), G.data(), nr);

    // Assemble row k.  Row 0 comes out exactly zero: the tables then hold only
    // the row-0 contribution, which the endpoint correction cancels term by term.
    double* u = out.u_row(k);
    double* ur = out.ur_row(k);
    double* ut = out.ut_row(k);
    for (int i = 0; i < nr; ++i) {
      const int xp = i + k;
      const int xm = i - k + nt;
      const double r = (i + 0.5) * h;
      const double w = h / (2.0 * r);
      const double val =
          (SQp[xp] - SQm[xm] - 0.5 * (Q0E[xp + nt] - Q0E[xm])) * w;
      const double A = DP[xp] - 0.5 * G0E[xp + nt] - 0.5 * G[i];
      const double B = DM[xm] - 0.5 * G0E[xm] - 0.5 * G[i];
      u[i] = val;
      ut[i] = (A + B) * w;
      ur[i] = (A - B) * w - val / r;
    }
  }
  return out;
}

Field apply_R(const SourceField& F, const TruncationPolicy& pol) {
  const Lattice& lat = F.lat;
  const int nr = lat.nr(), nt = lat.nt();
  const double h = lat.h();
  const simd::Ops& ker = simd::ops();

  int kinf;
  if (pol.t_infinity < 0) {
    kinf = nt;
  } else {
    kinf = static_cast<int>(std::min<long long>(nt, std::llround(pol.t_infinity / h)));
    if (kinf < 0) kinf = 0;
  }

  if (pol.weight_hint) {
    const double tail = estimate_R_tail(F, *pol.weight_hint, kinf * h);
    if (!(tail <= pol.tail_tol)) {
      throw TailTooFat("backward-integral tail beyond t = " + std::to_string(kinf * h) +
                       " bounded by " + std::to_string(tail) + " > tolerance " +
                       std::to_string(pol.tail_tol));
    }
  }

  Field out(lat);  // rows k > kinf stay zero

  std::vector<double> G(nr), Q(nr);
  // One diagonal family: the inner integral at row m for output (i, k) is
  // Qext_m(m + c1) - Qext_m(m + c2) with c1 = i - k and c2 = -(i + k) - 1,
  // both constant along the sweep.  Store c at x = c + (nr + nt):
  //   SR[x] = sum over processed rows m of Qext_m(m + c), DR likewise of Ghat.
  const int OFF = nr + nt;
  const int W = 2 * nr + nt;  // c in [-(nr + nt), nr)
  std::vector<double> SR(W, 0.0), DR(W, 0.0);

  // Horizon-row tables for the endpoint correction.
  std::vector<double> QIE(W), GIE(W);
  build_gq(F.row(kinf), h, nr, G.data(), Q.data());
  {
    const int base = OFF - kinf;  // x where the logical index j = kinf + c hits 0
    for (int x = 0; x < W; ++x) {
      const int j = x - base;
      if (j >= 0) {
        QIE[x] = Q[std::min(j, nr - 1)];
        GIE[x] = j < nr ? G[j] : 0.0;
      } else {
        const int jr = ~j;
        QIE[x] = Q[std::min(jr, nr - 1)];
        GIE[x] = jr < nr ? -G[jr] : 0.0;
      }
    }
  }

  for (int k = kinf; k >= 0; --k) {
    if (k != kinf) build_gq(F.row(k), h, nr, G.data(), Q.data());
    const double qlast = Q[nr - 1];
    const int base = OFF - k;  // logical j = k + (x - OFF) = x - base

    // SR[x] += Qext_k(x - base): reflected+clamped, reflected, direct, clamped.
    ker.add_const(SR.data(), qlast, nt - k);
    ker.add_rev(SR.data() + (nt - k), Q.data() + (nr - 1), nr);
    ker.add(SR.data() + base, Q.data(), nr);
    ker.add_const(SR.data() + base + nr, qlast, k);
    // DR[x] += Ghat_k(x - base): odd and compactly supported, so only the two
    // middle segments contribute.
    ker.sub_rev(DR.data() + (nt - k), G.data() + (nr - 1), nr);
    ker.add(DR.data() + base, G.data(), nr);

    double* u = out.u_row(k);
    double* ur = out.ur_row(k);
    double* ut = out.ut_row(k);
    for (int i = 0; i < nr; ++i) {
      const int x1 = (i - k) + OFF;
      const int x2 = OFF - 1 - (i + k);
      const double r = (i + 0.5) * h;
      const double w = h / (2.0 * r);
      const double val = (SR[x1] - SR[x2] - 0.5 * (QIE[x1] - QIE[x2])) * w;
      const double A = DR[x1] - 0.5 * G[i] - 0.5 * GIE[x1];
      const double B = DR[x2] + 0.5 * G[i] - 0.5 * GIE[x2];
      u[i] = val;
      ut[i] = (B - A) * w;
      ur[i] = (A + B) * w - val / r;
    }
  }
  return out;
}

namespace {

// d_r of the stored time-derivative row: centered with even reflection at the
// axis, one-sided at the outer edge.
inline double dr_ut_at(const double* ut, int i, int nr, double inv2h, double invh) {
  if (i == 0) return (ut[1] - ut[0]) * inv2h;  // even reflection: ut[-1] = ut[0]
  if (i == nr - 1) return (ut[i] - ut[i - 1]) * invh;
  return (ut[i + 1] - ut[i - 1]) * inv2h;
}

inline double power_term(double v, double e) { return std::pow(std::fabs(v), e); }

inline double power_deriv_factor(double v, double e) {
  // d/dv |v|^e = e |v|^(e-1) sign(v); exactly zero at v = 0 (e > 1).
  if (v == 0.0) return 0.0;
  const double mag = e * std::pow(std::fabs(v), e - 1.0);
  return v > 0.0 ? mag : -mag;
}

}  // namespace

SourceField nonlinearity(const Field& v, double exponent) {
  if (!(exponent > 1.0)) throw InvalidArgument("nonlinearity exponent must exceed 1");
  const Lattice& lat = v.lat();
  const int nr = lat.nr(), nt = lat.nt();
  const double inv2h = 1.0 / (2.0 * lat.h()), invh = 1.0 / lat.h();
  SourceField out(lat, /*with_fr=*/true);
  for (int k = 0; k <= nt; ++k) {
    const double* ut = v.ut_row(k);
    double* f = out.row(k);
    double* fr = out.fr_row(k);
    for (int i = 0; i < nr; ++i) {
      f[i] = power_term(ut[i], exponent);
      fr[i] = power_deriv_factor(ut[i], exponent) * dr_ut_at(ut, i, nr, inv2h, invh);
    }
  }
  return out;
}

SourceField difference_source(const Field& a, const Field& b, double exponent) {
  if (!(exponent > 1.0)) throw InvalidArgument("difference_source exponent must exceed 1");
  if (!a.lat().same_geometry(b.lat())) throw InvalidArgument("difference_source: geometry mismatch");
  const Lattice& lat = a.lat();
  const int nr = lat.nr(), nt = lat.nt();
  const double inv2h = 1.0 / (2.0 * lat.h()), invh = 1.0 / lat.h();
  SourceField out(lat, /*with_fr=*/true);
  for (int k = 0; k <= nt; ++k) {
    const double* at = a.ut_row(k);
    const double* bt = b.ut_row(k);
    double* f = out.row(k);
    double* fr = out.fr_row(k);
    for (int i = 0; i < nr; ++i) {
      // Same expressions as nonlinearity(), subtracted pointwise, so that
      // sums of difference sources telescope bitwise.
      f[i] = power_term(at[i], exponent) - power_term(bt[i], exponent);
      fr[i] = power_deriv_factor(at[i], exponent) * dr_ut_at(at, i, nr, inv2h, invh) -
              power_deriv_factor(bt[i], exponent) * dr_ut_at(bt, i, nr, inv2h, invh);
    }
  }
  return out;
}

Field pde_residual(const Field& u, const SourceField& F) {
  if (!u.lat().same_geometry(F.lat)) throw InvalidArgument("pde_residual: geometry mismatch");
  const Lattice& lat = u.lat();
  const int nr = lat.nr(), nt = lat.nt();
  const double h = lat.h();
  const double invh2 = 1.0 / (h * h), inv2h = 1.0 / (2.0 * h);

  Field res(lat);
  for (int k = 1; k < nt; ++k) {
    const double* um = u.u_row(k - 1);
    const double* uc = u.u_row(k);
    const double* up = u.u_row(k + 1);
    const double* f = F.row(k);
    double* r = res.u_row(k);
    for (int i = 0; i + 1 < nr; ++i) {
      const double r_i = (i + 0.5) * h;
      const double ul = i == 0 ? uc[0] : uc[i - 1];  // even reflection at the axis
      const double utt = (up[i] - 2.0 * uc[i] + um[i]) * invh2;
      const double urr = (uc[i + 1] - 2.0 * uc[i] + ul) * invh2;
      const double ur1 = (uc[i + 1] - ul) * inv2h;
      r[i] = utt - urr - (2.0 / r_i) * ur1 - f[i];
    }
  }
  return res;
}

ResidualStats residual_stats(const Field& residual, int margin) {
  const Lattice& lat = residual.lat();
  ResidualStats st;
  const int klo = std::max(1, margin);
  const int khi = std::min(lat.nt_window(), lat.nt() - 1) - std::max(0, margin - 1);
  const int ihi = lat.nr_window() - 1 - margin;
  for (int k = klo; k <= khi; ++k) {
    const double* r = residual.u_row(k);
    for (int i = margin; i <= ihi; ++i) {
      const double a = std::fabs(r[i]);
      if (a > st.max_abs) {
        st.max_abs = a;
        st.i = i;
        st.k = k;
      }
    }
  }
  return st;
}

double estimate_R_tail(const SourceField& F, const WeightParams& w, double t_infinity) {
  validate_weights_for_R(w);
  WeightParams w0 = w;
  w0.s = 1;  // the tail bound only needs the value envelope
  const double M = weighted_sup_M(F, w0);
  if (M == 0.0) return 0.0;

  const Lattice& lat = F.lat;
  const double T = std::max(t_infinity, 0.0);

  // envelope(lambda, s) >= |lambda F| / M on the support.
  const auto env = [&](double lam, double s) {
    if (lam <= 0.0) return 0.0;
    return std::pow(lam, 1.0 - w.alpha) * std::pow(1.0 + lam, -w.beta) *
           std::pow(1.0 + lam + s, -w.gamma) * std::pow(1.0 + std::fabs(lam - s), -w.delta);
  };

  // Inner integral over the cone cross-section at time s for a point (r, t):
  // lambda in [s - t - r, s - t + r], with the part below 0 reflected (the
  // integrand is even in lambda after extension, and env already majorizes it).
  const auto inner = [&](double r, double t, double s) {
    const double c = s - t;
    double total = 0.0;
    const int m = 64;
    {
      const double lo = std::max(0.0, c - r), hi = c + r;
      const double dl = (hi - lo) / m;
      double acc = 0.0;
      for (int j = 0; j < m; ++j) acc += env(lo + (j + 0.5) * dl, s);
      total += acc * dl;
    }
    if (c < r) {  // reflected lobe lambda in [0, r - c]
      const double hi = r - c;
      const double dl = hi / m;
      double acc = 0.0;
      for (int j = 0; j < m; ++j) acc += env((j + 0.5) * dl, s);
      total += acc * dl;
    }
    return total;
  };

  // Outer integral over s in (T, infinity) via s = T + x / (1 - x).
  const auto tail_at = [&](double r, double t) {
    const int m = 128;
    const double dx = 1.0 / m;
    double acc = 0.0;
    for (int j = 0; j < m; ++j) {
      const double x = (j + 0.5) * dx;
      const double om = 1.0 - x;
      const double s = T + x / om;
      acc += inner(r, t, s) / (om * om);
    }
    return acc * dx / (2.0 * r);
  };

  const double rmax = lat.spec().r_max, tmax = lat.spec().t_max;
  const double r0 = 0.5 * lat.h();
  const double rs[] = {r0, 0.25 * rmax, 0.5 * rmax, rmax - r0};
  const double ts[] = {0.0, 0.5 * tmax, tmax};
  double worst = 0.0;
  for (double r : rs) {
    for (double t : ts) worst = std::max(worst, tail_at(std::max(r, r0), std::min(t, T)));
  }
  return M * worst;
}

WeightParams power_source_class(double e, double kappa) {
  WeightParams w;
  w.s = 1;
  w.alpha = 0.0;
  w.beta = e;
  if (kappa >= 1.0) {
    w.gamma = 0.0;
    w.delta = e * kappa;
  } else {
    w.gamma = e * (kappa - 1.0);  // absorbs the (1+r+t)^(1-kappa) growth
    w.delta = e;
  }
  return w;
}

WeightParams difference_source_class(double p, double kappa2, double a_top) {
  WeightParams w;
  w.s = 1;
  w.alpha = 0.0;
  w.beta = p;
  w.gamma = a_top - 1.0;
  w.delta = 1.0 + (p - 1.0) * kappa2;
  return w;
}

TruncationPolicy with_tail_class(const TruncationPolicy& base, const WeightParams& cls) {
  TruncationPolicy pol = base;
  pol.weight_hint.reset();
  if (base.check_tails) pol.weight_hint = cls;
  return pol;
}

}  // namespace rwave
