#include "rwave/params.hpp"

#include <cmath>
#include <sstream>

namespace rwave {

namespace {

std::string pq_str(double p, double q) {
  std::ostringstream os;
  os << "(p, q) = (" << p << ", " << q << ")";
  return os.str();
}

constexpr double kDegenerateTol = 1e-12;

}  // namespace

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::ShortRange: return "short_range";
    case Regime::LongRangeSimple: return "long_range_simple";
    case Regime::LongRangeIterated: return "long_range_iterated";
    case Regime::PEqualsTwo: return "p_equals_two";
  }
  return "unknown";
}

Regime classify_exponents(double p, double q) {
  if (!std::isfinite(p) || !std::isfinite(q))
    throw InvalidArgument("exponents must be finite, got " + pq_str(p, q));
  if (!(p > 1.0) || !(q >= p))
    throw InvalidArgument("require 1 < p <= q, got " + pq_str(p, q));
  if (q * (p - 1.0) <= 2.0)
    throw SubcriticalExponents("q (p - 1) <= 2 admits no small-data construction, got " +
                               pq_str(p, q));
  if (p > 2.0) return Regime::ShortRange;
  if (p == 2.0) return Regime::PEqualsTwo;
  // 1 < p < 2 from here on.
  if ((p - 1.0) * (p - 1.0) * (q - 1.0) <= 1.0)
    throw ConditionViolated("(p - 1)^2 (q - 1) <= 1: iterated construction unavailable for " +
                            pq_str(p, q));
  double k1 = p - 1.0;
  double k2 = q * (p - 1.0) - 1.0;
  return (k1 * k2 > 1.0) ? Regime::LongRangeSimple : Regime::LongRangeIterated;
}

KappaPair kappa_pair(const Exponents& e) {
  Regime r = classify_exponents(e.p, e.q);
  if (r != Regime::PEqualsTwo && (e.kappa1 || e.kappa2))
    throw InvalidArgument("kappa overrides are only meaningful for p = 2");
  KappaPair k;
  switch (r) {
    case Regime::ShortRange:
      k.k1 = e.p - 1.0;
      k.k2 = e.q - 1.0;
      break;
    case Regime::LongRangeSimple:
    case Regime::LongRangeIterated:
      k.k1 = e.p - 1.0;
      k.k2 = e.q * (e.p - 1.0) - 1.0;
      break;
    case Regime::PEqualsTwo: {
      // Defaults satisfy q k1 = k2 + 1 with k1 < 1 < k2 < q - 1 for every q > 2.
      k.k1 = (e.q + 2.0) / (2.0 * e.q);
      k.k2 = e.q / 2.0;
      if (e.kappa1 && e.kappa2) {
        k.k1 = *e.kappa1;
        k.k2 = *e.kappa2;
      } else if (e.kappa1) {
        k.k1 = *e.kappa1;
        k.k2 = e.q * k.k1 - 1.0;
      } else if (e.kappa2) {
        k.k2 = *e.kappa2;
        k.k1 = (k.k2 + 1.0) / e.q;
      }
      if (std::fabs(e.q * k.k1 - (k.k2 + 1.0)) > kDegenerateTol * (1.0 + k.k2))
        throw InvalidArgument("kappa overrides must satisfy q kappa1 = kappa2 + 1");
      if (!(k.k1 > 0.0 && k.k1 < 1.0 && k.k2 > 1.0 && k.k2 < e.q - 1.0))
        throw InvalidArgument("kappa overrides must satisfy 0 < kappa1 < 1 < kappa2 < q - 1");
      break;
    }
  }
  return k;
}

double ExponentLadder::a_raw(int j) const { return a.at(static_cast<size_t>(j)); }
double ExponentLadder::a_effective(int j) const { return a_eff.at(static_cast<size_t>(j)); }

double ExponentLadder::closed_form(int j) const {
  double k1 = kappa.k1, k2 = kappa.k2;
  return (k2 - k1) / (1.0 - k1) - (k2 - 1.0) / (1.0 - k1) * std::pow(k1, j);
}

double ExponentLadder::b(int k) const { return q + k * (p + q - 2.0); }
double ExponentLadder::B(int k) const { return k < 0 ? 1.0 : 1.0 + (p - 1.0) * b(k); }

ExponentLadder build_exponent_ladder(const Exponents& e) {
  ExponentLadder lad;
  lad.p = e.p;
  lad.q = e.q;
  lad.regime = classify_exponents(e.p, e.q);
  lad.kappa = kappa_pair(e);
  if (lad.regime == Regime::ShortRange) {
    // No correction passes: the direct construction works and the ladder is
    // trivial.  ell = -1 so that B(ell) = B(-1) = 1 and no a_j beyond a_0 exists.
    lad.ell = -1;
    lad.a = {1.0};
    lad.a_eff = {1.0};
    return lad;
  }

  const double k1 = lad.kappa.k1, k2 = lad.kappa.k2;
  // Climb until a_m * k1 > 1 strictly; l is the previous index.  The product
  // condition guarantees the limit (k2 - k1) / (1 - k1) clears 1/k1, so this
  // terminates; the cap is purely defensive.
  std::vector<double> a{1.0};
  int m = 0;
  while (!(a.back() * k1 > 1.0)) {
    a.push_back(k1 * (a.back() - 1.0) + k2);
    if (++m > 10000)
      throw LadderDiverged("exponent ladder failed to terminate within 10000 steps for " +
                           pq_str(e.p, e.q));
  }
  lad.ell = m - 1;
  while (static_cast<int>(a.size()) < lad.ell + 3)
    a.push_back(k1 * (a.back() - 1.0) + k2);
  lad.a = a;
  lad.a_eff = a;

  if (std::fabs(k1 * a[lad.ell] - 1.0) <= kDegenerateTol) {
    // Borderline member: a_ell sits exactly on 1/k1 (possible only for ell >= 1,
    // since a_0 = 1 = 1/k1 would need k1 = 1).  Nudge it down by delta, chosen to
    // keep a_{ell-1} < a'_ell and k1 * a'_{ell+1} > 1 with strict margins.
    lad.degenerate = true;
    double gap_below = a[lad.ell] - a[lad.ell - 1];
    double gap_above = (k1 * a[lad.ell + 1] - 1.0) / (k1 * k1);
    lad.delta = 0.5 * std::min(gap_below, gap_above);
    lad.a_eff[lad.ell] = a[lad.ell] - lad.delta;
    lad.a_eff[lad.ell + 1] = a[lad.ell + 1] - k1 * lad.delta;
  }
  return lad;
}

}  // namespace rwave
