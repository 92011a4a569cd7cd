// Exponent classification and the iteration exponent ladder.
//
// The system couples two radial waves through power nonlinearities |∂_t u|^p and
// |∂_t u|^q with 1 < p <= q.  Which construction applies is decided entirely by
// (p, q):
//
//   ShortRange          p > 2                 kappa = (p-1, q-1)
//   LongRangeSimple     1 < p < 2             kappa = (p-1, q(p-1)-1), k1*k2 > 1
//   LongRangeIterated   1 < p < 2             same kappa, k1*k2 <= 1 but
//                                             (p-1)^2 (q-1) > 1
//   PEqualsTwo          p = 2, q > 2          kappa = ((q+2)/(2q), q/2) by default,
//                                             overridable with q*k1 = k2 + 1,
//                                             0 < k1 < 1 < k2 < q-1
//
// Rejections: q(p-1) <= 2 is SubcriticalExponents (no small-data construction at
// any rate); 1 < p < 2 with (p-1)^2 (q-1) <= 1 is ConditionViolated (the iterated
// ladder cannot reach a summable rate).  Boundary comparisons are exact.
//
// The ladder a_0 = 1, a_{j+1} = k1 (a_j - 1) + k2 climbs until a_{l+1} > 1/k1;
// l is the number of correction passes the long-range construction needs.  When
// k1 * a_l lands on 1 (within 1e-12) the borderline member is nudged down by
// delta so the weighted estimates keep a strict margin; `a_effective` exposes the
// nudged values, `a_raw` the recurrence values.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rwave/errors.hpp"

namespace rwave {

enum class Regime { ShortRange, LongRangeSimple, LongRangeIterated, PEqualsTwo };

const char* regime_name(Regime r);

struct Exponents {
  double p = 3.0;
  double q = 3.0;
  // Optional kappa overrides, honored only when p == 2.
  std::optional<double> kappa1;
  std::optional<double> kappa2;
};

// Throws SubcriticalExponents / ConditionViolated / InvalidArgument on rejection.
Regime classify_exponents(double p, double q);

struct KappaPair {
  double k1 = 0.0;
  double k2 = 0.0;
};

// Regime-appropriate decay pair, with p = 2 override validation.
KappaPair kappa_pair(const Exponents& e);

struct ExponentLadder {
  double p = 0.0, q = 0.0;
  Regime regime = Regime::LongRangeSimple;
  KappaPair kappa;
  int ell = 0;          // a_ell <= 1/k1 < a_{ell+1}; -1 for ShortRange (trivial ladder)
  bool degenerate = false;
  double delta = 0.0;   // nudge applied to a_ell when degenerate, else 0
  std::vector<double> a;      // raw recurrence values a_0 .. a_{ell+2}
  std::vector<double> a_eff;  // raw values with a_ell, a_{ell+1} nudged when degenerate

  double a_raw(int j) const;
  double a_effective(int j) const;
  // Closed form of the recurrence: (k2-k1)/(1-k1) - (k2-1)/(1-k1) * k1^j.
  double closed_form(int j) const;
  // Growth bookkeeping for the source powers: b_k = q + k (p + q - 2), and the
  // resulting amplitude exponent B_k = 1 + (p-1) b_k (with B_{-1} = 1).
  double b(int k) const;
  double B(int k) const;
};

// For long-range and p = 2 pairs this climbs the recurrence; for ShortRange it
// returns the trivial ladder (ell = -1, a = {1}), since no correction passes
// are needed there.
ExponentLadder build_exponent_ladder(const Exponents& e);

}  // namespace rwave
