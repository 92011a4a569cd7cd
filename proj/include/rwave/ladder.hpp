// Iterated final-state ladders.
//
// Forward ladder from final data (f1, f2):
//   w_0 = K[f1],  v_0 = K[f2],
//   w_1 = w_0 + L(|d_t v_0|^p),            v_1 = v_0 + R(|d_t w_1|^q),
//   w_{j+1} = w_j + L(|d_t v_j|^p - |d_t v_{j-1}|^p),
//   v_{j+1} = v_j + R(|d_t w_{j+1}|^q - |d_t w_j|^q)      for 1 <= j <= ell.
// The ladder stops at depth ell+1 (from the exponent recurrence); w_{ell+1}
// is the corrected final state the long-range solve anchors on.  Built with
// difference sources so consecutive steps telescope:
// w_{j+1} = w_0 + L(|d_t v_j|^p) up to floating-point linearity of L.
//
// Inverse-side ladder from a solved forward pair (u1, u2):
//   w*_0 = K[phi1],  v*_0 = u2 - R(|d_t u1|^q),
//   w*_j = w*_0 + L(|d_t v*_{j-1}|^p),  v*_j = v*_0 + R(|d_t w*_j|^q),
//   w*   = u1 - R(|d_t u2|^p - |d_t v*_ell|^p),
// whose t = 0 traces are the final data recovered from initial data.
#pragma once

#include <string>
#include <vector>

#include "rwave/field.hpp"
#include "rwave/params.hpp"
#include "rwave/waveops.hpp"

namespace rwave {

struct LadderNormRow {
  int j = 0;                    // member or step index
  std::string name;             // which norm, e.g. "dw_Z2(k1)"
  double value = 0.0;
  double expected_eps_power = 0.0;  // small-amplitude scaling exponent of this row
};

struct Ladder {
  std::vector<Field> w;  // w_0 .. w_{ell+1} (just w_0 for ShortRange)
  std::vector<Field> v;
  ExponentLadder params;
  double eps = 0.0;  // amplitude class the input data were checked against
  std::vector<LadderNormRow> norm_report;

  int depth() const { return static_cast<int>(w.size()) - 1; }
  const Field& w_top() const { return w.back(); }
  const Field& v_top() const { return v.back(); }
};

// Forward ladder.  Checks f1 in Y_{k1}(f1.eps), f2 in Y_{k2}(f2.eps); for the
// ShortRange regime returns just (w_0, v_0).
Ladder build_final_ladder(const DataPair& f1, const DataPair& f2, const ExponentLadder& lp,
                          const TruncationPolicy& trunc);

struct InverseLadder {
  Field w_star;   // final state for component 1 (t = 0 trace gives f1)
  Field v0_star;  // homogeneous part of component 2 (t = 0 trace gives f2)
  std::vector<Field> w;  // w*_0 .. w*_ell
  std::vector<Field> v;  // v*_0 .. v*_ell
};

// Inverse-side ladder from a solved initial-value pair.
InverseLadder build_inverse_ladder(const Field& u1, const Field& u2, const DataPair& phi1,
                                   const ExponentLadder& lp, const TruncationPolicy& trunc);

struct LadderScalingRow {
  int j = 0;
  std::string name;
  double value_eps = 0.0;   // norm value from the run at amplitude eps
  double value_half = 0.0;  // norm value from the run at eps/2
  double observed_power = 0.0;  // log2(value_eps / value_half)
  double expected_power = 0.0;
  bool measurable = false;
};

// Pairs up the norm reports of two ladders built at amplitudes eps and eps/2
// and forms the observed log2 scaling exponents.
std::vector<LadderScalingRow> ladder_scaling_report(const Ladder& at_eps, const Ladder& at_half);

}  // namespace rwave
