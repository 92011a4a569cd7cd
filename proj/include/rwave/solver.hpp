// Picard fixed-point solves of the three integral systems:
//
//   final value, direct (p > 2):   u1 = w_0 + R(|d_t u2|^p),
//                                  u2 = v_0 + R(|d_t u1|^q)
//   final value, generalized:      u1 = w_{ell+1} + R(|d_t u2|^p - |d_t v_ell|^p),
//                                  u2 = v_{ell+1} + R(|d_t u1|^q - |d_t w_{ell+1}|^q)
//   initial value:                 u1 = K[phi1] + L(|d_t u2|^p),
//                                  u2 = K[phi2] + L(|d_t u1|^q)
//
// Each iterates x -> T(x) from the anchor pair, in the regime's weighted
// metric, recording distances and contraction ratios.  Convergence is
// successive-iterate distance <= tol; divergence (two consecutive ratios
// above 0.9, or a non-finite distance) raises NoContraction, and an iterate
// drifting to more than 10x the nominal ball radius raises LeftDomain.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rwave/field.hpp"
#include "rwave/ladder.hpp"
#include "rwave/params.hpp"
#include "rwave/profiles.hpp"
#include "rwave/waveops.hpp"

namespace rwave {

enum class MetricKind { ShortRange, LongRange, PEqualsTwo };

struct MetricSpec {
  MetricKind kind = MetricKind::ShortRange;
  double nu1 = 0.0;  // weight order for component 1
  double nu2 = 0.0;  // weight order for component 2
  double pm1 = 0.0;  // exponent of the first-order terms (LongRange only)
  double radius = 0.0;  // nominal ball radius around the anchor (0 = unchecked)
  // Initial-value solves measure in the norms of the solution class instead of
  // the contraction ball's Z-norms: X for component 2, and for component 1
  // X when kappa1 > 1, Z otherwise.
  bool x1 = false, x2 = false;

  static MetricSpec short_range(const KappaPair& k, double eps);
  static MetricSpec long_range(const ExponentLadder& lp, double eps);
  static MetricSpec p_equals_two(const ExponentLadder& lp, double eps);
  static MetricSpec ivp(Regime regime, const KappaPair& k);
};

// Regime metric between sampled pairs (a1, a2) and (b1, b2):
//   ShortRange:  Z2(k1) + Z2(k2) of the differences
//   LongRange:   [Z2(nu1) + Z1(nu1)^(p-1)] + [Z2(nu2) + Z1(nu2)^(p-1)]
//   PEqualsTwo:  Z2(k2) + Z2(k2)
double metric_d(const Field& a1, const Field& a2, const Field& b1, const Field& b2,
                const MetricSpec& m);

struct IterationTrace {
  struct Row {
    int iter = 0;
    double distance = 0.0;         // metric to the previous iterate
    double anchor_distance = 0.0;  // metric to the anchor pair
    double ratio = 0.0;            // distance / previous distance (0 on iter 1)
  };
  std::vector<Row> rows;
  enum class Termination { converged, max_iters, diverged } termination = Termination::converged;
  double defect = 0.0;  // metric(T(x*), x*) after convergence
  int iterations() const { return static_cast<int>(rows.size()); }
};

struct SolverOptions {
  double tol = 1e-8;
  int max_iters = 50;
  double ratio_bound = 0.5;  // certificate threshold recorded in traces
};

struct SolveResult {
  Field u1, u2;          // the fixed point
  Field anchor1, anchor2;  // the pair the iteration started from
  IterationTrace trace;
  MetricSpec metric;
};

SolveResult solve_fvp_short(const DataPair& f1, const DataPair& f2, const Exponents& e,
                            const TruncationPolicy& trunc, const SolverOptions& opts);

SolveResult solve_fvp_long(const Ladder& lad, const TruncationPolicy& trunc,
                           const SolverOptions& opts);

SolveResult solve_ivp(const DataPair& phi1, const DataPair& phi2, const Exponents& e,
                      const SolverOptions& opts);

enum class ProbeProblem { FvpShort, FvpLong, Ivp };

struct ProbeOutcome {
  double eps = 0.0;
  bool converged = false;
  bool certified = false;  // converged with every post-first ratio <= ratio_bound
};

struct ProbeResult {
  double eps0 = 0.0;         // largest certified amplitude (0 if none)
  bool any = false;          // whether any probed amplitude was certified
  bool unconstrained = false;  // zero data: every amplitude trivially contracts
  bool anomaly = false;      // a smaller amplitude failed after a larger succeeded
  std::vector<ProbeOutcome> outcomes;
};

// Runs the chosen solve over a descending amplitude list with profile data
// built fresh at each amplitude, and reports the largest amplitude whose run
// is certified (all post-first contraction ratios <= opts.ratio_bound).
ProbeResult contraction_probe(ProbeProblem problem, const Exponents& e, ProfileFamily fam1,
                              ProfileFamily fam2, const std::vector<double>& eps_grid,
                              const GridSpec& grid, double horizon,
                              const TruncationPolicy& trunc, const SolverOptions& opts);

}  // namespace rwave
