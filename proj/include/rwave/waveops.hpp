// The three lightcone integral operators and their source builders.
//
//   apply_K: free radial propagator from data (f, g),
//            u = [(r+t) f(r+t) + (r-t) f(r-t)] / (2r) + (1/2r) int_{r-t}^{r+t} s g(s) ds.
//   apply_L: forward Duhamel integral over the backward cone from t = 0,
//            L(F) = (1/2r) int_0^t ds int_{r-(t-s)}^{r+(t-s)} s F(s',s) ds'.
//   apply_R: backward integral from the time horizon,
//            R(F) = (1/2r) int_t^{T} ds int_{(s-t)-r}^{(s-t)+r} s F(s',s) ds'.
//
// All three evaluate the signed integrand (lambda F is odd in lambda under the
// even extension of F), so negative integration limits need no case split, and
// u_t, u_r come from analytically differentiated kernels (Leibniz rule along
// the moving limits), not from differencing the output.
//
// Discretization: composite trapezoid in both cone coordinates.  Because the
// staggered lattice aligns characteristics with nodes, the inner integrals are
// evaluated from per-row prefix sums and the s-integration accumulates along
// +/- characteristic diagonals, giving O(rows x columns) total work per
// operator application.  Degree-1 integrands are integrated exactly, which is
// what the closed-form operator identities in the tests rely on.
#pragma once

#include <optional>

#include "rwave/field.hpp"
#include "rwave/norms.hpp"

namespace rwave {

struct TruncationPolicy {
  // Upper time limit of the backward integral; < 0 means the lattice horizon.
  // (Lattices are built with horizon = max(t_max, t_infinity), so a policy's
  // t_infinity is normally the lattice horizon itself.)
  double t_infinity = -1.0;
  double tail_tol = 1e-8;
  // When set, apply_R bounds the neglected tail beyond t_infinity using the
  // weight decay of F (weighted_sup_M with these exponents) and throws
  // TailTooFat if the bound exceeds tail_tol.
  std::optional<WeightParams> weight_hint;
  // When true, the ladder/solver/scatter pipelines attach the decay class of
  // each source they construct as the weight_hint of their internal apply_R
  // calls, so every backward integral in a run is tail-checked.
  bool check_tails = false;
};

// Decay class of |d_t u|^e for u in the order-kappa solution class: behind the
// light cone the field falls like (1+|r-t|)^(-kappa) when kappa > 1, and like
// (1+r+t)^(1-kappa)(1+|r-t|)^(-1) when kappa < 1 (the long-range classes).
WeightParams power_source_class(double e, double kappa);
// Decay class of a two-power difference |d_t u|^p - |d_t v|^p when u - v lies
// one weight order a_top deeper than the pair itself (order kappa2).
WeightParams difference_source_class(double p, double kappa2, double a_top);
// Copy of `base` carrying `cls` as its hint when base.check_tails is set
// (and no hint otherwise).
TruncationPolicy with_tail_class(const TruncationPolicy& base, const WeightParams& cls);

Field apply_K(const DataPair& d);
Field apply_L(const SourceField& F);
Field apply_R(const SourceField& F, const TruncationPolicy& pol);

// F = |v_t|^exponent with F_r = exponent |v_t|^(exponent-1) sign(v_t) d_r v_t
// (zero where v_t vanishes); d_r v_t by centered differencing of the stored v_t.
SourceField nonlinearity(const Field& v, double exponent);
// Pointwise difference of powers: |a_t|^e - |b_t|^e, F_r differenced analogously.
SourceField difference_source(const Field& a, const Field& b, double exponent);

// residual = D_tt u - D_rr u - (2/r) D_r u - F with centered second differences
// of the stored value component; boundary rows/columns are left zero.  The
// residual is returned in the value component of a Field (derivatives zero).
Field pde_residual(const Field& u, const SourceField& F);

struct ResidualStats {
  double max_abs = 0.0;
  int i = -1, k = -1;
};
// Max |residual| over the reported window leaving `margin` cells at each edge.
ResidualStats residual_stats(const Field& residual, int margin);

// Conservative bound on the part of the backward integral beyond t_infinity:
// sup-weight of F times the numerically integrated weight envelope over
// s > t_infinity, maximized over sampled window nodes.
double estimate_R_tail(const SourceField& F, const WeightParams& w, double t_infinity);

}  // namespace rwave
