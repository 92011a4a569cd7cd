// Weighted norms and functionals on data, fields, and sources.
//
// Data:    |||(f,g)(r)||| = |f| + (1+r)(|f'| + |g|) + r(|f''| + |g'|), and the
//          class Y_nu(eps): sup_r (1+r)^nu |||.||| <= eps.
// Fields:  brackets [u]_1 = |u| + r(|u_r|+|u_t|) and
//          [u]_2 = |u| + (1+r)(|u_r|+|u_t|) + r(|u_rr|+|u_rt|+|u_tt|)
//          (second derivatives by centered differencing of the stored first
//          derivatives, one-sided at time edges, reflected at the axis);
//          norm_X = sup [u]_s (1+|r-t|)^nu over the reported window;
//          norm_Z = sup [u]_s (1+r+t)^(nu-1) (1+|r-t|).
//          norm_Z is evaluated as norm_X's node value times
//          ((1+|r-t|)/(1+r+t))^(1-nu), a factor that is <= 1 for nu <= 1 and
//          >= 1 for nu >= 1 even after rounding — so the embedding
//          norm_Z <= norm_X (nu <= 1, reversed for nu >= 1) holds exactly in
//          floating point, not just in exact arithmetic.
// Energy:  ||u(t)||_E = sqrt(1/2 * 4 pi * int_0^{r_max} (u_t^2 + u_r^2) r^2 dr),
//          composite midpoint rule on the staggered radial nodes.
// Sources: M_0(F) = sup |F| r^a (1+r)^b (1+r+t)^g (1+|r-t|)^d over all stored
//          nodes, and M_1 = M_0 + sup |F_r| r^(a+1) (1+r)^(b-1) (same g, d).
#pragma once

#include <algorithm>
#include <utility>

#include "rwave/field.hpp"

namespace rwave {

struct WeightParams {
  double alpha = 0.0, beta = 0.0, gamma = 0.0, delta = 0.0;
  int s = 1;  // 1: M_0 only; 2: M_1 (adds the F_r term)
  double nu() const { return std::min(alpha + beta + gamma - 1.0, delta); }
  double mu() const { return std::min(alpha + beta - 1.0, delta); }
};

// Hypotheses under which the forward (interior) estimate holds: alpha < 3-s,
// delta > 1, gamma >= 0.  Throws InvalidArgument.
void validate_weights_for_L(const WeightParams& w);
// Hypotheses for the backward (tail) estimate: alpha < 3-s, delta > 1,
// alpha + beta + gamma > 2.  Throws InvalidArgument.
void validate_weights_for_R(const WeightParams& w);

// |||d(lambda_j)||| at one node.
double triple_norm_at(const DataPair& d, int j);
// (passes, sup of (1+r)^nu |||.|||); passes means sup <= eps (with a 1e-12
// relative slack so a pair scaled *to* eps is a member of its own class).
std::pair<bool, double> check_Y_membership(const DataPair& d, double nu, double eps);

// [u]_s at a single node (i, k); s in {1, 2}.
double bracket_norm(const Field& u, int s, int i, int k);
// Convenience overload taking (r, t); both must lie on the lattice.
double bracket_norm_at(const Field& u, int s, double r, double t);

double norm_X(const Field& u, int s, double nu);
double norm_Z(const Field& u, int s, double nu);

double energy_norm(const Field& u, double t);
struct EnergyCheck {
  double value = 0.0;
  double edge_integrand = 0.0;  // (u_t^2 + u_r^2) r^2 at the outer window node
};
EnergyCheck energy_norm_checked(const Field& u, double t);

// M_0 (w.s == 1) or M_1 (w.s == 2; requires F.has_fr()).
double weighted_sup_M(const SourceField& F, const WeightParams& w);

}  // namespace rwave
