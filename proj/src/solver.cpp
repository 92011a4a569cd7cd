#include "rwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "rwave/errors.hpp"
#include "rwave/norms.hpp"

namespace rwave {

namespace {

void check_membership(const DataPair& d, double kappa, const char* which) {
  auto [ok, sup] = check_Y_membership(d, kappa, d.eps);
  if (sup == 0.0) return;  // zero data belong to every class
  if (d.eps <= 0.0)
    throw InvalidArgument(std::string(which) +
                          ": nonzero data carry no amplitude class (eps = 0)");
  if (!ok)
    throw InvalidArgument(std::string(which) + ": data exceed the declared class, sup " +
                          std::to_string(sup) + " > eps " + std::to_string(d.eps));
}

double component_norm(const Field& d, double nu, bool use_x) {
  return use_x ? norm_X(d, 2, nu) : norm_Z(d, 2, nu);
}

using FixedPointMap = std::function<std::pair<Field, Field>(const Field&, const Field&)>;

// Iterates x -> T(x) from the anchor pair until successive iterates are within
// tol in the metric.  Rows record, per application of T, the distance moved,
// the distance of the new iterate from the anchor, and the contraction ratio.
std::pair<Field, Field> picard(const Field& anchor1, const Field& anchor2,
                               const FixedPointMap& T, const MetricSpec& m,
                               const SolverOptions& opts, IterationTrace& trace) {
  if (opts.max_iters < 1) throw InvalidArgument("max_iters must be at least 1");
  if (!(opts.tol >= 0.0)) throw InvalidArgument("tol must be nonnegative");

  Field x1 = anchor1, x2 = anchor2;
  double prev = 0.0;
  int slow = 0;
  bool converged = false;
  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    auto [n1, n2] = T(x1, x2);
    const double dist = metric_d(n1, n2, x1, x2, m);
    const double adist = metric_d(n1, n2, anchor1, anchor2, m);
    const double ratio = (iter >= 2 && prev > 0.0) ? dist / prev : 0.0;
    trace.rows.push_back({iter, dist, adist, ratio});

    if (!std::isfinite(dist) || !std::isfinite(adist)) {
      trace.termination = IterationTrace::Termination::diverged;
      throw NoContraction("iteration " + std::to_string(iter) +
                          " produced a non-finite distance; the data are outside the "
                          "contraction regime");
    }
    if (iter >= 2 && ratio > 0.9) {
      if (++slow >= 2) {
        trace.termination = IterationTrace::Termination::diverged;
        throw NoContraction("contraction ratio stayed above 0.9 for two consecutive "
                            "iterations (last ratio " +
                            std::to_string(ratio) + " at iteration " + std::to_string(iter) +
                            ")");
      }
    } else {
      slow = 0;
    }
    if (m.radius > 0.0 && adist > 10.0 * m.radius) {
      trace.termination = IterationTrace::Termination::diverged;
      throw LeftDomain("iterate moved " + std::to_string(adist) +
                       " from the anchor, beyond 10x the nominal ball radius " +
                       std::to_string(m.radius));
    }

    x1 = std::move(n1);
    x2 = std::move(n2);
    prev = dist;
    if (dist <= opts.tol) {
      converged = true;
      break;
    }
  }

  if (converged) {
    trace.termination = IterationTrace::Termination::converged;
    auto [d1, d2] = T(x1, x2);  // one extra application certifies the fixed point
    trace.defect = metric_d(d1, d2, x1, x2, m);
  } else {
    trace.termination = IterationTrace::Termination::max_iters;
    trace.defect = prev;  // last successive distance; not a fixed-point certificate
  }
  return {std::move(x1), std::move(x2)};
}

}  // namespace

MetricSpec MetricSpec::short_range(const KappaPair& k, double eps) {
  MetricSpec m;
  m.kind = MetricKind::ShortRange;
  m.nu1 = k.k1;
  m.nu2 = k.k2;
  m.radius = eps;
  return m;
}

MetricSpec MetricSpec::long_range(const ExponentLadder& lp, double eps) {
  MetricSpec m;
  m.kind = MetricKind::LongRange;
  m.nu1 = lp.kappa.k1 * lp.a_raw(lp.ell + 1);
  m.nu2 = lp.a_raw(lp.ell + 1);
  m.pm1 = lp.p - 1.0;
  m.radius = std::pow(eps, (lp.p - 1.0) * lp.b(lp.ell));
  return m;
}

MetricSpec MetricSpec::p_equals_two(const ExponentLadder& lp, double eps) {
  MetricSpec m;
  m.kind = MetricKind::PEqualsTwo;
  m.nu1 = lp.kappa.k2;
  m.nu2 = lp.kappa.k2;
  m.radius = std::pow(eps, lp.q);
  return m;
}

MetricSpec MetricSpec::ivp(Regime regime, const KappaPair& k) {
  MetricSpec m;
  m.kind = MetricKind::ShortRange;  // sum of one second-order norm per component
  m.nu1 = k.k1;
  m.nu2 = k.k2;
  m.x1 = (regime == Regime::ShortRange);
  m.x2 = true;
  m.radius = 0.0;  // forward solves carry no ball certificate
  return m;
}

double metric_d(const Field& a1, const Field& a2, const Field& b1, const Field& b2,
                const MetricSpec& m) {
  Field d1(a1.lat());
  Field::difference(d1, a1, b1);
  Field d2(a2.lat());
  Field::difference(d2, a2, b2);
  switch (m.kind) {
    case MetricKind::ShortRange:
      return component_norm(d1, m.nu1, m.x1) + component_norm(d2, m.nu2, m.x2);
    case MetricKind::PEqualsTwo:
      return norm_Z(d1, 2, m.nu1) + norm_Z(d2, 2, m.nu2);
    case MetricKind::LongRange:
      return norm_Z(d1, 2, m.nu1) + std::pow(norm_Z(d1, 1, m.nu1), m.pm1) +
             norm_Z(d2, 2, m.nu2) + std::pow(norm_Z(d2, 1, m.nu2), m.pm1);
  }
  throw InvalidArgument("unknown metric kind");
}

SolveResult solve_fvp_short(const DataPair& f1, const DataPair& f2, const Exponents& e,
                            const TruncationPolicy& trunc, const SolverOptions& opts) {
  if (classify_exponents(e.p, e.q) != Regime::ShortRange)
    throw InvalidArgument("direct final-value solve needs p > 2; use the ladder solve");
  if (!f1.lat.same_geometry(f2.lat))
    throw InvalidArgument("final data must share one lattice");
  const KappaPair k = kappa_pair(e);
  check_membership(f1, k.k1, "final datum 1");
  check_membership(f2, k.k2, "final datum 2");

  Field w0 = apply_K(f1);
  Field v0 = apply_K(f2);
  const MetricSpec m = MetricSpec::short_range(k, std::max(f1.eps, f2.eps));

  const TruncationPolicy pol_p = with_tail_class(trunc, power_source_class(e.p, k.k2));
  const TruncationPolicy pol_q = with_tail_class(trunc, power_source_class(e.q, k.k1));
  const auto T = [&](const Field& u1, const Field& u2) {
    Field n1 = w0;
    n1.add(apply_R(nonlinearity(u2, e.p), pol_p));
    Field n2 = v0;
    n2.add(apply_R(nonlinearity(u1, e.q), pol_q));
    return std::pair<Field, Field>(std::move(n1), std::move(n2));
  };

  IterationTrace trace;
  auto [u1, u2] = picard(w0, v0, T, m, opts, trace);
  return SolveResult{std::move(u1), std::move(u2), std::move(w0), std::move(v0),
                     std::move(trace), m};
}

SolveResult solve_fvp_long(const Ladder& lad, const TruncationPolicy& trunc,
                           const SolverOptions& opts) {
  const ExponentLadder& lp = lad.params;
  if (lp.regime == Regime::ShortRange)
    throw InvalidArgument("generalized final-value solve needs p <= 2; use the direct solve");
  if (static_cast<int>(lad.w.size()) != lp.ell + 2 || lad.v.size() != lad.w.size())
    throw InvalidArgument("ladder depth does not match its exponent recurrence");

  const double p = lp.p, q = lp.q;
  const MetricSpec m = lp.regime == Regime::PEqualsTwo
                           ? MetricSpec::p_equals_two(lp, lad.eps)
                           : MetricSpec::long_range(lp, lad.eps);

  const Field& w_top = lad.w_top();
  const Field& v_top = lad.v_top();
  const Field& v_ell = lad.v[lad.v.size() - 2];

  const TruncationPolicy pol_G =
      with_tail_class(trunc, difference_source_class(p, lp.kappa.k2, lp.a_raw(lp.ell + 1)));
  const TruncationPolicy pol_H = with_tail_class(trunc, power_source_class(q, lp.kappa.k1));
  const auto T = [&](const Field& u1, const Field& u2) {
    Field n1 = w_top;
    n1.add(apply_R(difference_source(u2, v_ell, p), pol_G));
    Field n2 = v_top;
    n2.add(apply_R(difference_source(u1, w_top, q), pol_H));
    return std::pair<Field, Field>(std::move(n1), std::move(n2));
  };

  IterationTrace trace;
  auto [u1, u2] = picard(w_top, v_top, T, m, opts, trace);
  return SolveResult{std::move(u1), std::move(u2), Field(w_top), Field(v_top), std::move(trace),
                     m};
}

SolveResult solve_ivp(const DataPair& phi1, const DataPair& phi2, const Exponents& e,
                      const SolverOptions& opts) {
  const Regime regime = classify_exponents(e.p, e.q);
  if (!phi1.lat.same_geometry(phi2.lat))
    throw InvalidArgument("initial data must share one lattice");
  const KappaPair k = kappa_pair(e);
  check_membership(phi1, k.k1, "initial datum 1");
  check_membership(phi2, k.k2, "initial datum 2");

  Field h1 = apply_K(phi1);
  Field h2 = apply_K(phi2);
  const MetricSpec m = MetricSpec::ivp(regime, k);

  const auto T = [&](const Field& u1, const Field& u2) {
    Field n1 = h1;
    n1.add(apply_L(nonlinearity(u2, e.p)));
    Field n2 = h2;
    n2.add(apply_L(nonlinearity(u1, e.q)));
    return std::pair<Field, Field>(std::move(n1), std::move(n2));
  };

  IterationTrace trace;
  auto [u1, u2] = picard(h1, h2, T, m, opts, trace);
  return SolveResult{std::move(u1), std::move(u2), std::move(h1), std::move(h2),
                     std::move(trace), m};
}

ProbeResult contraction_probe(ProbeProblem problem, const Exponents& e, ProfileFamily fam1,
                              ProfileFamily fam2, const std::vector<double>& eps_grid,
                              const GridSpec& grid, double horizon,
                              const TruncationPolicy& trunc, const SolverOptions& opts) {
  if (eps_grid.empty()) throw InvalidArgument("amplitude grid is empty");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0)) throw InvalidArgument("probe amplitudes must be positive");
    if (i + 1 < eps_grid.size() && !(eps_grid[i] > eps_grid[i + 1]))
      throw InvalidArgument("probe amplitudes must be strictly decreasing");
  }

  const KappaPair k = kappa_pair(e);
  const Lattice lat(grid, horizon);

  ProbeResult res;
  res.unconstrained = (fam1 == ProfileFamily::zero && fam2 == ProfileFamily::zero);

  for (double eps : eps_grid) {
    const DataPair d1 = make_profile(lat, fam1, k.k1, eps);
    const DataPair d2 = make_profile(lat, fam2, k.k2, eps);
    ProbeOutcome out;
    out.eps = eps;
    try {
      const SolveResult sr = [&]() -> SolveResult {
        switch (problem) {
          case ProbeProblem::FvpShort:
            return solve_fvp_short(d1, d2, e, trunc, opts);
          case ProbeProblem::FvpLong: {
            const ExponentLadder lp = build_exponent_ladder(e);
            const Ladder lad = build_final_ladder(d1, d2, lp, trunc);
            return solve_fvp_long(lad, trunc, opts);
          }
          case ProbeProblem::Ivp:
            return solve_ivp(d1, d2, e, opts);
        }
        throw InvalidArgument("unknown probe problem");
      }();
      out.converged = sr.trace.termination == IterationTrace::Termination::converged;
      bool cert = out.converged;
      for (const auto& row : sr.trace.rows)
        if (row.iter >= 2 && row.ratio > opts.ratio_bound) cert = false;
      out.certified = cert;
    } catch (const NoContraction&) {
    } catch (const LeftDomain&) {
    } catch (const TailTooFat&) {
    }
    if (out.certified) {
      if (!res.any) {
        res.any = true;
        res.eps0 = eps;
      }
    } else if (res.any) {
      res.anomaly = true;  // a smaller amplitude failed after a larger one passed
    }
    res.outcomes.push_back(out);
  }
  return res;
}

}  // namespace rwave
