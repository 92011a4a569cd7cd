#include "rwave/ladder.hpp"

#include <cmath>
#include <string>

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

// F = |d_t a|^e - |d_t b|^e as a difference source, or plain |d_t a|^e when
// b is null; shared expressions keep consecutive ladder steps telescoping.
SourceField step_source(const Field& a, const Field* b, double e) {
  return b ? difference_source(a, *b, e) : nonlinearity(a, e);
}

void record_member_norms(Ladder& lad, int j, double k1, double k2) {
  lad.norm_report.push_back({j, "w_Z2(k1)", norm_Z(lad.w[j], 2, k1), 1.0});
  lad.norm_report.push_back({j, "v_X2(k2)", norm_X(lad.v[j], 2, k2), 1.0});
}

void record_step_norms(Ladder& lad, int m, const Field& dw, const Field& dv) {
  // Step m is the difference (w_m - w_{m-1}, v_m - v_{m-1}).  The first step
  // is measured in the base decay classes; later steps in the boosted classes
  // of the recurrence, where their small-amplitude scaling powers live.
  const ExponentLadder& lp = lad.params;
  const double p = lp.p, q = lp.q;
  const double k1 = lp.kappa.k1;
  if (m == 1) {
    lad.norm_report.push_back({1, "dw_Z2(k1)", norm_Z(dw, 2, k1), p});
    lad.norm_report.push_back({1, "dv_Z2(k2)", norm_Z(dv, 2, lp.kappa.k2), q});
    return;
  }
  const int j = m - 1;  // recurrence index: this step is (w_{j+1} - w_j)
  const double aj = lp.a_raw(j);
  const double aj1 = lp.a_raw(j + 1);
  lad.norm_report.push_back({m, "dw_Z1(k1*a_j)", norm_Z(dw, 1, k1 * aj), lp.b(j - 1) + p - 1.0});
  lad.norm_report.push_back({m, "dv_Z1(a_j1)", norm_Z(dv, 1, aj1), lp.b(j)});
  lad.norm_report.push_back({m, "dw_Z2(k1*a_j)", norm_Z(dw, 2, k1 * aj), lp.B(j - 1)});
  lad.norm_report.push_back({m, "dv_Z2(a_j1)", norm_Z(dv, 2, aj1), lp.B(j - 1) + q - 1.0});
}

}  // namespace

Ladder build_final_ladder(const DataPair& f1, const DataPair& f2, const ExponentLadder& lp,
                          const TruncationPolicy& trunc) {
  if (!f1.lat.same_geometry(f2.lat))
    throw InvalidArgument("final data must share one lattice");
  check_membership(f1, lp.kappa.k1, "final datum 1");
  check_membership(f2, lp.kappa.k2, "final datum 2");

  Ladder lad;
  lad.params = lp;
  lad.eps = std::max(f1.eps, f2.eps);

  lad.w.push_back(apply_K(f1));
  lad.v.push_back(apply_K(f2));
  record_member_norms(lad, 0, lp.kappa.k1, lp.kappa.k2);
  if (lp.regime == Regime::ShortRange) return lad;

  const double p = lp.p, q = lp.q;
  for (int m = 1; m <= lp.ell + 1; ++m) {
    // w_m = w_{m-1} + L(source), source telescoping through the v's.
    const Field* v_prev = m >= 2 ? &lad.v[m - 2] : nullptr;
    Field dw = apply_L(step_source(lad.v[m - 1], v_prev, p));
    Field wm = lad.w[m - 1];
    wm.add(dw);
    lad.w.push_back(std::move(wm));
    // v_m = v_{m-1} + R(source), telescoping through the w's.
    const Field* w_prev = m >= 2 ? &lad.w[m - 1] : nullptr;
    const TruncationPolicy pol = with_tail_class(trunc, power_source_class(q, lp.kappa.k1));
    Field dv = apply_R(step_source(lad.w[m], w_prev, q), pol);
    Field vm = lad.v[m - 1];
    vm.add(dv);
    lad.v.push_back(std::move(vm));

    record_member_norms(lad, m, lp.kappa.k1, lp.kappa.k2);
    record_step_norms(lad, m, dw, dv);
  }
  return lad;
}

InverseLadder build_inverse_ladder(const Field& u1, const Field& u2, const DataPair& phi1,
                                   const ExponentLadder& lp, const TruncationPolicy& trunc) {
  if (!u1.lat().same_geometry(u2.lat()) || !u1.lat().same_geometry(phi1.lat))
    throw InvalidArgument("inverse ladder inputs must share one lattice");
  const double p = lp.p, q = lp.q;

  const TruncationPolicy pol_q = with_tail_class(trunc, power_source_class(q, lp.kappa.k1));

  std::vector<Field> ws, vs;
  ws.push_back(apply_K(phi1));  // w*_0
  {
    Field v0 = u2;
    v0.sub(apply_R(nonlinearity(u1, q), pol_q));
    vs.push_back(std::move(v0));  // v*_0
  }
  for (int j = 1; j <= lp.ell; ++j) {
    Field wj = ws[0];
    wj.add(apply_L(nonlinearity(vs[j - 1], p)));
    ws.push_back(std::move(wj));
    Field vj = vs[0];
    vj.add(apply_R(nonlinearity(ws[j], q), pol_q));
    vs.push_back(std::move(vj));
  }
  // w* = u1 - R(|d_t u2|^p - |d_t v*_ell|^p)
  Field w_star = u1;
  const TruncationPolicy pol_diff =
      with_tail_class(trunc, difference_source_class(p, lp.kappa.k2, lp.a_raw(lp.ell + 1)));
  w_star.sub(apply_R(difference_source(u2, vs.back(), p), pol_diff));
  Field v0_star = vs[0];
  return InverseLadder{std::move(w_star), std::move(v0_star), std::move(ws), std::move(vs)};
}

std::vector<LadderScalingRow> ladder_scaling_report(const Ladder& at_eps, const Ladder& at_half) {
  std::vector<LadderScalingRow> rows;
  for (const LadderNormRow& a : at_eps.norm_report) {
    for (const LadderNormRow& b : at_half.norm_report) {
      if (a.j != b.j || a.name != b.name) continue;
      LadderScalingRow r;
      r.j = a.j;
      r.name = a.name;
      r.value_eps = a.value;
      r.value_half = b.value;
      r.expected_power = a.expected_eps_power;
      r.measurable = a.value > 1e-300 && b.value > 1e-300;
      r.observed_power = r.measurable ? std::log2(a.value / b.value) : 0.0;
      rows.push_back(r);
      break;
    }
  }
  return rows;
}

}  // namespace rwave
