#include "rwave/profiles.hpp"

#include <cmath>

#include "rwave/norms.hpp"

namespace rwave {

ProfileFamily profile_family_from_string(const std::string& name) {
  if (name == "zero") return ProfileFamily::zero;
  if (name == "gaussian") return ProfileFamily::gaussian;
  if (name == "algebraic") return ProfileFamily::algebraic;
  throw InvalidArgument("unknown profile family '" + name + "' (zero|gaussian|algebraic)");
}

const char* profile_family_name(ProfileFamily f) {
  switch (f) {
    case ProfileFamily::zero: return "zero";
    case ProfileFamily::gaussian: return "gaussian";
    case ProfileFamily::algebraic: return "algebraic";
  }
  return "unknown";
}

DataPair make_profile(const Lattice& lat, ProfileFamily family, double nu, double eps) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidArgument("profile nu must be nonnegative");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw InvalidArgument("profile eps must be nonnegative");
  DataPair d(lat);
  d.nu = nu;
  d.eps = eps;
  if (family == ProfileFamily::zero || eps == 0.0) {
    if (family == ProfileFamily::zero && eps > 0.0)
      throw ProfileUnscalable("the zero family cannot be scaled to a positive amplitude");
    return d;
  }
  const int nl = lat.nl();
  if (family == ProfileFamily::gaussian) {
    for (int j = 0; j < nl; ++j) {
      double r = lat.lambda(j);
      double e = std::exp(-r * r);
      d.f[j] = e;
      d.fp[j] = -2.0 * r * e;
      d.fpp[j] = (4.0 * r * r - 2.0) * e;
      d.g[j] = e;
      d.gp[j] = -2.0 * r * e;
    }
  } else {  // algebraic
    for (int j = 0; j < nl; ++j) {
      double r = lat.lambda(j);
      double b = 1.0 + r * r;
      d.f[j] = std::pow(b, -nu / 2.0);
      d.fp[j] = -nu * r * std::pow(b, -(nu + 2.0) / 2.0);
      d.fpp[j] = nu * std::pow(b, -(nu + 4.0) / 2.0) * ((nu + 1.0) * r * r - 1.0);
      d.g[j] = std::pow(b, -(nu + 1.0) / 2.0);
      d.gp[j] = -(nu + 1.0) * r * std::pow(b, -(nu + 3.0) / 2.0);
    }
  }
  double sup = check_Y_membership(d, nu, 0.0).second;
  if (!(sup > 0.0) || !std::isfinite(sup))
    throw ProfileUnscalable("profile has no finite positive amplitude to normalize");
  d.scale(eps / sup);
  return d;
}

}  // namespace rwave
