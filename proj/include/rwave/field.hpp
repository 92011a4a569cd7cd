// Sampled spacetime fields, radial datum pairs, and source fields.
//
// A Field stores u together with analytically propagated first derivatives u_r,
// u_t on the full lattice (window + halo), row-major by time row.  Fields are
// even in r under reflection; consumers needing r < 0 use that extension.
// A DataPair holds radial data (f, f', f'', g, g') on the staggered lambda nodes
// out to the data extent nl (what the forward operator needs to be exact on every
// stored node).  A SourceField is a right-hand side F (optionally with F_r for
// the derivative-weighted functionals).
#pragma once

#include <vector>

#include "rwave/grid.hpp"
#include "rwave/kernels.hpp"

namespace rwave {

class Field {
 public:
  explicit Field(const Lattice& lat)
      : lat_(lat),
        u_(static_cast<size_t>(lat.nr()) * (lat.nt() + 1), 0.0),
        ur_(u_.size(), 0.0),
        ut_(u_.size(), 0.0) {}

  const Lattice& lat() const { return lat_; }

  double* u_row(int k) { return u_.data() + static_cast<size_t>(k) * lat_.nr(); }
  double* ur_row(int k) { return ur_.data() + static_cast<size_t>(k) * lat_.nr(); }
  double* ut_row(int k) { return ut_.data() + static_cast<size_t>(k) * lat_.nr(); }
  const double* u_row(int k) const { return u_.data() + static_cast<size_t>(k) * lat_.nr(); }
  const double* ur_row(int k) const { return ur_.data() + static_cast<size_t>(k) * lat_.nr(); }
  const double* ut_row(int k) const { return ut_.data() + static_cast<size_t>(k) * lat_.nr(); }

  double u(int i, int k) const { return u_row(k)[i]; }
  double ur(int i, int k) const { return ur_row(k)[i]; }
  double ut(int i, int k) const { return ut_row(k)[i]; }

  // Elementwise algebra over all stored nodes (value and both derivatives).
  void add(const Field& o) {
    require_same(o);
    const auto& k = simd::ops();
    k.add(u_.data(), o.u_.data(), u_.size());
    k.add(ur_.data(), o.ur_.data(), ur_.size());
    k.add(ut_.data(), o.ut_.data(), ut_.size());
  }
  void sub(const Field& o) {
    require_same(o);
    const auto& k = simd::ops();
    k.sub(u_.data(), o.u_.data(), u_.size());
    k.sub(ur_.data(), o.ur_.data(), ur_.size());
    k.sub(ut_.data(), o.ut_.data(), ut_.size());
  }
  void scale(double c) {
    const auto& k = simd::ops();
    k.scale(u_.data(), c, u_.size());
    k.scale(ur_.data(), c, ur_.size());
    k.scale(ut_.data(), c, ut_.size());
  }
  void copy_from(const Field& o) {
    require_same(o);
    u_ = o.u_;
    ur_ = o.ur_;
    ut_ = o.ut_;
  }
  // out = a - b
  static void difference(Field& out, const Field& a, const Field& b) {
    out.require_same(a);
    out.require_same(b);
    const auto& k = simd::ops();
    k.vsub(out.u_.data(), a.u_.data(), b.u_.data(), out.u_.size());
    k.vsub(out.ur_.data(), a.ur_.data(), b.ur_.data(), out.ur_.size());
    k.vsub(out.ut_.data(), a.ut_.data(), b.ut_.data(), out.ut_.size());
  }

 private:
  void require_same(const Field& o) const {
    if (!lat_.same_geometry(o.lat_)) throw InvalidArgument("field algebra requires a shared lattice");
  }
  Lattice lat_;
  std::vector<double> u_, ur_, ut_;
};

struct DataPair {
  explicit DataPair(const Lattice& l)
      : lat(l),
        f(l.nl(), 0.0),
        fp(l.nl(), 0.0),
        fpp(l.nl(), 0.0),
        g(l.nl(), 0.0),
        gp(l.nl(), 0.0) {}

  Lattice lat;
  double nu = 0.0;   // decay class the pair was built for (0 when not applicable)
  double eps = 0.0;  // amplitude it was scaled to (0 when not applicable)
  std::vector<double> f, fp, fpp, g, gp;  // sampled at lat.lambda(j), j in [0, nl)

  void scale(double c) {
    const auto& k = simd::ops();
    k.scale(f.data(), c, f.size());
    k.scale(fp.data(), c, fp.size());
    k.scale(fpp.data(), c, fpp.size());
    k.scale(g.data(), c, g.size());
    k.scale(gp.data(), c, gp.size());
  }
};

struct SourceField {
  explicit SourceField(const Lattice& l, bool with_radial_derivative)
      : lat(l), F(static_cast<size_t>(l.nr()) * (l.nt() + 1), 0.0) {
    if (with_radial_derivative) Fr.assign(F.size(), 0.0);
  }

  Lattice lat;
  std::vector<double> F;
  std::vector<double> Fr;  // empty when not computed

  bool has_fr() const { return !Fr.empty(); }
  double* row(int k) { return F.data() + static_cast<size_t>(k) * lat.nr(); }
  const double* row(int k) const { return F.data() + static_cast<size_t>(k) * lat.nr(); }
  double* fr_row(int k) { return Fr.data() + static_cast<size_t>(k) * lat.nr(); }
  const double* fr_row(int k) const { return Fr.data() + static_cast<size_t>(k) * lat.nr(); }
};

// Radial data read off a field's t = 0 row: f = u, f' = u_r, g = u_t, with f''
// and g' by centered differencing (even/odd reflection at the axis).  Nodes
// beyond the stored radial extent are zero.
DataPair extract_datum(const Field& u);

}  // namespace rwave
