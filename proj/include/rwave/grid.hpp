// Characteristic lattice for radial spacetime fields.
//
// One uniform spacing h serves both axes: radial nodes sit at half-integers
// r_i = (i + 1/2) h (staggered so no node touches r = 0, where the radial kernels
// have a removable 1/r), and time rows at t_k = k h.  Characteristics through any
// node therefore pass exactly through nodes, which is what makes the closed-form
// operator identities in the tests hold to rounding error rather than O(h).
//
// The lattice is larger than the reported window [0, r_max] x [0, t_max]:
//   * time rows extend to an internal horizon T >= t_max (the finite stand-in for
//     the infinite-time upper limit of the backward cone integral), and
//   * radial columns extend by one horizon length so every reported node's cone
//     stays inside stored data.
// All norms, series and file output are restricted to the reported window.
#pragma once

#include <cmath>
#include <cstdint>

#include "rwave/errors.hpp"

namespace rwave {

struct GridSpec {
  double r_max = 100.0;  // reported radial window
  double t_max = 100.0;  // reported time window
  int n = 512;           // radial cells across [0, r_max]; h = r_max / n
  bool stagger = true;   // half-cell radial offset (required by the operators)
};

class Lattice {
 public:
  // horizon < t_max is widened to t_max; pass t_max itself for a minimal lattice.
  Lattice(const GridSpec& spec, double horizon) : spec_(spec) {
    if (!(spec.r_max > 0.0)) throw InvalidArgument("grid r_max must be positive");
    if (!(spec.t_max >= 0.0)) throw InvalidArgument("grid t_max must be nonnegative");
    if (spec.n < 4) throw InvalidArgument("grid n must be at least 4");
    if (!spec.stagger)
      throw InvalidArgument("grid stagger=false is unsupported: radial kernels need nodes off r=0");
    if (!(horizon >= 0.0) || !std::isfinite(horizon))
      throw InvalidArgument("time horizon must be finite and nonnegative");
    h_ = spec.r_max / spec.n;
    if (horizon < spec.t_max) horizon = spec.t_max;
    nt_ = static_cast<int>(std::llround(horizon / h_));
    if (nt_ < 1) nt_ = 1;
    nt_window_ = static_cast<int>(std::llround(spec.t_max / h_));
    if (nt_window_ > nt_) nt_window_ = nt_;
    nr_window_ = spec.n;
    nr_ = spec.n + nt_;
    nl_ = nr_ + nt_;
    // Memory sanity: three field components per stored field; refuse lattices that
    // could not possibly fit rather than letting std::bad_alloc surface later.
    std::int64_t nodes = static_cast<std::int64_t>(nr_) * (nt_ + 1);
    if (nodes > (std::int64_t{1} << 31))
      throw InvalidArgument("lattice too large: reduce n, t_max, or t_infinity");
  }

  const GridSpec& spec() const { return spec_; }
  double h() const { return h_; }
  int nt() const { return nt_; }                // last time row index (rows 0..nt)
  int nt_window() const { return nt_window_; }  // last row inside the reported window
  int nr() const { return nr_; }                // stored staggered radial nodes
  int nr_window() const { return nr_window_; }  // nodes inside the reported window
  int nl() const { return nl_; }                // radial extent of initial/final data

  double r(int i) const { return (i + 0.5) * h_; }
  double t(int k) const { return k * h_; }
  double lambda(int j) const { return (j + 0.5) * h_; }  // signed characteristic radius

  // Staggered reflection: lambda(~j) == -lambda(j) for j < 0 (bitwise NOT).
  static int reflect(int j) { return ~j; }

  bool same_geometry(const Lattice& o) const {
    return nr_ == o.nr_ && nt_ == o.nt_ && h_ == o.h_;
  }

 private:
  GridSpec spec_;
  double h_;
  int nt_, nt_window_, nr_, nr_window_, nl_;
};

}  // namespace rwave
