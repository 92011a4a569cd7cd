// Run configuration: documented defaults, optional INI-style file, CLI overrides.
//
// File format: `[section]` headers and `key = value` lines; `#` or `;` start a
// comment; blank lines ignored.  Sections and keys:
//
//   [exponents]  p, q, kappa1, kappa2        (kappa overrides: p = 2 only)
//   [data]       family1, family2, eps, nu1, nu2
//   [grid]       r_max, t_max, n, t_infinity, tail_tol, check_tails
//   [solver]     tol, max_iters, ratio_bound
//   [output]     outdir, fit_lo, fit_hi
//
// Unknown sections or keys are rejected.  Values a run does not set keep the
// defaults below; CLI flags override file values.
#pragma once

#include <optional>
#include <string>

#include "rwave/grid.hpp"
#include "rwave/params.hpp"
#include "rwave/solver.hpp"
#include "rwave/waveops.hpp"

namespace rwave {

struct RunConfig {
  // [exponents]
  double p = 3.0;
  double q = 3.0;
  std::optional<double> kappa1, kappa2;
  // [data]
  std::string family1 = "gaussian";
  std::string family2 = "gaussian";
  double eps = 1e-2;
  std::optional<double> nu1, nu2;  // data class orders; default: the kappa pair
  // [grid]
  double r_max = 100.0;
  double t_max = 100.0;
  int n = 512;
  double t_infinity = -1.0;  // < 0: the lattice horizon
  double tail_tol = 1e-8;
  bool check_tails = false;
  // [solver]
  double tol = 1e-8;
  int max_iters = 50;
  double ratio_bound = 0.5;
  // [output]
  std::string outdir = "out";
  double fit_lo = -1.0, fit_hi = -1.0;  // < 0: window [10, 0.8 t_max]

  Exponents exponents() const;
  GridSpec grid() const;
  TruncationPolicy truncation() const;
  SolverOptions solver() const;
  double horizon() const;  // max(t_max, t_infinity)
  double fit_window_lo() const;
  double fit_window_hi() const;
};

// Parses the file into `cfg` (later lines win).  Throws InvalidArgument on
// unreadable files, malformed lines, or unknown sections/keys.
void load_config_file(const std::string& path, RunConfig& cfg);

}  // namespace rwave
