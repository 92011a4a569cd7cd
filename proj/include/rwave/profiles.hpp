// Test-datum factories: smooth radial profiles scaled into Y_nu(eps).
//
// Families (with analytic derivatives, sampled on the data extent):
//   gaussian:   f(r) = c e^{-r^2},            g(r) = c e^{-r^2}
//   algebraic:  f(r) = c (1+r^2)^{-nu/2},     g(r) = c (1+r^2)^{-(nu+1)/2}
//   zero:       identically zero pair
// The unit-amplitude profile is sampled, its Y_nu sup measured on the lattice,
// and everything rescaled so the measured sup equals eps exactly (up to
// rounding); eps = 0 produces the zero pair.
#pragma once

#include <string>

#include "rwave/field.hpp"

namespace rwave {

enum class ProfileFamily { zero, gaussian, algebraic };

ProfileFamily profile_family_from_string(const std::string& name);
const char* profile_family_name(ProfileFamily f);

DataPair make_profile(const Lattice& lat, ProfileFamily family, double nu, double eps);

}  // namespace rwave
