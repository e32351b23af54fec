#pragma once

#include <numbers>

namespace lambdasim {

// All internal frequencies and rates are angular, in rad/us.  User-facing
// values (config files, CSV columns, fit reports) are ordinary frequencies
// in MHz; times are in us.  1 MHz corresponds to 2*pi rad/us, so conversion
// happens exactly once at the configuration boundary.

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double mhz_to_angular(double f_mhz) { return two_pi * f_mhz; }
inline constexpr double angular_to_mhz(double w) { return w / two_pi; }

}  // namespace lambdasim
