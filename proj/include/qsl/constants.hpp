#pragma once

#include <numbers>

namespace qsl {

// Natural units: hbar = 1, so h = 2*pi and energies are inverse times.
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * pi;
inline constexpr double planck_h = two_pi;

namespace si {

// CODATA 2018 defining constants (both exact by definition).
inline constexpr double planck_h = 6.62607015e-34;   // J s
inline constexpr double light_speed = 299792458.0;   // m / s

}  // namespace si

}  // namespace qsl
