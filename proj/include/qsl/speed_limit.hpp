#pragma once

#include <cmath>
#include <stdexcept>

#include "qsl/constants.hpp"

namespace qsl {

namespace detail {

inline void require_positive_energy(double energy) {
  if (!(energy > 0.0)) {
    throw std::domain_error("speed limit: energy must be > 0");
  }
}

// Factor 1 + 2*(theta mod pi)/pi.  fmod is exact, so theta < pi passes
// through unchanged and the theta = 0 case multiplies by exactly 1.
inline double gate_time_factor(double theta) {
  if (!(theta >= 0.0)) {
    throw std::domain_error("speed limit: theta must be >= 0");
  }
  const double reduced = std::fmod(theta, pi);
  return 1.0 + 2.0 * reduced / pi;
}

}  // namespace detail

// Minimum time to reach an orthogonal state: h/(4E) = pi/(2E) with hbar=1.
inline double orthogonalization_time(double energy) {
  detail::require_positive_energy(energy);
  return (pi / 2.0) / energy;
}

// Minimum time for the swap-with-phase gate: (h/4E) * (1 + 2(theta mod pi)/pi).
inline double min_gate_time(double theta, double energy) {
  return orthogonalization_time(energy) * detail::gate_time_factor(theta);
}

// Minimum time for a known-state rotation by alpha: alpha*h/(2*pi*E) = alpha/E.
inline double min_rotation_time(double alpha, double energy) {
  detail::require_positive_energy(energy);
  if (!(alpha >= 0.0) || alpha > pi / 2.0) {
    throw std::domain_error("speed limit: alpha must lie in [0, pi/2]");
  }
  return alpha / energy;
}

namespace si {

inline double orthogonalization_time(double energy_joules) {
  detail::require_positive_energy(energy_joules);
  return planck_h / (4.0 * energy_joules);
}

inline double min_gate_time(double theta, double energy_joules) {
  return orthogonalization_time(energy_joules) *
         detail::gate_time_factor(theta);
}

inline double min_rotation_time(double alpha, double energy_joules) {
  detail::require_positive_energy(energy_joules);
  if (!(alpha >= 0.0) || alpha > pi / 2.0) {
    throw std::domain_error("speed limit: alpha must lie in [0, pi/2]");
  }
  return alpha * planck_h / (2.0 * pi * energy_joules);
}

struct WavelengthBound {
  double energy_joules = 0.0;
  double tau_seconds = 0.0;
};

// Average energy of an equal superposition of a ground state at 0 and an
// excited state at hc/lambda, and the matching orthogonalization time
// tau = h/(4E) = lambda/(2c).
inline WavelengthBound from_wavelength(double lambda_meters) {
  if (!(lambda_meters > 0.0)) {
    throw std::domain_error("speed limit: wavelength must be > 0");
  }
  const double energy = planck_h * light_speed / (2.0 * lambda_meters);
  const double tau = lambda_meters / (2.0 * light_speed);
  return {energy, tau};
}

}  // namespace si

}  // namespace qsl
