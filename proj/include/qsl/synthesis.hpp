#pragma once

#include <cmath>
#include <stdexcept>

#include "qsl/constants.hpp"
#include "qsl/model.hpp"
#include "qsl/propagator.hpp"
#include "qsl/pulse.hpp"
#include "qsl/speed_limit.hpp"

namespace qsl {

// The two admissible solutions of e11/e12 = 2*theta/pi +/- 1; plus pairs
// with phi = pi, minus with phi = 0.  Auto picks whichever realizes the
// smaller ratio (hence the smaller tau at fixed energy).
enum class Branch { kAuto, kPlus, kMinus };

struct GateSpec {
  double theta = 0.0;       // target phase shift, radians, >= 0
  double energy = 1.0;      // target time-averaged energy, > 0
  Branch branch = Branch::kAuto;
};

struct SynthesizedGate {
  HamiltonianParams params;
  PulseProfile pulse;
  double tau = 0.0;
  double predicted_product = 0.0;  // tau * E in units of h/4
  Branch branch = Branch::kAuto;
};

// Target operator: each basis state maps to the other times e^{-i theta}.
inline Unitary2 gate_target(double theta) {
  const cplx off = std::polar(1.0, -theta);
  return make_unitary(0.0, off, off, 0.0);
}

// Frobenius norm of U - gate_target(theta).  Global phase is deliberately
// not quotiented out: the qubit is meant to sit inside a larger register,
// where the overall phase is physical.
inline double gate_error(const Unitary2& u, double theta) {
  return frobenius_norm(u.as_matrix() - gate_target(theta).as_matrix());
}

// Builds the minimum-time realization of the gate for a given theta and
// target energy, on the constant pulse f = 1 (so F(tau) = tau; any other
// positive pulse with equal accumulated action gives the same gate).
//
// Construction: e11 = e22 = E, e12 = E / ratio, tau = (pi/2)/e12, where
// ratio = 2*theta'/pi + 1 (plus branch) or 2*theta/pi - 1 (minus branch,
// admissible only for theta >= pi).  Auto reduces theta mod 2*pi first;
// the reduction preserves the realized phase exactly, and the selected
// ratio equals 1 + 2*(theta mod pi)/pi, i.e. the gate saturates the bound.
inline SynthesizedGate synthesize_gate(const GateSpec& spec) {
  if (!(spec.energy > 0.0)) {
    throw std::domain_error("synthesis: energy must be > 0");
  }
  if (!(spec.theta >= 0.0)) {
    throw std::domain_error("synthesis: theta must be >= 0");
  }

  Branch branch = spec.branch;
  double ratio = 0.0;
  if (branch == Branch::kAuto) {
    const double reduced = std::fmod(spec.theta, two_pi);
    if (reduced < pi) {
      branch = Branch::kPlus;
      ratio = 2.0 * reduced / pi + 1.0;
    } else {
      branch = Branch::kMinus;
      ratio = 2.0 * reduced / pi - 1.0;
    }
  } else if (branch == Branch::kPlus) {
    ratio = 2.0 * spec.theta / pi + 1.0;
  } else {
    ratio = 2.0 * spec.theta / pi - 1.0;
    if (!(ratio >= 1.0)) {
      throw std::invalid_argument(
          "synthesis: minus branch requires 2*theta/pi - 1 >= 1");
    }
  }

  const double phi = branch == Branch::kPlus ? pi : 0.0;
  const double e12 = spec.energy / ratio;
  const double tau = (pi / 2.0) / e12;
  return {HamiltonianParams(spec.energy, spec.energy, e12, phi),
          PulseProfile::constant(1.0), tau, ratio, branch};
}

struct GateVerification {
  double theta = 0.0;
  double tau = 0.0;
  double energy = 0.0;              // worst-case over the two basis states
  double product_normalized = 0.0;  // tau * E / (h/4)
  double bound = 0.0;               // 1 + 2*(theta mod pi)/pi
  double gate_error = 0.0;
  bool saturates = false;
};

// Checks a candidate (params, pulse, tau) against the gate conditions for
// theta and against the minimum-time bound.  The reported energy is the
// smaller of the two basis-state averages, which is the assignment most
// capable of undercutting the bound.
inline GateVerification verify_gate(const HamiltonianParams& params,
                                    const PulseProfile& pulse, double tau,
                                    double theta, double tol = 1e-9) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("verification: tolerance must be > 0");
  }
  const double action = pulse.action(tau);
  const Unitary2 u = closed_form_propagator(params, action);

  GateVerification v;
  v.theta = theta;
  v.tau = tau;
  v.gate_error = gate_error(u, theta);
  v.energy = std::min(average_energy(params, pulse, tau, QubitState{1.0, 0.0}),
                      average_energy(params, pulse, tau, QubitState{0.0, 1.0}));
  v.product_normalized = tau * v.energy * (2.0 / pi);
  v.bound = detail::gate_time_factor(theta);
  v.saturates = std::abs(v.product_normalized - v.bound) <= tol;
  return v;
}

}  // namespace qsl
