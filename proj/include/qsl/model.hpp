#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsl/complex2x2.hpp"
#include "qsl/constants.hpp"
#include "qsl/pulse.hpp"

namespace qsl {

// Static part H0 of the drive H(t) = f(t) * H0, in natural units.  The
// off-diagonal element is stored as magnitude e12 >= 0 and phase phi, so
// H0 = [[e11, e12 e^{i phi}], [e12 e^{-i phi}, e22]].
struct HamiltonianParams {
  double e11 = 0.0;
  double e22 = 0.0;
  double e12 = 0.0;
  double phi = 0.0;

  HamiltonianParams() = default;
  HamiltonianParams(double e11_, double e22_, double e12_, double phi_)
      : e11(e11_), e22(e22_), e12(e12_), phi(reduce_phase(phi_)) {}

  // Phase canonical form: [0, 2*pi).
  static double reduce_phase(double phi) {
    double r = std::fmod(phi, two_pi);
    if (r < 0.0) r += two_pi;
    return r;
  }
};

struct ValidationVerdict {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks nonnegative-definiteness of H0 plus the e12 >= 0 canonical form.
// Never throws; the verdict names every violated constraint.
inline ValidationVerdict validate(const HamiltonianParams& p) {
  ValidationVerdict v;
  if (!(p.e11 >= 0.0)) v.violations.push_back("e11-nonnegative");
  if (!(p.e22 >= 0.0)) v.violations.push_back("e22-nonnegative");
  if (!(p.e12 >= 0.0)) v.violations.push_back("e12-nonnegative");
  if (!(p.e11 * p.e22 - p.e12 * p.e12 >= 0.0)) {
    v.violations.push_back("determinant-nonnegative");
  }
  return v;
}

inline void require_valid(const HamiltonianParams& p) {
  const auto verdict = validate(p);
  if (!verdict.ok()) {
    std::string msg = "invalid Hamiltonian parameters:";
    for (const auto& name : verdict.violations) msg += " " + name;
    throw std::invalid_argument(msg);
  }
}

struct Eigenvalues {
  double upper = 0.0;  // E1
  double lower = 0.0;  // E2 <= E1
};

// Eigenvalues of H0.  The larger root is computed from the trace and the
// discriminant, the smaller from det/E1 to avoid cancellation (cf. the
// usual 2x2 symmetric eigensolver trick).
inline Eigenvalues eigenvalues(const HamiltonianParams& p) {
  require_valid(p);
  const double mid = 0.5 * (p.e11 + p.e22);
  const double disc = std::hypot(p.e11 - p.e22, 2.0 * p.e12);
  const double upper = mid + 0.5 * disc;
  const double det = p.e11 * p.e22 - p.e12 * p.e12;
  const double lower = upper > 0.0 ? det / upper : 0.0;
  return {upper, lower};
}

// H(t) = f(t) * H0 in the raw basis ordering of the matrix above.
// Hermitian by construction: the (1,0) entry is the conjugate of (0,1).
inline Mat2c hamiltonian_at(const HamiltonianParams& p,
                            const PulseProfile& pulse, double t) {
  require_valid(p);
  const double f = pulse.value(t);
  const cplx off = p.e12 * std::polar(1.0, p.phi);
  return {f * p.e11, f * off, f * std::conj(off), f * p.e22};
}

// Accumulated action F(t) of the pulse.
inline double accumulated_action(const PulseProfile& pulse, double t) {
  return pulse.action(t);
}

// Coefficient pair (a1, a2) over the fixed basis psi_1(0), psi_2(0); the
// basis vectors are the columns (0,1) and (1,0), so a1 rides the e22 row
// of H0 and a2 the e11 row.
struct QubitState {
  cplx a1{1.0, 0.0};
  cplx a2{0.0, 0.0};

  double norm() const { return std::sqrt(std::norm(a1) + std::norm(a2)); }
};

// <psi|H0|psi> for a coefficient pair; conserved along any trajectory of
// H(t) = f(t) H0.
inline double expectation_h0(const HamiltonianParams& p,
                             const QubitState& s) {
  const double diag = p.e22 * std::norm(s.a1) + p.e11 * std::norm(s.a2);
  const double cross =
      2.0 * p.e12 *
      std::real(std::polar(1.0, p.phi) * std::conj(s.a2) * s.a1);
  return diag + cross;
}

}  // namespace qsl
