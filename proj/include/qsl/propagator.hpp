#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qsl/complex2x2.hpp"
#include "qsl/constants.hpp"
#include "qsl/model.hpp"
#include "qsl/pulse.hpp"

namespace qsl {

// Propagator over coefficient pairs (a1, a2): column i is the evolved
// image of basis state psi_i(0).  Not a raw-basis matrix; see QubitState.
struct Unitary2 {
  cplx u11{1.0, 0.0}, u12{0.0, 0.0};
  cplx u21{0.0, 0.0}, u22{1.0, 0.0};
  double defect = 0.0;  // max-entry magnitude of U^dagger U - I

  Mat2c as_matrix() const { return {u11, u12, u21, u22}; }
};

// Max-entry magnitude of U^dagger U - I.
inline double unitarity_defect(const Unitary2& u) {
  const Mat2c m = u.as_matrix();
  return (m.adjoint() * m - Mat2c::identity()).max_abs();
}

inline Unitary2 make_unitary(cplx u11, cplx u12, cplx u21, cplx u22) {
  Unitary2 u{u11, u12, u21, u22, 0.0};
  u.defect = unitarity_defect(u);
  return u;
}

// Exact propagator at accumulated action F.  Evolution depends on the
// pulse only through F, so this one function covers every pulse shape.
//
// The generic branch parameterizes the eigenvector mixing by the real
// ratios r1 > 0 > r2 with r1*r2 = -1; the sign identity replaces the
// ill-conditioned difference (e22 - e11 -/+ disc) with a reciprocal.
// Below the degeneracy threshold the coefficients decouple and the exact
// diagonal solution is used instead (a1 rides e22, a2 rides e11).
inline Unitary2 closed_form_propagator(const HamiltonianParams& p,
                                       double action) {
  require_valid(p);
  if (!(action >= 0.0)) {
    throw std::invalid_argument("propagator: action must be >= 0");
  }

  const double scale = std::max({p.e11, p.e22, 1.0});
  if (p.e12 < 1e-14 * scale) {
    const cplx d1 = std::polar(1.0, -p.e22 * action);
    const cplx d2 = std::polar(1.0, -p.e11 * action);
    return make_unitary(d1, 0.0, 0.0, d2);
  }

  const double delta = p.e22 - p.e11;
  const double disc = std::hypot(delta, 2.0 * p.e12);
  double r1, r2;
  if (delta >= 0.0) {
    r1 = (delta + disc) / (2.0 * p.e12);
    r2 = -1.0 / r1;
  } else {
    r2 = (delta - disc) / (2.0 * p.e12);
    r1 = -1.0 / r2;
  }

  const double mid = 0.5 * (p.e11 + p.e22);
  const double upper = mid + 0.5 * disc;   // E1, paired with r1
  const double lower = mid - 0.5 * disc;   // E2, paired with r2
  const cplx e1 = std::polar(1.0, -upper * action);
  const cplx e2 = std::polar(1.0, -lower * action);

  const double w = p.e12 / disc;           // 1 / (r1 - r2)
  const cplx phase = std::polar(1.0, p.phi);
  const cplx off = (e1 - e2) * w;

  return make_unitary((r1 * e1 - r2 * e2) * w, std::conj(phase) * off,
                      phase * off, (r1 * e2 - r2 * e1) * w);
}

inline QubitState apply(const Unitary2& u, const QubitState& s) {
  return {u.u11 * s.a1 + u.u12 * s.a2, u.u21 * s.a1 + u.u22 * s.a2};
}

// Matrix product: applying `earlier` first, then `later`.
inline Unitary2 compose(const Unitary2& later, const Unitary2& earlier) {
  const Mat2c m = later.as_matrix() * earlier.as_matrix();
  return make_unitary(m.m00, m.m01, m.m10, m.m11);
}

inline QubitState evolve_closed_form(const HamiltonianParams& p,
                                     const PulseProfile& pulse, double t,
                                     const QubitState& psi0) {
  return apply(closed_form_propagator(p, pulse.action(t)), psi0);
}

namespace detail {

struct Deriv {
  cplx d1, d2;
};

inline Deriv schroedinger_rhs(const HamiltonianParams& p, double f,
                              const QubitState& s) {
  const cplx phase = std::polar(1.0, p.phi);
  const cplx minus_i(0.0, -1.0);
  return {minus_i * f * (p.e22 * s.a1 + p.e12 * std::conj(phase) * s.a2),
          minus_i * f * (p.e12 * phase * s.a1 + p.e11 * s.a2)};
}

inline QubitState rk4_step(const HamiltonianParams& p,
                           const PulseProfile& pulse, double t, double h,
                           const QubitState& s) {
  const auto k1 = schroedinger_rhs(p, pulse.value(t), s);
  const QubitState s2{s.a1 + 0.5 * h * k1.d1, s.a2 + 0.5 * h * k1.d2};
  const double fm = pulse.value(t + 0.5 * h);
  const auto k2 = schroedinger_rhs(p, fm, s2);
  const QubitState s3{s.a1 + 0.5 * h * k2.d1, s.a2 + 0.5 * h * k2.d2};
  const auto k3 = schroedinger_rhs(p, fm, s3);
  const QubitState s4{s.a1 + h * k3.d1, s.a2 + h * k3.d2};
  const auto k4 = schroedinger_rhs(p, pulse.value(t + h), s4);
  return {s.a1 + h / 6.0 * (k1.d1 + 2.0 * k2.d1 + 2.0 * k3.d1 + k4.d1),
          s.a2 + h / 6.0 * (k1.d2 + 2.0 * k2.d2 + 2.0 * k3.d2 + k4.d2)};
}

}  // namespace detail

// Fixed-step classical RK4 integration of the coefficient equations.
// Independent of the closed form; used to cross-validate it.  The step
// budget is distributed over the pulse's smooth segments (steps never
// straddle a breakpoint, which would spoil the 4th-order convergence);
// the total is approximately `steps`.  Doubling `steps` reduces the error
// against the closed form by ~16x in the asymptotic regime.
inline QubitState evolve_ode_oracle(const HamiltonianParams& p,
                                    const PulseProfile& pulse, double t,
                                    const QubitState& psi0,
                                    std::int64_t steps) {
  require_valid(p);
  if (steps < 1) {
    throw std::invalid_argument("ode oracle: step count must be >= 1");
  }
  if (!(t >= 0.0) || t > pulse.domain_end()) {
    throw std::domain_error("ode oracle: time outside the pulse domain");
  }
  if (t == 0.0) return psi0;

  std::vector<double> edges = pulse.smoothness_breaks(t);
  edges.insert(edges.begin(), 0.0);
  edges.push_back(t);

  QubitState s = psi0;
  for (std::size_t k = 1; k < edges.size(); ++k) {
    const double a = edges[k - 1];
    const double b = edges[k];
    const double len = b - a;
    if (!(len > 0.0)) continue;
    const auto n = std::max<std::int64_t>(
        1, std::llround(static_cast<double>(steps) * len / t));
    const double h = len / static_cast<double>(n);
    for (std::int64_t i = 0; i < n; ++i) {
      s = detail::rk4_step(p, pulse, a + static_cast<double>(i) * h, h, s);
    }
  }
  return s;
}

// Time average of <psi(t)|H(t)|psi(t)> over [0, tau].  Since H(t) is
// proportional to H0, <H0> is conserved and the average collapses to
// <psi0|H0|psi0> * F(tau)/tau; that exact form is returned.  The integral
// is also evaluated by quadrature over the closed-form trajectory and the
// two routes are required to agree.
inline double average_energy(const HamiltonianParams& p,
                             const PulseProfile& pulse, double tau,
                             const QubitState& psi0) {
  require_valid(p);
  if (!(tau > 0.0)) {
    throw std::domain_error("average energy: duration must be > 0");
  }

  const double conserved = expectation_h0(p, psi0);
  const double exact = conserved * pulse.action(tau) / tau;

  std::vector<double> edges = pulse.smoothness_breaks(tau);
  edges.insert(edges.begin(), 0.0);
  edges.push_back(tau);
  double integral = 0.0;
  const double tol =
      1e-12 * std::max(1.0, std::abs(exact) * tau) / edges.size();
  for (std::size_t k = 1; k < edges.size(); ++k) {
    integral += detail::adaptive_simpson(
        [&](double t) {
          return pulse.value(t) *
                 expectation_h0(p, evolve_closed_form(p, pulse, t, psi0));
        },
        edges[k - 1], edges[k], tol);
  }
  const double quadrature = integral / tau;

  if (std::abs(quadrature - exact) > 1e-9 * std::max(1.0, std::abs(exact))) {
    throw std::logic_error("average energy: quadrature route disagrees "
                           "with the conserved-expectation route");
  }
  return exact;
}

// Trajectory samples on a uniform time grid (closed-form evolution).
struct EvolutionRecord {
  std::vector<double> times;
  std::vector<QubitState> states;
  std::vector<double> actions;
  std::vector<double> energies;  // <H0>, constant along the record
};

inline EvolutionRecord sample_trajectory(const HamiltonianParams& p,
                                         const PulseProfile& pulse,
                                         double t_final,
                                         const QubitState& psi0,
                                         std::size_t points) {
  require_valid(p);
  if (points < 1) {
    throw std::invalid_argument("trajectory: need at least one point");
  }
  EvolutionRecord rec;
  const std::size_t n = t_final == 0.0 ? 1 : points;
  for (std::size_t i = 0; i < n; ++i) {
    const double t =
        n == 1 ? 0.0
               : t_final * static_cast<double>(i) / static_cast<double>(n - 1);
    const double action = pulse.action(t);
    const QubitState s = apply(closed_form_propagator(p, action), psi0);
    rec.times.push_back(t);
    rec.states.push_back(s);
    rec.actions.push_back(action);
    rec.energies.push_back(expectation_h0(p, s));
  }
  return rec;
}

}  // namespace qsl
