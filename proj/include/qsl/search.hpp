#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsl/constants.hpp"
#include "qsl/model.hpp"
#include "qsl/propagator.hpp"
#include "qsl/synthesis.hpp"

namespace qsl {

// Undershoot of the bound tolerated in the strict-fidelity regime.  Near
// misses of the gate condition (error up to epsilon) leak a little product
// below the exact-gate minimum; 0.05 absorbs that for epsilon <= 0.01.
inline constexpr double kBoundUndershootTolerance = 0.05;
inline constexpr double kStrictEpsilonLimit = 0.01;

enum class SearchKind { kGate, kRotation };

struct SearchConfig {
  SearchKind kind = SearchKind::kGate;
  double angle = 0.0;        // theta (gate) or alpha (rotation), radians
  double epsilon = 1e-3;     // fidelity tolerance, in (0, 0.5)
  std::int64_t budget = 100000;
  int refine_sweeps = 5;     // coordinate-descent sweeps, step halved each
  std::uint64_t seed = 0;
  bool inject_seed = true;   // include the synthesized saturating candidate
};

// One point of the search space: H0 parameters plus the accumulated action
// F at the gate time.  The pulse shape itself is not searched; dynamics
// depend on it only through F.
struct Candidate {
  HamiltonianParams params;
  double action = 0.0;
};

struct CandidateEval {
  double product = 0.0;     // tau * E in units of h/4
  double gate_error = 0.0;  // Frobenius distance to the target gate
};

struct BoundReport {
  std::string kind;          // "theta" | "alpha"
  double angle = 0.0;
  double bound = 0.0;
  double best_product = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  HamiltonianParams best_params;
  double best_action = std::numeric_limits<double>::quiet_NaN();
  double gate_error = std::numeric_limits<double>::quiet_NaN();
  std::int64_t samples_evaluated = 0;
  std::uint64_t seed = 0;
  bool feasible_found = false;
  bool loose_fidelity = false;
  bool degenerate = false;
  std::vector<double> refinement_trace;  // best product after each sweep
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Explicit engine-to-double mapping so the stream is reproducible
// byte-for-byte (std::uniform_real_distribution is not pinned down by the
// standard).
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double clamp_offdiag(double e12, double e11, double e22) {
  if (e12 < 0.0) e12 = 0.0;
  const double cap = std::sqrt(e11 * e22);
  if (e12 > cap) e12 = cap;
  // sqrt rounds, so the product can still overshoot by an ulp or two
  while (e12 * e12 > e11 * e22) e12 = std::nextafter(e12, 0.0);
  return e12;
}

inline Candidate draw_candidate(std::mt19937_64& rng) {
  const double e11 = 3.0 * (1.0 - uniform01(rng));
  const double e22 = 3.0 * (1.0 - uniform01(rng));
  const double e12 =
      clamp_offdiag(uniform01(rng) * std::sqrt(e11 * e22), e11, e22);
  const double phi = two_pi * uniform01(rng);
  const double action = 4.0 * pi * (1.0 - uniform01(rng));
  return {HamiltonianParams(e11, e22, e12, phi), action};
}

inline constexpr std::int64_t kShardSize = 8192;

}  // namespace detail

inline void validate_config(const SearchConfig& cfg) {
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 0.5)) {
    throw std::invalid_argument("search: epsilon must lie in (0, 0.5)");
  }
  if (cfg.budget < 1) {
    throw std::invalid_argument("search: budget must be >= 1");
  }
  if (cfg.refine_sweeps < 0) {
    throw std::invalid_argument("search: refinement sweeps must be >= 0");
  }
  if (!(cfg.angle >= 0.0)) {
    throw std::invalid_argument("search: angle must be >= 0");
  }
  if (cfg.kind == SearchKind::kRotation && cfg.angle > pi / 2.0 + 1e-3) {
    throw std::invalid_argument("search: alpha must lie in [0, pi/2]");
  }
}

// Deterministic candidate stream for the configured seed.  The budget is
// partitioned into fixed-size shards, each with an independent generator
// derived from the seed, so shards can be evaluated in any order (or
// concurrently) without changing the stream.
inline std::vector<Candidate> sample_candidates(const SearchConfig& cfg) {
  validate_config(cfg);
  std::vector<Candidate> out;
  out.reserve(static_cast<std::size_t>(cfg.budget));
  std::uint64_t seq = cfg.seed;
  for (std::int64_t done = 0; done < cfg.budget;
       done += detail::kShardSize) {
    std::mt19937_64 rng(detail::splitmix64(seq));
    const std::int64_t n = std::min(detail::kShardSize, cfg.budget - done);
    for (std::int64_t i = 0; i < n; ++i) {
      out.push_back(detail::draw_candidate(rng));
    }
  }
  return out;
}

// Normalized time-energy product and gate error of a candidate.  For any
// pulse realizing action F in time tau, tau * E = F * <H0>; the worst case
// over the two basis states is the smaller of e11 and e22, which is the
// assignment most capable of undercutting the bound.
inline CandidateEval evaluate_candidate(const HamiltonianParams& params,
                                        double action, double theta) {
  require_valid(params);
  if (!(action > 0.0)) {
    throw std::invalid_argument("search: action must be > 0");
  }
  const Unitary2 u = closed_form_propagator(params, action);
  return {(2.0 / pi) * action * std::min(params.e11, params.e22),
          gate_error(u, theta)};
}

namespace detail {

// Feasibility metric for the rotation problem: worst deviation of the
// basis-state survival amplitude from cos(alpha).
inline double rotation_deviation(const HamiltonianParams& params,
                                 double action, double alpha) {
  const Unitary2 u = closed_form_propagator(params, action);
  const double target = std::cos(alpha);
  return std::max(std::abs(std::abs(u.u11) - target),
                  std::abs(std::abs(u.u22) - target));
}

struct SearchProblem {
  const char* kind_name;
  double bound;
  std::optional<Candidate> injected;
  // error metric used for feasibility (<= epsilon)
  double (*error)(const HamiltonianParams&, double, double);
  double angle;
};

inline double candidate_product(const Candidate& c) {
  return (2.0 / pi) * c.action * std::min(c.params.e11, c.params.e22);
}

struct Incumbent {
  Candidate candidate;
  double product = std::numeric_limits<double>::quiet_NaN();
  double error = std::numeric_limits<double>::quiet_NaN();
  bool found = false;
};

// Derivative-free coordinate descent over (e11, e22, e12, phi, F): per
// sweep each coordinate takes repeated +/- steps while they both keep the
// candidate feasible and strictly lower the product; steps halve between
// sweeps.  Deterministic, and monotone in the product by construction.
inline void refine(const SearchProblem& prob, double epsilon, int sweeps,
                   Incumbent& inc, std::int64_t& evals,
                   std::vector<double>& trace) {
  if (!inc.found) return;
  double steps[5] = {0.05 * std::max(inc.candidate.params.e11, 0.1),
                     0.05 * std::max(inc.candidate.params.e22, 0.1),
                     0.05 * std::max(inc.candidate.params.e12, 0.1),
                     0.05,
                     0.02 * std::max(inc.candidate.action, 0.1)};
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int coord = 0; coord < 5; ++coord) {
      bool moved = true;
      int guard = 0;
      while (moved && guard++ < 32) {
        moved = false;
        for (double sign : {1.0, -1.0}) {
          Candidate next = inc.candidate;
          double* fields[5] = {&next.params.e11, &next.params.e22,
                               &next.params.e12, &next.params.phi,
                               &next.action};
          *fields[coord] += sign * steps[coord];
          next.params.e11 = std::max(next.params.e11, 1e-9);
          next.params.e22 = std::max(next.params.e22, 1e-9);
          next.params.e12 = clamp_offdiag(
              next.params.e12, next.params.e11, next.params.e22);
          next.params.phi = HamiltonianParams::reduce_phase(next.params.phi);
          next.action = std::max(next.action, 1e-9);

          const double err =
              prob.error(next.params, next.action, prob.angle);
          ++evals;
          if (err > epsilon) continue;
          const double product = candidate_product(next);
          if (product < inc.product) {
            inc.candidate = next;
            inc.product = product;
            inc.error = err;
            moved = true;
            break;
          }
        }
      }
    }
    steps[0] *= 0.5;
    steps[1] *= 0.5;
    steps[2] *= 0.5;
    steps[3] *= 0.5;
    steps[4] *= 0.5;
    trace.push_back(inc.product);
  }
}

inline BoundReport run_search(const SearchConfig& cfg,
                              const SearchProblem& prob) {
  BoundReport report;
  report.kind = prob.kind_name;
  report.angle = cfg.angle;
  report.bound = prob.bound;
  report.seed = cfg.seed;
  report.loose_fidelity = cfg.epsilon > kStrictEpsilonLimit;

  Incumbent inc;
  std::int64_t evals = 0;
  auto consider = [&](const Candidate& c) {
    const double err = prob.error(c.params, c.action, prob.angle);
    ++evals;
    if (err > cfg.epsilon) return;
    const double product = candidate_product(c);
    if (!inc.found || product < inc.product) {
      inc = {c, product, err, true};
    }
  };

  if (prob.injected) consider(*prob.injected);
  for (const Candidate& c : sample_candidates(cfg)) consider(c);

  refine(prob, cfg.epsilon, cfg.refine_sweeps, inc, evals,
         report.refinement_trace);

  report.samples_evaluated = evals;
  report.feasible_found = inc.found;
  if (inc.found) {
    report.best_product = inc.product;
    report.gap = inc.product - prob.bound;
    report.best_params = inc.candidate.params;
    report.best_action = inc.candidate.action;
    report.gate_error = inc.error;
  }
  return report;
}

inline double gate_error_metric(const HamiltonianParams& params,
                                double action, double theta) {
  return gate_error(closed_form_propagator(params, action), theta);
}

}  // namespace detail

// Attempts to beat the gate-time bound: samples the constraint set, keeps
// candidates realizing the gate within epsilon, and refines the best one.
// A bound-saturating synthesized gate is injected as a seed candidate
// unless the config disables it.
inline BoundReport minimize_product(const SearchConfig& cfg) {
  validate_config(cfg);
  if (cfg.kind != SearchKind::kGate) {
    throw std::invalid_argument("minimize_product requires a gate config");
  }
  detail::SearchProblem prob;
  prob.kind_name = "theta";
  prob.bound = detail::gate_time_factor(cfg.angle);
  prob.error = &detail::gate_error_metric;
  prob.angle = cfg.angle;
  if (cfg.inject_seed) {
    const SynthesizedGate g = synthesize_gate({cfg.angle, 1.0, Branch::kAuto});
    prob.injected = Candidate{g.params, g.tau};
  }
  return detail::run_search(cfg, prob);
}

// Same protocol for the known-state rotation by alpha, with feasibility
// | |<psi(tau)|psi(0)>| - cos(alpha) | <= epsilon over the worst initial
// basis state and the bound 2*alpha/pi.
inline BoundReport rotation_search(const SearchConfig& cfg) {
  validate_config(cfg);
  if (cfg.kind != SearchKind::kRotation) {
    throw std::invalid_argument("rotation_search requires a rotation config");
  }
  if (cfg.angle == 0.0) {
    // No evolution needed: the identity at F -> 0 already realizes it.
    BoundReport report;
    report.kind = "alpha";
    report.angle = 0.0;
    report.bound = 0.0;
    report.best_product = 0.0;
    report.gap = 0.0;
    report.best_params = HamiltonianParams(1.0, 1.0, 1.0, 0.0);
    report.best_action = 0.0;
    report.gate_error = 0.0;
    report.seed = cfg.seed;
    report.feasible_found = true;
    report.degenerate = true;
    report.loose_fidelity = cfg.epsilon > kStrictEpsilonLimit;
    return report;
  }
  detail::SearchProblem prob;
  prob.kind_name = "alpha";
  prob.bound = 2.0 * cfg.angle / pi;
  prob.error = &detail::rotation_deviation;
  prob.angle = cfg.angle;
  if (cfg.inject_seed) {
    prob.injected =
        Candidate{HamiltonianParams(1.0, 1.0, 1.0, 0.0), cfg.angle};
  }
  return detail::run_search(cfg, prob);
}

}  // namespace qsl
