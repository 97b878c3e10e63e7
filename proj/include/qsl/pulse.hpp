#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qsl {

namespace detail {

// Adaptive Simpson quadrature with absolute tolerance, Richardson-corrected.
template <class F>
double simpson_rec(const F& f, double a, double b, double fa, double fm,
                   double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const double fa = f(a);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace detail

struct ConstantPulse {
  double value = 1.0;
};

// values[i] holds on [edge_{i-1}, edge_i) with edge_{-1} = 0; the last
// breakpoint closes the domain.
struct PiecewisePulse {
  std::vector<double> breakpoints;
  std::vector<double> values;
};

// Samples on a strictly increasing grid starting at 0, linearly interpolated.
struct SampledPulse {
  std::vector<double> times;
  std::vector<double> values;
};

// Positive modulation f(t) of the drive, together with its accumulated
// action F(t) = \int_0^t f.  f > 0 is enforced at construction, which makes
// F strictly increasing on the domain.
class PulseProfile {
 public:
  using Shape = std::variant<ConstantPulse, PiecewisePulse, SampledPulse>;

  static PulseProfile constant(double value) {
    if (!(value > 0.0)) {
      throw std::invalid_argument("pulse: constant value must be > 0");
    }
    return PulseProfile(ConstantPulse{value});
  }

  static PulseProfile piecewise(std::vector<double> breakpoints,
                                std::vector<double> values) {
    if (breakpoints.empty() || breakpoints.size() != values.size()) {
      throw std::invalid_argument(
          "pulse: piecewise needs equally many breakpoints and values");
    }
    double prev = 0.0;
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
      if (!(breakpoints[i] > prev)) {
        throw std::invalid_argument(
            "pulse: breakpoints must be strictly increasing and positive");
      }
      if (!(values[i] > 0.0)) {
        throw std::invalid_argument("pulse: piecewise values must be > 0");
      }
      prev = breakpoints[i];
    }
    return PulseProfile(PiecewisePulse{std::move(breakpoints), std::move(values)});
  }

  static PulseProfile sampled(std::vector<double> times,
                              std::vector<double> values) {
    if (times.size() < 2 || times.size() != values.size()) {
      throw std::invalid_argument(
          "pulse: sampled needs >= 2 nodes and equally many values");
    }
    if (times.front() != 0.0) {
      throw std::invalid_argument("pulse: sampled grid must start at t = 0");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (i > 0 && !(times[i] > times[i - 1])) {
        throw std::invalid_argument(
            "pulse: sampled grid must be strictly increasing");
      }
      if (!(values[i] > 0.0)) {
        throw std::invalid_argument("pulse: sampled values must be > 0");
      }
    }
    return PulseProfile(SampledPulse{std::move(times), std::move(values)});
  }

  const Shape& shape() const { return shape_; }

  // End of the definition domain; constant pulses extend indefinitely.
  double domain_end() const {
    if (std::holds_alternative<ConstantPulse>(shape_)) {
      return std::numeric_limits<double>::infinity();
    }
    if (const auto* pw = std::get_if<PiecewisePulse>(&shape_)) {
      return pw->breakpoints.back();
    }
    return std::get<SampledPulse>(shape_).times.back();
  }

  double value(double t) const {
    check_domain(t);
    if (const auto* c = std::get_if<ConstantPulse>(&shape_)) {
      return c->value;
    }
    if (const auto* pw = std::get_if<PiecewisePulse>(&shape_)) {
      const auto it = std::upper_bound(pw->breakpoints.begin(),
                                       pw->breakpoints.end(), t);
      const std::size_t idx =
          std::min<std::size_t>(it - pw->breakpoints.begin(),
                                pw->values.size() - 1);
      return pw->values[idx];
    }
    const auto& s = std::get<SampledPulse>(shape_);
    const auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
    if (it == s.times.end()) return s.values.back();
    const std::size_t hi = it - s.times.begin();
    if (hi == 0) return s.values.front();
    const double t0 = s.times[hi - 1], t1 = s.times[hi];
    const double w = (t - t0) / (t1 - t0);
    return s.values[hi - 1] + w * (s.values[hi] - s.values[hi - 1]);
  }

  // Accumulated action F(t).  Closed form for constant and piecewise
  // shapes; adaptive quadrature (abs tol 1e-12) per segment for sampled.
  double action(double t) const {
    check_domain(t);
    if (const auto* c = std::get_if<ConstantPulse>(&shape_)) {
      return c->value * t;
    }
    if (const auto* pw = std::get_if<PiecewisePulse>(&shape_)) {
      const auto it = std::lower_bound(pw->breakpoints.begin(),
                                       pw->breakpoints.end(), t);
      const std::size_t idx = it - pw->breakpoints.begin();
      const double seg_start = idx == 0 ? 0.0 : pw->breakpoints[idx - 1];
      const double base = idx == 0 ? 0.0 : prefix_[idx - 1];
      const std::size_t vidx = std::min(idx, pw->values.size() - 1);
      return base + pw->values[vidx] * (t - seg_start);
    }
    const auto& s = std::get<SampledPulse>(shape_);
    double acc = 0.0;
    const double tol = 1e-12 / static_cast<double>(s.times.size());
    for (std::size_t i = 1; i < s.times.size(); ++i) {
      const double hi = std::min(t, s.times[i]);
      const double lo = s.times[i - 1];
      if (hi <= lo) break;
      acc += detail::adaptive_simpson(
          [this](double x) { return value(x); }, lo, hi, tol);
    }
    return acc;
  }

  // Interior points where f loses smoothness, restricted to (0, t).
  // Used by integrators to keep every step inside a smooth segment.
  std::vector<double> smoothness_breaks(double t) const {
    std::vector<double> out;
    auto collect = [&](const std::vector<double>& pts) {
      for (double p : pts) {
        if (p > 0.0 && p < t) out.push_back(p);
      }
    };
    if (const auto* pw = std::get_if<PiecewisePulse>(&shape_)) {
      collect(pw->breakpoints);
    } else if (const auto* s = std::get_if<SampledPulse>(&shape_)) {
      collect(s->times);
    }
    return out;
  }

 private:
  explicit PulseProfile(Shape shape) : shape_(std::move(shape)) {
    if (const auto* pw = std::get_if<PiecewisePulse>(&shape_)) {
      ensure_prefix(*pw);
    }
  }

  void check_domain(double t) const {
    if (!(t >= 0.0) || t > domain_end()) {
      throw std::domain_error("pulse: time " + std::to_string(t) +
                              " outside the pulse domain");
    }
  }

  void ensure_prefix(const PiecewisePulse& pw) {
    if (!prefix_.empty()) return;
    prefix_.resize(pw.breakpoints.size());
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < pw.breakpoints.size(); ++i) {
      acc += pw.values[i] * (pw.breakpoints[i] - prev);
      prev = pw.breakpoints[i];
      prefix_[i] = acc;
    }
  }

  Shape shape_;
  std::vector<double> prefix_;  // piecewise: F at each breakpoint
};

}  // namespace qsl
