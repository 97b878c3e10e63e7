#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace qsl {

using cplx = std::complex<double>;

// Minimal dense 2x2 complex matrix. Entry mRC = row R, column C.
struct Mat2c {
  cplx m00, m01, m10, m11;

  static Mat2c identity() { return {1.0, 0.0, 0.0, 1.0}; }

  Mat2c adjoint() const {
    return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)};
  }

  cplx det() const { return m00 * m11 - m01 * m10; }

  double max_abs() const {
    return std::max(std::max(std::abs(m00), std::abs(m01)),
                    std::max(std::abs(m10), std::abs(m11)));
  }
};

inline Mat2c operator*(const Mat2c& a, const Mat2c& b) {
  return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
          a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}

inline Mat2c operator-(const Mat2c& a, const Mat2c& b) {
  return {a.m00 - b.m00, a.m01 - b.m01, a.m10 - b.m10, a.m11 - b.m11};
}

inline double frobenius_norm(const Mat2c& a) {
  return std::sqrt(std::norm(a.m00) + std::norm(a.m01) + std::norm(a.m10) +
                   std::norm(a.m11));
}

}  // namespace qsl
