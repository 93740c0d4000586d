#pragma once

#include <cmath>

#include "tsbvp/error.hpp"

namespace tsbvp {

/// A p-Laplacian exponent together with its Hoelder conjugate q = p / (p - 1).
class PExponent {
 public:
  explicit PExponent(double p) : p_(p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidExponent, "p must be a finite real > 1");
    q_ = p / (p - 1.0);
  }

  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }

 private:
  double p_;
  double q_;
};

/// phi_p(s) = |s|^(p-2) s, extended by continuity with phi_p(0) = 0.
inline double phi(double s, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidExponent, "p must be a finite real > 1");
  if (s == 0.0) return 0.0;
  if (p == 2.0) return s;
  return std::copysign(std::pow(std::abs(s), p - 1.0), s);
}

/// Inverse of phi_p, i.e. phi_q with q the conjugate exponent.
inline double phi_inverse(double s, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidExponent, "p must be a finite real > 1");
  return phi(s, p / (p - 1.0));
}

inline double phi(double s, const PExponent& e) { return phi(s, e.p()); }
inline double phi_inverse(double s, const PExponent& e) { return phi(s, e.q()); }

}  // namespace tsbvp
