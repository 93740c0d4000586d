#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "tsbvp/error.hpp"

namespace tsbvp {

/// Polynomial in x with coefficients c0 + c1 x + c2 x^2 + c3 x^3.
struct Polynomial {
  std::vector<double> coeffs;

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  /// Real stationary points (roots of the derivative).
  std::vector<double> critical_points() const {
    const double c1 = coeffs.size() > 1 ? coeffs[1] : 0.0;
    const double c2 = coeffs.size() > 2 ? coeffs[2] : 0.0;
    const double c3 = coeffs.size() > 3 ? coeffs[3] : 0.0;
    // derivative: c1 + 2 c2 x + 3 c3 x^2
    std::vector<double> roots;
    if (c3 != 0.0) {
      const double qa = 3.0 * c3, qb = 2.0 * c2, qc = c1;
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc < 0.0) return roots;
      const double sq = std::sqrt(disc);
      // Numerically stable pair.
      const double t = -0.5 * (qb + std::copysign(sq, qb));
      if (t != 0.0) {
        roots.push_back(t / qa);
        roots.push_back(qc / t);
      } else {
        roots.push_back(0.0);
      }
    } else if (c2 != 0.0) {
      roots.push_back(-c1 / (2.0 * c2));
    }
    return roots;
  }
};

enum class Extrapolation { ClampEnds, Extend, Error };

/// Piecewise polynomial (degree <= 3) over sorted breakpoints.
///
/// Piece k lives on [bp[k], bp[k+1]]; at an interior breakpoint the right
/// piece wins. Outside the breakpoint range the extrapolation mode decides.
class PiecewiseFunction {
 public:
  PiecewiseFunction() = default;

  PiecewiseFunction(std::vector<double> breakpoints, std::vector<Polynomial> pieces,
                    Extrapolation mode = Extrapolation::ClampEnds)
      : bp_(std::move(breakpoints)), pieces_(std::move(pieces)), mode_(mode) {
    if (bp_.size() < 2 || pieces_.size() + 1 != bp_.size()) {
      throw Error(ErrorCode::InvalidArgument, "piecewise function needs n+1 breakpoints for n pieces");
    }
    for (std::size_t i = 1; i < bp_.size(); ++i) {
      if (!(bp_[i] > bp_[i - 1])) throw Error(ErrorCode::InvalidArgument, "breakpoints must increase strictly");
    }
    for (const auto& p : pieces_) {
      if (p.coeffs.empty() || p.coeffs.size() > 4) throw Error(ErrorCode::InvalidArgument, "piece degree must be 0..3");
      for (double c : p.coeffs) {
        if (!std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "non-finite coefficient");
      }
    }
    for (std::size_t k = 1; k < pieces_.size(); ++k) {
      const double x = bp_[k];
      const double jump = std::abs(pieces_[k - 1](x) - pieces_[k](x));
      if (jump > 1e-9 * std::max(1.0, std::abs(pieces_[k](x)))) {
        warnings_.push_back("discontinuity of size " + std::to_string(jump) + " at x = " + std::to_string(x));
      }
    }
  }

  static PiecewiseFunction constant(double c, double lo = 0.0, double hi = 1.0,
                                    Extrapolation mode = Extrapolation::ClampEnds) {
    return PiecewiseFunction({lo, hi}, {Polynomial{{c}}}, mode);
  }

  /// Affine c0 + c1 x on [lo, hi], extended linearly beyond.
  static PiecewiseFunction affine(double c0, double c1, double lo, double hi) {
    return PiecewiseFunction({lo, hi}, {Polynomial{{c0, c1}}}, Extrapolation::Extend);
  }

  const std::vector<double>& breakpoints() const noexcept { return bp_; }
  const std::vector<Polynomial>& pieces() const noexcept { return pieces_; }
  Extrapolation extrapolation() const noexcept { return mode_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  bool continuous() const noexcept { return warnings_.empty(); }

  double lo() const { return bp_.front(); }
  double hi() const { return bp_.back(); }

  double operator()(double x) const {
    if (x < lo() || x > hi()) {
      switch (mode_) {
        case Extrapolation::ClampEnds:
          x = std::clamp(x, lo(), hi());
          break;
        case Extrapolation::Extend:
          return (x < lo() ? pieces_.front() : pieces_.back())(x);
        case Extrapolation::Error:
          throw Error(ErrorCode::InvalidArgument, "piecewise function evaluated outside its breakpoints");
      }
    }
    return pieces_[piece_index(x)](x);
  }

  /// Exact min and max over [a, b]: endpoints, breakpoints and stationary
  /// points of every piece meeting the range are the only candidates.
  std::pair<double, double> extrema(double a, double b) const {
    if (a > b) throw Error(ErrorCode::ReversedBounds, "extrema over reversed range");
    std::vector<double> cand{a, b};
    for (double x : bp_) {
      if (x > a && x < b) cand.push_back(x);
    }
    auto add_stationary = [&](const Polynomial& p, double lo, double hi) {
      for (double r : p.critical_points()) {
        if (r > lo && r < hi) cand.push_back(r);
      }
    };
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
      const double plo = std::max(a, bp_[k]);
      const double phi = std::min(b, bp_[k + 1]);
      if (plo < phi) add_stationary(pieces_[k], plo, phi);
    }
    if (mode_ == Extrapolation::Extend) {
      if (a < lo()) add_stationary(pieces_.front(), a, std::min(b, lo()));
      if (b > hi()) add_stationary(pieces_.back(), std::max(a, hi()), b);
    }
    double mn = (*this)(cand[0]);
    double mx = mn;
    for (double x : cand) {
      // Both one-sided values at a breakpoint count.
      for (double v : values_at(x, x > a)) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
    }
    return {mn, mx};
  }

  double min_over(double a, double b) const { return extrema(a, b).first; }
  double max_over(double a, double b) const { return extrema(a, b).second; }

 private:
  std::size_t piece_index(double x) const {
    auto it = std::upper_bound(bp_.begin(), bp_.end(), x);
    std::size_t k = static_cast<std::size_t>(it - bp_.begin());
    k = (k == 0) ? 0 : k - 1;
    return std::min(k, pieces_.size() - 1);
  }

  std::vector<double> values_at(double x, bool with_left_limit) const {
    std::vector<double> out{(*this)(x)};
    for (std::size_t k = 1; k < pieces_.size() && with_left_limit; ++k) {
      if (bp_[k] == x) out.push_back(pieces_[k - 1](x));
    }
    return out;
  }

  std::vector<double> bp_;
  std::vector<Polynomial> pieces_;
  Extrapolation mode_ = Extrapolation::ClampEnds;
  std::vector<std::string> warnings_;
};

/// f(x1, x2) = g(c1 x1 + c2 x2) with c1, c2 >= 0.
struct CompositeBivariate {
  PiecewiseFunction g;
  double c1 = 1.0;
  double c2 = 0.0;

  double operator()(double x1, double x2) const { return g(c1 * x1 + c2 * x2); }
};

}  // namespace tsbvp
