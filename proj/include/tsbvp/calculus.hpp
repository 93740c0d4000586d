#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "tsbvp/error.hpp"
#include "tsbvp/timescale.hpp"

namespace tsbvp {

/// Values carried by the grid of a history time scale on [-r, 0].
struct History {
  TimeScalePtr ts;
  std::vector<double> values;
};

/// Real samples attached to every grid point of a time scale.
class GridFunction {
 public:
  GridFunction() = default;

  GridFunction(TimeScalePtr ts, std::vector<double> values) : ts_(std::move(ts)), values_(std::move(values)) {
    if (!ts_) throw Error(ErrorCode::InvalidArgument, "grid function without a time scale");
    if (values_.size() != ts_->size()) {
      throw Error(ErrorCode::InvalidArgument, "grid function length does not match the grid");
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "grid function value is not finite");
    }
  }

  template <class Fn>
  static GridFunction sample(TimeScalePtr ts, Fn&& fn) {
    std::vector<double> v(ts->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn((*ts)[i]);
    return GridFunction(std::move(ts), std::move(v));
  }

  static GridFunction constant(TimeScalePtr ts, double c) {
    std::vector<double> v(ts->size(), c);
    return GridFunction(std::move(ts), std::move(v));
  }

  const TimeScale& timescale() const { return *ts_; }
  const TimeScalePtr& timescale_ptr() const { return ts_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::span<const double> span() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  const std::optional<History>& history() const noexcept { return history_; }
  void set_history(History h) {
    if (!h.ts || h.values.size() != h.ts->size()) {
      throw Error(ErrorCode::InvalidArgument, "history length does not match its grid");
    }
    if (std::abs(h.ts->tmax()) > 1e-12) throw Error(ErrorCode::InvalidArgument, "history grid must end at 0");
    history_ = std::move(h);
  }

  /// max |u(t)| over the grid.
  double norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  /// Value at an arbitrary x in [tmin, tmax]; linear across a gap.
  double value_at(double x) const {
    const auto& ts = *ts_;
    if (ts.size() == 1) return values_[0];
    const std::size_t i = ts.gap_index(x);
    const double w = (x - ts[i]) / ts.gap(i);
    return values_[i] + w * (values_[i + 1] - values_[i]);
  }

 private:
  TimeScalePtr ts_;
  std::vector<double> values_;
  std::optional<History> history_;
};

inline double sup_distance(const GridFunction& u, const GridFunction& v) {
  if (u.size() != v.size()) throw Error(ErrorCode::InvalidArgument, "grid functions on different grids");
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i] - v[i]));
  return m;
}

namespace detail {

// Contribution of gap i: trapezoid on dense gaps, left (delta) or right
// (nabla) endpoint times the graininess on jumps.
inline double delta_gap(const TimeScale& ts, std::span<const double> u, std::size_t i) {
  const double h = ts.gap(i);
  return ts.dense_gap(i) ? 0.5 * (u[i] + u[i + 1]) * h : u[i] * h;
}

inline double nabla_gap(const TimeScale& ts, std::span<const double> u, std::size_t i) {
  const double h = ts.gap(i);
  return ts.dense_gap(i) ? 0.5 * (u[i] + u[i + 1]) * h : u[i + 1] * h;
}

// Integral from grid[i] to x inside gap i.
inline double partial_gap(const TimeScale& ts, std::span<const double> u, std::size_t i, double x, bool nabla) {
  const double len = x - ts[i];
  if (len <= 0.0) return 0.0;
  if (ts.dense_gap(i)) {
    const double ux = u[i] + (u[i + 1] - u[i]) * len / ts.gap(i);
    return 0.5 * (u[i] + ux) * len;
  }
  return (nabla ? u[i + 1] : u[i]) * len;
}

// Finite-difference reach for dense points with no dense neighbour
// (accumulation points of discrete families).
inline double accumulation_step(double t) { return std::sqrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(t)); }

inline double integrate(const GridFunction& u, double a, double b, bool nabla) {
  const auto& ts = u.timescale();
  const std::size_t ia = ts.index_of(a);
  const std::size_t ib = ts.index_of(b);
  if (ia > ib) throw Error(ErrorCode::ReversedBounds, "lower limit exceeds upper limit");
  double sum = 0.0;
  for (std::size_t i = ia; i < ib; ++i) sum += nabla ? nabla_gap(ts, u.span(), i) : delta_gap(ts, u.span(), i);
  return sum;
}

inline std::vector<double> prefix(const TimeScale& ts, std::span<const double> u, bool nabla) {
  std::vector<double> c(ts.size(), 0.0);
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) c[i + 1] = c[i] + (nabla ? nabla_gap(ts, u, i) : delta_gap(ts, u, i));
  return c;
}

inline std::vector<double> suffix(const TimeScale& ts, std::span<const double> u, bool nabla) {
  std::vector<double> c(ts.size(), 0.0);
  for (std::size_t i = ts.size() - 1; i > 0; --i) c[i - 1] = c[i] + (nabla ? nabla_gap(ts, u, i - 1) : delta_gap(ts, u, i - 1));
  return c;
}

inline double extended(const TimeScale& ts, std::span<const double> u, const std::vector<double>& cum, double x, bool nabla) {
  const std::size_t i = ts.gap_index(x);
  if (ts.size() == 1) return 0.0;
  return cum[i] + partial_gap(ts, u, i, x, nabla);
}

}  // namespace detail

/// Delta derivative at grid point t.
///
/// Right-scattered points use the jump quotient to sigma(t). Right-dense
/// interior interval nodes use a central difference, interval left ends a
/// forward one. A right-dense accumulation point uses the first successor at
/// least sqrt(eps) away so the quotient is not swamped by rounding.
inline double delta_derivative(const GridFunction& u, double t) {
  const auto& ts = u.timescale();
  const std::size_t i = ts.index_of(t);
  if (i + 1 == ts.size()) throw Error(ErrorCode::UndefinedAtBoundary, "delta derivative at the maximum");
  if (!ts.right_dense(i) || !ts.dense_gap(i)) {
    std::size_t j = i + 1;
    if (ts.right_dense(i)) {
      const double reach = detail::accumulation_step(t);
      while (j + 1 < ts.size() && ts[j] - ts[i] < reach) ++j;
    }
    return (u[j] - u[i]) / (ts[j] - ts[i]);
  }
  if (i > 0 && ts.dense_gap(i - 1)) return (u[i + 1] - u[i - 1]) / (ts[i + 1] - ts[i - 1]);
  return (u[i + 1] - u[i]) / ts.gap(i);
}

/// Nabla derivative at grid point t; mirror image of delta_derivative.
inline double nabla_derivative(const GridFunction& u, double t) {
  const auto& ts = u.timescale();
  const std::size_t i = ts.index_of(t);
  if (i == 0) throw Error(ErrorCode::UndefinedAtBoundary, "nabla derivative at the minimum");
  if (!ts.left_dense(i) || !ts.dense_gap(i - 1)) {
    std::size_t j = i - 1;
    if (ts.left_dense(i)) {
      const double reach = detail::accumulation_step(t);
      while (j > 0 && ts[i] - ts[j] < reach) --j;
    }
    return (u[i] - u[j]) / (ts[i] - ts[j]);
  }
  if (i + 1 < ts.size() && ts.dense_gap(i)) return (u[i + 1] - u[i - 1]) / (ts[i + 1] - ts[i - 1]);
  return (u[i] - u[i - 1]) / ts.gap(i - 1);
}

/// Delta integral over [a, b]; both limits must be grid points with a <= b.
inline double delta_integral(const GridFunction& u, double a, double b) { return detail::integrate(u, a, b, false); }

/// Nabla integral over [a, b]; both limits must be grid points with a <= b.
inline double nabla_integral(const GridFunction& u, double a, double b) { return detail::integrate(u, a, b, true); }

/// t -> integral of u over [tmin, t] (delta).
inline GridFunction cumulative_delta_integral(const GridFunction& u) {
  return GridFunction(u.timescale_ptr(), detail::prefix(u.timescale(), u.span(), false));
}

/// t -> integral of u over [tmin, t] (nabla).
inline GridFunction cumulative_nabla_integral(const GridFunction& u) {
  return GridFunction(u.timescale_ptr(), detail::prefix(u.timescale(), u.span(), true));
}

/// t -> integral of u over [t, tmax] (nabla), accumulated from the right.
inline GridFunction suffix_nabla_integral(const GridFunction& u) {
  return GridFunction(u.timescale_ptr(), detail::suffix(u.timescale(), u.span(), true));
}

/// Delta integral between arbitrary reals in [tmin, tmax].
///
/// A limit that falls inside a jump integrates the step extension of u, so
/// the measure of [tmin, x] is always x - tmin.
inline double delta_integral_extended(const GridFunction& u, double a, double b) {
  if (a > b) throw Error(ErrorCode::ReversedBounds, "lower limit exceeds upper limit");
  const auto& ts = u.timescale();
  const auto cum = detail::prefix(ts, u.span(), false);
  return detail::extended(ts, u.span(), cum, b, false) - detail::extended(ts, u.span(), cum, a, false);
}

inline double nabla_integral_extended(const GridFunction& u, double a, double b) {
  if (a > b) throw Error(ErrorCode::ReversedBounds, "lower limit exceeds upper limit");
  const auto& ts = u.timescale();
  const auto cum = detail::prefix(ts, u.span(), true);
  return detail::extended(ts, u.span(), cum, b, true) - detail::extended(ts, u.span(), cum, a, true);
}

/// Per-point weights w with sum_i w_i u_i equal to the nabla integral over the whole grid.
inline std::vector<double> nabla_weights(const TimeScale& ts) {
  std::vector<double> w(ts.size(), 0.0);
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double h = ts.gap(i);
    if (ts.dense_gap(i)) {
      w[i] += 0.5 * h;
      w[i + 1] += 0.5 * h;
    } else {
      w[i + 1] += h;
    }
  }
  return w;
}

}  // namespace tsbvp
