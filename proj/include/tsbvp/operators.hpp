#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "tsbvp/calculus.hpp"
#include "tsbvp/error.hpp"
#include "tsbvp/piecewise.hpp"
#include "tsbvp/plaplacian.hpp"
#include "tsbvp/timescale.hpp"

namespace tsbvp {

/// A fixed-point map on grid functions.
using OperatorFn = std::function<GridFunction(const GridFunction&)>;

/// Below this the thermistor normalising integral counts as zero.
inline constexpr double kDegenerateDenominator = 1e-14;

/// Nonlocal thermistor problem:
///   -(phi_p(u^D))^N = lambda f(u) / (int_0^T f(u) N)^2,
///   phi_p(u^D(0)) = beta phi_p(u^D(eta)),  u(T) = beta u(eta).
///
/// eta may fall inside a jump of the time scale; integrals up to eta then use
/// the step extension of the integrand.
struct ThermistorSpec {
  TimeScalePtr ts;
  PiecewiseFunction f;
  double lambda = 1.0;
  double beta = 0.5;
  double eta = 0.5;
  PExponent p{2.0};

  double T() const { return ts->tmax(); }

  void validate() const {
    if (!ts) throw Error(ErrorCode::InvalidArgument, "thermistor: missing time scale");
    if (ts->tmin() != 0.0) throw Error(ErrorCode::InvalidArgument, "thermistor: time scale must start at 0");
    if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "thermistor: lambda must be positive");
    if (!(beta > 0.0 && beta < 1.0)) throw Error(ErrorCode::InvalidArgument, "thermistor: beta must lie in (0,1)");
    if (!(eta > 0.0 && eta < T())) throw Error(ErrorCode::InvalidArgument, "thermistor: eta must lie in (0,T)");
  }
};

/// Quasilinear problem -(phi_p(u^D))^N = f(u) + h(t).
struct QuasilinearSpec {
  TimeScalePtr ts;
  PiecewiseFunction f;
  PiecewiseFunction h = PiecewiseFunction::constant(0.0);
  double eta = 0.5;
  PExponent p{2.0};

  double T() const { return ts->tmax(); }

  void validate() const {
    if (!ts) throw Error(ErrorCode::InvalidArgument, "quasilinear: missing time scale");
    if (ts->tmin() != 0.0) throw Error(ErrorCode::InvalidArgument, "quasilinear: time scale must start at 0");
    if (!(eta > 0.0 && eta < T())) throw Error(ErrorCode::InvalidArgument, "quasilinear: eta must lie in (0,T)");
  }
};

/// Delay problem (phi_p(u^D))^N + lambda a(t) f(u(t), u(omega(t))) = 0 with
/// history u = psi on [-r, 0], u(0) = B0(u^D(0)) and u^D(T) = 0.
struct DelaySpec {
  TimeScalePtr ts;
  TimeScalePtr history_ts;
  double r = 0.0;
  PiecewiseFunction psi = PiecewiseFunction::constant(0.0);
  PiecewiseFunction omega;
  PiecewiseFunction a = PiecewiseFunction::constant(1.0);
  PiecewiseFunction B0;
  double delta = 1.0;
  double gamma = 1.0;
  double lambda = 1.0;
  CompositeBivariate f2;
  PExponent p{2.0};

  double T() const { return ts->tmax(); }

  void validate() const {
    if (!ts) throw Error(ErrorCode::InvalidArgument, "delay: missing time scale");
    if (ts->tmin() != 0.0) throw Error(ErrorCode::InvalidArgument, "delay: time scale must start at 0");
    if (!(r >= 0.0)) throw Error(ErrorCode::InvalidArgument, "delay: r must be nonnegative");
    if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "delay: lambda must be positive");
    if (!(delta > 0.0 && delta <= gamma)) throw Error(ErrorCode::InvalidArgument, "delay: need 0 < delta <= gamma");
    if (f2.c1 < 0.0 || f2.c2 < 0.0) throw Error(ErrorCode::InvalidArgument, "delay: f2 weights must be nonnegative");
    if (history_ts && (history_ts->tmax() != 0.0 || history_ts->tmin() < -r - 1e-12)) {
      throw Error(ErrorCode::InvalidArgument, "delay: history grid must lie in [-r, 0] and end at 0");
    }
  }
};

namespace detail {

inline void require_same_grid(const TimeScalePtr& ts, const GridFunction& u) {
  if (u.timescale_ptr() != ts && u.timescale().grid() != ts->grid()) {
    throw Error(ErrorCode::InvalidArgument, "grid function lives on a different grid");
  }
}

struct ThermistorParts {
  std::vector<double> h;
  double A = 0.0;
  std::vector<double> g;
  double B = 0.0;
  std::vector<double> image;
};

inline ThermistorParts thermistor_parts(const ThermistorSpec& spec, const GridFunction& u, bool full) {
  spec.validate();
  require_same_grid(spec.ts, u);
  const auto& ts = *spec.ts;
  const std::size_t n = ts.size();
  ThermistorParts out;

  std::vector<double> fu(n);
  for (std::size_t i = 0; i < n; ++i) fu[i] = spec.f(u[i]);
  const double denom = nabla_integral(GridFunction(spec.ts, fu), ts.tmin(), ts.tmax());
  if (!(denom > kDegenerateDenominator)) {
    throw Error(ErrorCode::DegenerateDenominator, "integral of f(u) over [0,T] is not positive");
  }
  out.h.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.h[i] = spec.lambda * fu[i] / (denom * denom);
  const GridFunction hf(spec.ts, out.h);
  out.A = -(spec.lambda * spec.beta / (1.0 - spec.beta)) * nabla_integral_extended(hf, 0.0, spec.eta);
  if (!full) return out;

  // g = int_0^s lambda h N - A; lambda also sits inside h.
  const auto cum_h = detail::prefix(ts, out.h, true);
  out.g.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.g[i] = spec.lambda * cum_h[i] - out.A;

  std::vector<double> pg(n);
  for (std::size_t i = 0; i < n; ++i) pg[i] = phi_inverse(out.g[i], spec.p);
  const GridFunction pgf(spec.ts, pg);
  const auto cum_pg = detail::prefix(ts, pg, false);
  const double to_T = cum_pg.back();
  const double to_eta = delta_integral_extended(pgf, 0.0, spec.eta);
  out.B = (to_T - spec.beta * to_eta) / (1.0 - spec.beta);

  out.image.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.image[i] = out.B - cum_pg[i];
  return out;
}

}  // namespace detail

/// h(u(t)) = lambda f(u(t)) / (int_0^T f(u) N)^2.
inline GridFunction thermistor_h(const ThermistorSpec& spec, const GridFunction& u) {
  return GridFunction(spec.ts, detail::thermistor_parts(spec, u, false).h);
}

/// A = phi_p(u^D(0)) = -(lambda beta / (1 - beta)) int_0^eta h N; never positive.
inline double thermistor_A(const ThermistorSpec& spec, const GridFunction& u) {
  return detail::thermistor_parts(spec, u, false).A;
}

inline GridFunction thermistor_g(const ThermistorSpec& spec, const GridFunction& u) {
  return GridFunction(spec.ts, detail::thermistor_parts(spec, u, true).g);
}

/// B = u(0) = (int_0^T phi_q(g) D - beta int_0^eta phi_q(g) D) / (1 - beta).
inline double thermistor_B(const ThermistorSpec& spec, const GridFunction& u) {
  return detail::thermistor_parts(spec, u, true).B;
}

/// Gu(t) = B - int_0^t phi_q(g(s)) D s.
inline GridFunction apply_G(const ThermistorSpec& spec, const GridFunction& u) {
  return GridFunction(spec.ts, detail::thermistor_parts(spec, u, true).image);
}

/// Fu(t) = phi_q(int_eta^T (f(u)+h) N) + int_0^t phi_q(int_s^T (f(u)+h) N) D s.
inline GridFunction apply_F(const QuasilinearSpec& spec, const GridFunction& u) {
  spec.validate();
  detail::require_same_grid(spec.ts, u);
  const auto& ts = *spec.ts;
  const std::size_t n = ts.size();
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = spec.f(u[i]) + spec.h(ts[i]);
  const GridFunction wf(spec.ts, w);
  const auto tail = detail::suffix(ts, w, true);
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) integrand[i] = phi_inverse(tail[i], spec.p);
  const double head = phi_inverse(nabla_integral_extended(wf, spec.eta, ts.tmax()), spec.p);
  auto out = detail::prefix(ts, integrand, false);
  for (double& v : out) v += head;
  return GridFunction(spec.ts, std::move(out));
}

/// Value of u at the delayed time omega, reading the history below 0.
inline double delayed_value(const DelaySpec& spec, const GridFunction& u, double omega) {
  const double tol = 1e-12 * std::max(1.0, spec.r);
  if (omega < -spec.r - tol) throw Error(ErrorCode::DelayOutOfRange, "omega(t) = " + std::to_string(omega) + " < -r");
  if (omega < 0.0) return spec.psi(omega);
  if (omega > spec.T() + tol) throw Error(ErrorCode::DelayOutOfRange, "omega(t) exceeds T");
  return u.value_at(std::min(omega, spec.T()));
}

/// Qu(t) = B0(phi_q(int_0^T w N)) + int_0^t phi_q(int_s^T w N) D s with
/// w(r) = lambda a(r) f(u(r), u(omega(r))).
inline GridFunction apply_Q(const DelaySpec& spec, const GridFunction& u) {
  spec.validate();
  detail::require_same_grid(spec.ts, u);
  const auto& ts = *spec.ts;
  const std::size_t n = ts.size();
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lagged = delayed_value(spec, u, spec.omega(ts[i]));
    w[i] = spec.lambda * spec.a(ts[i]) * spec.f2(u[i], lagged);
  }
  const auto tail = detail::suffix(ts, w, true);
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) integrand[i] = phi_inverse(tail[i], spec.p);
  const double start = spec.B0(integrand[0]);
  auto out = detail::prefix(ts, integrand, false);
  for (double& v : out) v += start;
  GridFunction result(spec.ts, std::move(out));
  if (spec.history_ts) {
    std::vector<double> hv(spec.history_ts->size());
    for (std::size_t i = 0; i < hv.size(); ++i) hv[i] = spec.psi((*spec.history_ts)[i]);
    result.set_history({spec.history_ts, std::move(hv)});
  }
  return result;
}

/// Grid indices where the delay reaches into the history (Y1) or not (Y2).
struct DelaySplit {
  std::vector<std::size_t> y1;
  std::vector<std::size_t> y2;
};

inline DelaySplit split_Y(const DelaySpec& spec) {
  DelaySplit out;
  const auto& ts = *spec.ts;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    (spec.omega(ts[i]) < 0.0 ? out.y1 : out.y2).push_back(i);
  }
  return out;
}

inline OperatorFn make_operator(ThermistorSpec spec) {
  return [spec = std::move(spec)](const GridFunction& u) { return apply_G(spec, u); };
}
inline OperatorFn make_operator(QuasilinearSpec spec) {
  return [spec = std::move(spec)](const GridFunction& u) { return apply_F(spec, u); };
}
inline OperatorFn make_operator(DelaySpec spec) {
  return [spec = std::move(spec)](const GridFunction& u) { return apply_Q(spec, u); };
}

// Boundary-condition residuals of an operator image v.

struct ThermistorBoundary {
  std::optional<double> slope_condition;  // phi_p(v^D(0)) - beta phi_p(v^D(eta)); only when eta is a grid point
  double value_condition;                 // v(T) - beta v(eta)
};

inline ThermistorBoundary thermistor_boundary(const ThermistorSpec& spec, const GridFunction& v) {
  ThermistorBoundary out{std::nullopt, v[v.size() - 1] - spec.beta * v.value_at(spec.eta)};
  if (spec.ts->contains(spec.eta)) {
    out.slope_condition = phi(delta_derivative(v, 0.0), spec.p) - spec.beta * phi(delta_derivative(v, spec.eta), spec.p);
  }
  return out;
}

/// The image of F starts at phi_q(int_eta^T (f(u)+h) N) and has zero slope at T.
struct IncreasingBoundary {
  double initial_condition;
  std::optional<double> terminal_slope;  // only where T is approached densely
};

namespace detail {
inline std::optional<double> terminal_slope(const GridFunction& v) {
  const auto& ts = v.timescale();
  const std::size_t last = ts.size() - 1;
  if (last == 0 || !ts.dense_gap(last - 1)) return std::nullopt;
  return nabla_derivative(v, ts.tmax());
}
}  // namespace detail

inline IncreasingBoundary quasilinear_boundary(const QuasilinearSpec& spec, const GridFunction& u, const GridFunction& v) {
  const auto& ts = *spec.ts;
  std::vector<double> w(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) w[i] = spec.f(u[i]) + spec.h(ts[i]);
  const double head = phi_inverse(nabla_integral_extended(GridFunction(spec.ts, w), spec.eta, ts.tmax()), spec.p);
  return {v[0] - head, detail::terminal_slope(v)};
}

/// v(0) - B0(v^D(0)) and the slope at T.
inline IncreasingBoundary delay_boundary(const DelaySpec& spec, const GridFunction& v) {
  return {v[0] - spec.B0(delta_derivative(v, 0.0)), detail::terminal_slope(v)};
}

}  // namespace tsbvp
