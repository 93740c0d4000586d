#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tsbvp/calculus.hpp"
#include "tsbvp/error.hpp"
#include "tsbvp/operators.hpp"
#include "tsbvp/piecewise.hpp"
#include "tsbvp/plaplacian.hpp"

namespace tsbvp {

/// Relative slack for the non-strict inequality checks. The worked examples
/// hit some bounds with exact equality.
inline constexpr double kCompareTolerance = 1e-12;

struct Verdict {
  std::string id;
  std::string relation;  // ">=", "<=", ">" or "<": lhs relation rhs
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  std::string status;  // pass | fail | corroborated | refuted | info
  std::string detail;
  bool counts = true;  // informational verdicts do not affect the outcome

  double margin() const { return (relation[0] == '>') ? lhs - rhs : rhs - lhs; }
};

struct HypothesisReport {
  std::string problem;
  std::vector<std::pair<std::string, double>> constants;
  std::vector<Verdict> verdicts;
  std::vector<std::pair<std::string, double>> chain;
  bool chain_ok = false;
  std::vector<std::string> notes;

  bool all_pass() const {
    if (!chain_ok) return false;
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return !v.counts || v.pass; });
  }

  const Verdict* find(const std::string& id) const {
    for (const auto& v : verdicts) {
      if (v.id == id) return &v;
    }
    return nullptr;
  }

  double constant(const std::string& name) const {
    for (const auto& [k, v] : constants) {
      if (k == name) return v;
    }
    throw Error(ErrorCode::InvalidArgument, "no constant named " + name);
  }
};

namespace detail {

inline bool holds(double lhs, const std::string& rel, double rhs) {
  const double slack = kCompareTolerance * std::max(1.0, std::abs(rhs));
  if (rel == ">=") return lhs >= rhs - slack;
  if (rel == "<=") return lhs <= rhs + slack;
  if (rel == ">") return lhs > rhs;
  if (rel == "<") return lhs < rhs;
  throw Error(ErrorCode::InvalidArgument, "unknown relation " + rel);
}

inline Verdict compare(std::string id, double lhs, std::string rel, double rhs, std::string detail = {}) {
  Verdict v;
  v.id = std::move(id);
  v.lhs = lhs;
  v.rhs = rhs;
  v.relation = std::move(rel);
  v.pass = std::isfinite(lhs) && std::isfinite(rhs) && holds(lhs, v.relation, rhs);
  v.status = v.pass ? "pass" : "fail";
  v.detail = std::move(detail);
  return v;
}

inline Verdict corroborate(std::string id, double lhs, std::string rel, double rhs, std::string detail) {
  Verdict v = compare(std::move(id), lhs, std::move(rel), rhs, std::move(detail));
  v.status = v.pass ? "corroborated" : "refuted";
  return v;
}

inline bool strictly_increasing_positive(const std::vector<std::pair<std::string, double>>& chain) {
  if (chain.empty() || !(chain.front().second > 0.0)) return false;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    if (!(chain[i].second > chain[i - 1].second)) return false;
  }
  return true;
}

inline double guarded(double x) {
  return std::isfinite(x) ? x : std::numeric_limits<double>::max();
}

inline Verdict xi_window(double xi, double T) {
  return compare("xi in (0, T/2)", xi, "<", 0.5 * T, xi > 0.0 ? "" : "xi must be positive");
}

inline void continuity_note(HypothesisReport& rep, const std::string& name, const PiecewiseFunction& fn) {
  for (const auto& w : fn.warnings()) rep.notes.push_back(name + ": " + w);
}

// Exact min of B0(s) - slope * s over [lo, hi].
inline double min_minus_linear(const PiecewiseFunction& fn, double slope, double sign, double lo, double hi) {
  std::vector<Polynomial> pieces;
  for (auto p : fn.pieces()) {
    p.coeffs.resize(std::max<std::size_t>(p.coeffs.size(), 2), 0.0);
    for (double& c : p.coeffs) c *= sign;
    p.coeffs[1] -= sign * slope;
    pieces.push_back(std::move(p));
  }
  const PiecewiseFunction diff(fn.breakpoints(), std::move(pieces), fn.extrapolation());
  if (fn.extrapolation() == Extrapolation::ClampEnds && hi > fn.hi()) {
    // Beyond the breakpoints B0 is constant, so -slope * s keeps falling.
    const double end = sign * fn(fn.hi());
    return std::min(diff.min_over(lo, fn.hi()), end - sign * slope * hi);
  }
  return diff.min_over(lo, hi);
}

inline std::vector<double> geometric_samples(double from, double to, std::size_t n) {
  std::vector<double> xs(n);
  const double ratio = std::log(to / from) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) xs[k] = from * std::exp(ratio * static_cast<double>(k));
  xs.back() = to;
  return xs;
}

}  // namespace detail

// ---------------------------------------------------------------- thermistor

struct ThermistorConstants {
  double zeta = 0.0;
  double B1 = 0.0;
  double a1 = 0.0;
  double c1 = 0.0;
  double sup_f_bd = 0.0;  // sup of f over [b, d]
  std::vector<std::pair<std::string, double>> chain;
};

/// zeta = T^2 phi_q(1/T) / (1 - beta) and
/// B1 = (1 - beta) / (beta xi) |phi_p(T - xi)| phi_p(lambda / (T sup_[b,d] f)^2).
inline ThermistorConstants thermistor_constants(const ThermistorSpec& spec, double a, double b, double c, double d,
                                                double xi) {
  spec.validate();
  const double T = spec.T();
  const auto& p = spec.p;
  ThermistorConstants k;
  const double phq = phi_inverse(1.0 / T, p);
  k.zeta = detail::guarded(T * T * phq / (1.0 - spec.beta));
  k.sup_f_bd = spec.f.max_over(b, d);
  const double inner = spec.lambda / std::pow(T * k.sup_f_bd, 2.0);
  k.B1 = (1.0 - spec.beta) / (spec.beta * xi) * std::abs(phi(T - xi, p)) * phi(inner, p);
  k.a1 = detail::guarded(k.zeta * a);
  k.c1 = detail::guarded(k.zeta * c);
  k.chain = {{"a1 = zeta a", k.a1},
             {"b", b},
             {"d - T^2 c phi_q(1/T)", d - T * T * c * phq},
             {"d", d},
             {"c1 = zeta c", k.c1}};
  return k;
}

/// Verdicts for H1-H4 plus the level chain. literal_B1, when given, is
/// evaluated alongside the formula value as an informational verdict.
inline HypothesisReport check_thermistor(const ThermistorSpec& spec, double a, double b, double c, double d, double xi,
                                         std::optional<double> literal_B1 = std::nullopt) {
  const auto k = thermistor_constants(spec, a, b, c, d, xi);
  const double T = spec.T();
  const double lam2 = spec.lambda * spec.lambda;
  const auto& f = spec.f;
  HypothesisReport rep;
  rep.problem = "thermistor";
  rep.constants = {{"zeta", k.zeta}, {"B1", k.B1}, {"a1", k.a1}, {"c1", k.c1}, {"sup_f_b_d", k.sup_f_bd}};
  if (literal_B1) rep.constants.emplace_back("B1_literal", *literal_B1);

  rep.verdicts.push_back(detail::xi_window(xi, T));

  const double fmin_range = f.min_over(0.0, std::max(k.c1, d));
  auto h1 = detail::compare("H1", fmin_range, ">", 0.0, "f continuous and positive on [0, max(c1, d)]");
  if (!f.continuous()) {
    h1.pass = false;
    h1.status = "fail";
  }
  rep.verdicts.push_back(h1);
  detail::continuity_note(rep, "f", f);

  rep.verdicts.push_back(detail::compare("H2", f.min_over(0.0, k.a1), ">=",
                                         lam2 / (T * (1.0 - spec.beta) * phi(a, spec.p)),
                                         "min_[0,a1] f >= lambda^2 / (T (1-beta) phi_p(a))"));
  rep.verdicts.push_back(detail::compare("H3", f.min_over(0.0, k.c1), ">=",
                                         lam2 / (T * (1.0 - spec.beta) * phi(c, spec.p)),
                                         "min_[0,c1] f >= lambda^2 / (T (1-beta) phi_p(c))"));
  const double min_bd = f.min_over(b, d);
  rep.verdicts.push_back(detail::compare("H4", min_bd, ">=", phi(b * k.B1, spec.p), "min_[b,d] f >= phi_p(b B1)"));
  if (literal_B1) {
    auto lit = detail::compare("H4 (literal B1)", min_bd, ">=", phi(b * *literal_B1, spec.p),
                               "same inequality with the B1 value quoted for the worked example");
    lit.counts = false;
    lit.status = lit.pass ? "info-pass" : "info-fail";
    rep.verdicts.push_back(lit);
    if (std::abs(*literal_B1 - k.B1) > 1e-9 * std::max(1.0, k.B1)) {
      rep.notes.push_back("B1 from the formula (" + std::to_string(k.B1) + ") differs from the quoted value (" +
                          std::to_string(*literal_B1) + ")");
    }
  }
  rep.chain = k.chain;
  rep.chain_ok = detail::strictly_increasing_positive(rep.chain);
  return rep;
}

// --------------------------------------------------------------- quasilinear

struct QuasilinearConstants {
  double gamma = 0.0;
  double alpha_aux = 0.0;
  double A = 0.0;
  double B = 0.0;
  double a1 = 0.0;
  double c1 = 0.0;
  double h_sup = 0.0;
  std::vector<std::pair<std::string, double>> chain;
};

inline QuasilinearConstants quasilinear_constants(const QuasilinearSpec& spec, double a, double b, double c, double d,
                                                  double xi) {
  spec.validate();
  const double T = spec.T();
  const double p = spec.p.p();
  QuasilinearConstants k;
  const auto [hmin, hmax] = spec.h.extrema(0.0, T);
  k.h_sup = std::max(std::abs(hmin), std::abs(hmax));
  const double h_root = std::pow(k.h_sup, 1.0 / (p - 1.0));
  k.gamma = (1.0 + T) * phi_inverse(T, spec.p);
  k.alpha_aux = phi_inverse(std::pow(2.0, p - 2.0), spec.p) * phi_inverse(T, spec.p) * (T + 1.0);
  k.A = (a - k.alpha_aux * h_root) / (k.alpha_aux * a);
  k.B = phi(T - spec.eta, spec.p);
  k.a1 = k.gamma * a;
  k.c1 = k.gamma * c;
  const double shift = std::pow(2.0, p - 2.0) * (T - xi) * phi_inverse(T - xi, spec.p) * (h_root + b * k.B);
  k.chain = {{"a1 = gamma a", k.a1},
             {"b", b},
             {"d - 2^(p-2) (T-xi) phi_q(T-xi) (|h|^(1/(p-1)) + b B)", d - shift},
             {"d", d},
             {"c1 = gamma c", k.c1}};
  return k;
}

inline HypothesisReport check_quasilinear(const QuasilinearSpec& spec, double a, double b, double c, double d,
                                          double xi) {
  const auto k = quasilinear_constants(spec, a, b, c, d, xi);
  const double T = spec.T();
  const auto& f = spec.f;
  HypothesisReport rep;
  rep.problem = "quasilinear";
  rep.constants = {{"gamma", k.gamma}, {"alpha", k.alpha_aux}, {"A", k.A},   {"B", k.B},
                   {"a1", k.a1},       {"c1", k.c1},           {"h_sup", k.h_sup}};
  rep.verdicts.push_back(detail::xi_window(xi, T));

  auto a1v = detail::compare("A1", f.min_over(0.0, std::max({k.c1, c, d})), ">=", 0.0,
                             "f continuous and nonnegative on the evaluation range");
  if (!f.continuous()) {
    a1v.pass = false;
    a1v.status = "fail";
  }
  rep.verdicts.push_back(a1v);
  detail::continuity_note(rep, "f", f);
  rep.verdicts.push_back(detail::compare("A2", spec.h.min_over(0.0, T), ">=", 0.0, "h nonnegative and bounded on [0,T]"));
  detail::continuity_note(rep, "h", spec.h);

  rep.verdicts.push_back(detail::compare("A3", f.max_over(0.0, a), "<=", phi(a * k.A, spec.p), "max_[0,a] f <= phi_p(a A)"));
  rep.verdicts.push_back(detail::compare("A4", f.max_over(0.0, c), "<=", phi(c * k.A, spec.p), "max_[0,c] f <= phi_p(c A)"));
  rep.verdicts.push_back(detail::compare("A5", f.min_over(b, d), ">=", phi(b * k.B, spec.p), "min_[b,d] f >= phi_p(b B)"));
  rep.chain = k.chain;
  rep.chain_ok = detail::strictly_increasing_positive(rep.chain);
  return rep;
}

// --------------------------------------------------------------------- delay

struct DelayConstants {
  double l = 0.0;
  double m = 0.0;
  double a_mass = 0.0;   // int_0^T a N
  double y1_mass = 0.0;  // int_{Y1} a N
  double delta = 0.0;
  double gamma = 0.0;
};

/// l = phi_p(int_0^T a) / (lambda^(q-1) (T + gamma)), m = phi_p(int_0^T a) / (delta lambda^(q-1)).
inline DelayConstants delay_constants(const DelaySpec& spec) {
  spec.validate();
  const auto& ts = *spec.ts;
  const auto w = nabla_weights(ts);
  const auto split = split_Y(spec);
  DelayConstants k;
  for (std::size_t i = 0; i < ts.size(); ++i) k.a_mass += w[i] * spec.a(ts[i]);
  for (std::size_t i : split.y1) k.y1_mass += w[i] * spec.a(ts[i]);
  if (split.y1.empty() || !(k.y1_mass > 0.0)) {
    throw Error(ErrorCode::Y1Empty, "the delay never reaches the history with positive a-mass");
  }
  const double lam = std::pow(spec.lambda, spec.p.q() - 1.0);
  const double pa = phi(k.a_mass, spec.p);
  k.l = pa / (lam * (spec.T() + spec.gamma));
  k.m = pa / (spec.delta * lam);
  k.delta = spec.delta;
  k.gamma = spec.gamma;
  return k;
}

/// C1-C5 are checked from the data, C6-C8 by sampling the growth ratios on
/// geometric ladders below x_small and above x_large. Limits cannot be
/// proved this way, so C6-C8 report "corroborated" or "refuted".
inline HypothesisReport check_delay(const DelaySpec& spec, double a, double b, double c, double d, double x_small,
                                    double x_large, double xi) {
  const auto k = delay_constants(spec);
  const auto& ts = *spec.ts;
  const double T = spec.T();
  const double pm1 = spec.p.p() - 1.0;
  HypothesisReport rep;
  rep.problem = "delay";
  rep.constants = {{"l", k.l},         {"m", k.m},       {"int_a", k.a_mass},
                   {"int_Y1_a", k.y1_mass}, {"delta", k.delta}, {"gamma", k.gamma}};
  rep.verdicts.push_back(detail::xi_window(xi, T));

  const double psi_max = spec.psi.max_over(-spec.r, 0.0);
  const double span = (spec.f2.c1 + spec.f2.c2) * std::max({c, psi_max, 1.0});
  auto c1v = detail::compare("C1", spec.f2.g.min_over(0.0, span), ">=", 0.0, "f nonnegative on the quadrant up to the c-level");
  if (!spec.f2.g.continuous()) {
    c1v.pass = false;
    c1v.status = "fail";
  }
  rep.verdicts.push_back(c1v);
  detail::continuity_note(rep, "f", spec.f2.g);
  rep.verdicts.push_back(detail::compare("C2", spec.a.min_over(0.0, T), ">=", 0.0, "a nonnegative on [0,T]"));
  detail::continuity_note(rep, "a", spec.a);
  rep.verdicts.push_back(detail::compare("C3", spec.psi.min_over(-spec.r, 0.0), ">=", 0.0, "psi nonnegative on [-r,0]"));
  detail::continuity_note(rep, "psi", spec.psi);

  double lag_excess = -std::numeric_limits<double>::infinity();
  double lag_floor = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double w = spec.omega(ts[i]);
    lag_excess = std::max(lag_excess, w - ts[i]);
    lag_floor = std::min(lag_floor, w);
  }
  rep.verdicts.push_back(detail::compare("C4", lag_excess, "<=", 0.0, "max over the grid of omega(t) - t"));
  rep.verdicts.push_back(detail::compare("C4 range", lag_floor, ">=", -spec.r, "omega stays above -r"));
  detail::continuity_note(rep, "omega", spec.omega);

  const double s_hi = std::max({spec.B0.hi(), c, 1.0});
  rep.verdicts.push_back(detail::compare("C5 delta <= gamma", spec.delta, "<=", spec.gamma));
  rep.verdicts.push_back(detail::compare("C5 lower", detail::min_minus_linear(spec.B0, spec.delta, 1.0, 0.0, s_hi), ">=", 0.0,
                                         "min over s in [0, s_hi] of B0(s) - delta s"));
  rep.verdicts.push_back(detail::compare("C5 upper", detail::min_minus_linear(spec.B0, spec.gamma, -1.0, 0.0, s_hi), ">=", 0.0,
                                         "min over s in [0, s_hi] of gamma s - B0(s)"));

  std::vector<double> history_s;
  if (spec.history_ts) {
    history_s = spec.history_ts->grid();
  } else {
    for (int j = 0; j <= 32; ++j) history_s.push_back(-spec.r * (1.0 - j / 32.0));
  }
  const auto small = detail::geometric_samples(x_small * 1e-8, x_small, 33);
  const auto large = detail::geometric_samples(x_large, x_large * 1e8, 33);

  double c6 = -std::numeric_limits<double>::infinity();
  for (double s : history_s) {
    const double ps = spec.psi(s);
    for (double x : small) c6 = std::max(c6, spec.f2(x, ps) / std::pow(x, pm1));
  }
  double c7 = -std::numeric_limits<double>::infinity();
  for (double x1 : small) {
    for (double x2 : small) c7 = std::max(c7, spec.f2(x1, x2) / std::max(std::pow(x1, pm1), std::pow(x2, pm1)));
  }
  double c8 = std::numeric_limits<double>::infinity();
  for (double s : history_s) {
    const double ps = spec.psi(s);
    for (double x : large) c8 = std::min(c8, spec.f2(x, ps) / std::pow(x, pm1));
  }
  rep.verdicts.push_back(detail::corroborate("C6", c6, "<", std::pow(k.l, pm1), "max of f(x, psi(s)) / x^(p-1) for x <= x_small"));
  rep.verdicts.push_back(detail::corroborate("C7", c7, "<", std::pow(k.l, pm1), "max of f(x1, x2) / max(x1, x2)^(p-1) for x1, x2 <= x_small"));
  rep.verdicts.push_back(detail::corroborate("C8", c8, ">", std::pow(k.m, pm1), "min of f(x, psi(s)) / x^(p-1) for x >= x_large"));

  rep.chain = {{"a", a}, {"b", b}, {"delta d / (T + gamma)", spec.delta * d / (T + spec.gamma)}, {"d", d}, {"c", c}};
  rep.chain_ok = detail::strictly_increasing_positive(rep.chain);
  return rep;
}

}  // namespace tsbvp
