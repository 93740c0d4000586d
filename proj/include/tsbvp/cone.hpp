#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tsbvp/calculus.hpp"
#include "tsbvp/error.hpp"
#include "tsbvp/operators.hpp"
#include "tsbvp/parallel.hpp"

namespace tsbvp {

enum class Monotonicity { Decreasing, Increasing };

inline const char* to_string(Monotonicity m) { return m == Monotonicity::Decreasing ? "decreasing" : "increasing"; }

/// Cone of nonnegative, monotone, concave grid functions plus the window
/// [xi, T - xi] used by the concave functional.
struct ConeSpec {
  Monotonicity monotonicity = Monotonicity::Decreasing;
  double xi = 0.25;
  double tau_pos = 1e-9;
  double tau_mono = 1e-9;
  double tau_conc = 1e-9;
};

/// Leggett-Williams levels, 0 < a < b < d <= c.
struct LWParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  void validate() const {
    if (!(a > 0.0 && a < b && b < d && d <= c)) {
      throw Error(ErrorCode::InvalidArgument, "Leggett-Williams levels need 0 < a < b < d <= c");
    }
  }
};

/// min of u over the grid points of [tmin + xi, tmax - xi].
inline double alpha(const GridFunction& u, double xi) {
  const auto& ts = u.timescale();
  const auto [first, last] = ts.index_range(ts.tmin() + xi, ts.tmax() - xi);
  if (first >= last) throw Error(ErrorCode::EmptyWindow, "no grid point in [xi, T - xi]");
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = first; i < last; ++i) m = std::min(m, u[i]);
  return m;
}

struct ConeReport {
  bool nonnegative = true;
  bool monotone = true;
  bool concave = true;
  double min_value = 0.0;
  double worst_monotonicity = 0.0;  // largest step against the declared direction
  double worst_concavity = 0.0;     // largest increase between consecutive slopes

  bool ok() const { return nonnegative && monotone && concave; }
};

/// Checks membership in the cone. Comparisons allow the declared tolerance
/// plus the rounding error of differencing the stored values, which matters
/// on the very short gaps near accumulation points.
inline ConeReport check_cone(const GridFunction& u, const ConeSpec& cs) {
  const auto& ts = u.timescale();
  const double eps = std::numeric_limits<double>::epsilon();
  ConeReport rep;
  rep.min_value = *std::min_element(u.values().begin(), u.values().end());
  rep.nonnegative = rep.min_value >= -cs.tau_pos;

  const double sign = cs.monotonicity == Monotonicity::Increasing ? 1.0 : -1.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double against = -sign * (u[i + 1] - u[i]);
    const double slack = cs.tau_mono + 4.0 * eps * (std::abs(u[i]) + std::abs(u[i + 1]));
    rep.worst_monotonicity = std::max(rep.worst_monotonicity, against);
    if (against > slack) rep.monotone = false;
  }

  for (std::size_t i = 0; i + 2 < u.size(); ++i) {
    const double h0 = ts.gap(i);
    const double h1 = ts.gap(i + 1);
    const double s0 = (u[i + 1] - u[i]) / h0;
    const double s1 = (u[i + 2] - u[i + 1]) / h1;
    const double mag = std::abs(u[i]) + 2.0 * std::abs(u[i + 1]) + std::abs(u[i + 2]);
    const double rounding = 4.0 * eps * mag * (1.0 / h0 + 1.0 / h1);
    const double rise = s1 - s0;
    rep.worst_concavity = std::max(rep.worst_concavity, rise);
    if (rise > cs.tau_conc + rounding) rep.concave = false;
  }
  return rep;
}

namespace detail {

inline std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace detail

/// A random cone member with max 1: partial sums of sorted nonnegative slopes.
///
/// Increasing members take nonincreasing slopes; decreasing members take
/// nondecreasing magnitudes of descent, so the Delta-derivative is always
/// nonincreasing.
inline GridFunction random_cone_shape(const TimeScalePtr& ts, Monotonicity mono, std::mt19937_64& rng) {
  const std::size_t n = ts->size();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  const double zero_share = unit(rng) < 0.3 ? unit(rng) : 0.0;
  std::vector<double> slopes(n > 0 ? n - 1 : 0);
  for (double& s : slopes) s = unit(rng) < zero_share ? 0.0 : expo(rng);
  std::vector<double> v(n, 0.0);
  if (mono == Monotonicity::Increasing) {
    std::sort(slopes.begin(), slopes.end(), std::greater<>());
    v[0] = unit(rng) < 0.5 ? 0.0 : unit(rng);
    for (std::size_t i = 0; i + 1 < n; ++i) v[i + 1] = v[i] + slopes[i] * ts->gap(i);
  } else {
    std::sort(slopes.begin(), slopes.end());
    v[n - 1] = unit(rng) < 0.5 ? 0.0 : unit(rng);
    for (std::size_t i = n - 1; i > 0; --i) v[i - 1] = v[i] + slopes[i - 1] * ts->gap(i - 1);
  }
  const double top = *std::max_element(v.begin(), v.end());
  if (top > 0.0) {
    for (double& x : v) x /= top;
  } else {
    std::fill(v.begin(), v.end(), 1.0);
  }
  return GridFunction(ts, std::move(v));
}

/// Affine placement c + k v of a shape so that alpha = target_alpha and
/// norm = target_norm; empty when that would need c < 0.
inline std::optional<GridFunction> place_in_cone(const GridFunction& shape, double xi, double target_alpha,
                                                 double target_norm) {
  const double av = alpha(shape, xi);
  const double nv = shape.norm();
  std::vector<double> out(shape.size());
  if (nv - av <= 1e-12 * std::max(1.0, nv)) {
    if (std::abs(target_norm - target_alpha) > 1e-12 * std::max(1.0, target_norm)) return std::nullopt;
    std::fill(out.begin(), out.end(), target_norm);
    return GridFunction(shape.timescale_ptr(), std::move(out));
  }
  const double k = (target_norm - target_alpha) / (nv - av);
  const double c = target_alpha - k * av;
  if (c < 0.0) return std::nullopt;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c + k * shape[i];
  return GridFunction(shape.timescale_ptr(), std::move(out));
}

struct ConditionStats {
  std::string name;
  std::size_t sampled = 0;
  std::size_t qualified = 0;  // samples the condition applies to
  std::size_t violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();

  bool pass() const { return violations == 0; }
};

struct LWReport {
  std::uint64_t seed = 0;
  std::size_t nsamples = 0;
  LWParams lw;
  bool witness_nonempty = false;  // some u in P(alpha, b, d) has alpha(u) > b
  ConditionStats cond_i{"(i) alpha(Tu) > b on P(alpha,b,d)"};
  ConditionStats cond_ii{"(ii) ||Tu|| < a on closed P_a"};
  ConditionStats cond_iii{"(iii) alpha(Tu) > b on P(alpha,b,c) with ||Tu|| > d"};

  std::size_t total_violations() const { return cond_i.violations + cond_ii.violations + cond_iii.violations; }
  bool all_pass() const { return witness_nonempty && total_violations() == 0; }
};

namespace detail {

enum class Region { ClosedBallA, SliceBD, SliceBC };

/// One random member of the requested region, or SamplerExhausted.
inline GridFunction sample_region(const TimeScalePtr& ts, const ConeSpec& cs, const LWParams& lw, Region region,
                                  std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr int kMaxAttempts = 10000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const bool flat = unit(rng) < 0.1;
    const GridFunction shape = flat ? GridFunction::constant(ts, 1.0) : random_cone_shape(ts, cs.monotonicity, rng);
    if (region == Region::ClosedBallA) {
      const double target = lw.a * (1.0 - unit(rng));  // (0, a]
      std::vector<double> v(shape.values());
      for (double& x : v) x *= target;
      return GridFunction(ts, std::move(v));
    }
    const double top = region == Region::SliceBD ? lw.d : lw.c;
    const double ta = lw.b + (top - lw.b) * unit(rng);
    const double tn = flat ? ta : ta + (top - ta) * unit(rng);
    if (!(tn < top)) continue;
    if (auto placed = place_in_cone(shape, cs.xi, ta, tn)) return *placed;
  }
  throw Error(ErrorCode::SamplerExhausted, "could not generate a member of the requested cone region");
}

inline void fold(ConditionStats& st, bool applies, double margin) {
  ++st.sampled;
  if (!applies) return;
  ++st.qualified;
  st.worst_margin = std::min(st.worst_margin, margin);
  if (!(margin > 0.0)) ++st.violations;
}

}  // namespace detail

/// Sampled check of the three Leggett-Williams conditions for an operator.
///
/// nsamples random members are drawn in each of the closed ball P_a, the
/// slice P(alpha,b,d) and the slice P(alpha,b,c); the third is filtered by
/// ||Tu|| > d after applying the operator. Deterministic for a given seed.
inline LWReport sample_lw_conditions(const OperatorFn& op, const TimeScalePtr& ts, const LWParams& lw,
                                     const ConeSpec& cs, std::size_t nsamples, std::uint64_t seed) {
  lw.validate();
  LWReport rep;
  rep.seed = seed;
  rep.nsamples = nsamples;
  rep.lw = lw;

  const GridFunction witness = GridFunction::constant(ts, 0.5 * (lw.b + lw.d));
  rep.witness_nonempty = alpha(witness, cs.xi) > lw.b && witness.norm() < lw.d;

  struct Outcome {
    double norm_image;
    double alpha_image;
  };
  std::vector<Outcome> out(3 * nsamples);
  parallel_for(out.size(), [&](std::size_t k) {
    const auto region = static_cast<detail::Region>(k / nsamples);
    auto rng = detail::sample_rng(seed, static_cast<std::uint64_t>(region), k % nsamples);
    const GridFunction u = detail::sample_region(ts, cs, lw, region, rng);
    const GridFunction image = op(u);
    out[k] = {image.norm(), alpha(image, cs.xi)};
  });

  for (std::size_t k = 0; k < nsamples; ++k) {
    const auto& ball = out[k];
    const auto& bd = out[nsamples + k];
    const auto& bc = out[2 * nsamples + k];
    detail::fold(rep.cond_ii, true, lw.a - ball.norm_image);
    detail::fold(rep.cond_i, true, bd.alpha_image - lw.b);
    detail::fold(rep.cond_iii, bc.norm_image > lw.d, bc.alpha_image - lw.b);
  }
  return rep;
}

}  // namespace tsbvp
