#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tsbvp/calculus.hpp"
#include "tsbvp/cone.hpp"
#include "tsbvp/error.hpp"
#include "tsbvp/operators.hpp"
#include "tsbvp/parallel.hpp"

namespace tsbvp {

struct SolverConfig {
  double tol = 1e-10;
  int max_iter = 10000;
  double theta = 1.0;
  double theta_min = 1.0 / 64.0;
  int stall_window = 10;        // non-decreasing residuals before theta halves
  std::size_t seeds_per_region = 4;  // random seeds on top of the constant ones
  std::uint64_t seed = 1;

  void validate() const {
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "solver tol must be positive");
    if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorCode::InvalidArgument, "damping must lie in (0,1]");
    if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be at least 1");
  }
};

enum class FixedPointStatus { Converged, MaxIter, Diverged, Oscillating };

inline const char* to_string(FixedPointStatus s) {
  switch (s) {
    case FixedPointStatus::Converged: return "converged";
    case FixedPointStatus::MaxIter: return "max_iter";
    case FixedPointStatus::Diverged: return "diverged";
    case FixedPointStatus::Oscillating: return "oscillating";
  }
  return "?";
}

struct FixedPointResult {
  GridFunction u;
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  double theta = 1.0;
  FixedPointStatus status = FixedPointStatus::MaxIter;

  bool converged() const { return status == FixedPointStatus::Converged; }
};

/// sup |u - op(u)|.
inline double residual(const OperatorFn& op, const GridFunction& u) { return sup_distance(u, op(u)); }

/// Damped Picard iteration u <- (1 - theta) u + theta op(u).
///
/// The returned u is the best iterate seen; its residual is measured
/// against op(u) directly, so a converged result honours tol exactly.
inline FixedPointResult picard(const OperatorFn& op, const GridFunction& u0, const SolverConfig& cfg) {
  cfg.validate();
  FixedPointResult best{u0};
  best.theta = cfg.theta;
  GridFunction u = u0;
  double theta = cfg.theta;
  double last = std::numeric_limits<double>::infinity();
  int stalled = 0;
  bool damped_out = false;
  const double blowup = 1e150;

  for (int it = 0; it <= cfg.max_iter; ++it) {
    const GridFunction image = op(u);
    const double res = sup_distance(u, image);
    if (res < best.residual) {
      best.u = u;
      best.residual = res;
      best.iterations = it;
      best.theta = theta;
    }
    if (res <= cfg.tol) {
      best.status = FixedPointStatus::Converged;
      return best;
    }
    if (!std::isfinite(res) || image.norm() > blowup) {
      best.status = FixedPointStatus::Diverged;
      return best;
    }
    if (it == cfg.max_iter) break;

    if (res >= last) {
      if (++stalled >= cfg.stall_window) {
        if (theta * 0.5 >= cfg.theta_min) {
          theta *= 0.5;
        } else {
          damped_out = true;
        }
        stalled = 0;
      }
    } else {
      stalled = 0;
    }
    last = res;

    std::vector<double> next(u.size());
    for (std::size_t i = 0; i < next.size(); ++i) next[i] = (1.0 - theta) * u[i] + theta * image[i];
    GridFunction stepped(u.timescale_ptr(), std::move(next));
    if (image.history()) stepped.set_history(*image.history());
    u = std::move(stepped);
  }
  best.status = damped_out ? FixedPointStatus::Oscillating : FixedPointStatus::MaxIter;
  return best;
}

enum class Signature { SmallNorm, LargeAlpha, Between, None };

inline const char* to_string(Signature s) {
  switch (s) {
    case Signature::SmallNorm: return "norm < a";
    case Signature::LargeAlpha: return "alpha > b";
    case Signature::Between: return "norm > a and alpha < b";
    case Signature::None: return "none";
  }
  return "?";
}

inline Signature classify_solution(const GridFunction& u, const LWParams& lw, double xi) {
  const double n = u.norm();
  const double al = alpha(u, xi);
  if (n < lw.a) return Signature::SmallNorm;
  if (al > lw.b) return Signature::LargeAlpha;
  if (n > lw.a && al < lw.b) return Signature::Between;
  return Signature::None;
}

struct Solution {
  GridFunction u;
  double residual = 0.0;
  ConeReport cone;
  double norm = 0.0;
  double alpha = 0.0;
  Signature signature = Signature::None;
  std::string seed_label;
  int iterations = 0;
};

struct SolutionSet {
  std::vector<Solution> solutions;
  std::size_t seeds_tried = 0;
  std::size_t seeds_converged = 0;
  double dedup_distance = 0.0;

  /// How many of the three theorem signatures were realised (0-3).
  int signatures_realised() const {
    bool seen[3] = {false, false, false};
    for (const auto& s : solutions) {
      if (s.signature != Signature::None) seen[static_cast<int>(s.signature)] = true;
    }
    return seen[0] + seen[1] + seen[2];
  }
};

namespace detail {

struct Seed {
  GridFunction u;
  std::string label;
};

inline std::vector<Seed> solver_seeds(const TimeScalePtr& ts, const LWParams& lw, const ConeSpec& cs,
                                      const SolverConfig& cfg) {
  std::vector<Seed> seeds;
  seeds.push_back({GridFunction::constant(ts, 0.5 * lw.a), "constant a/2"});
  seeds.push_back({GridFunction::constant(ts, 0.5 * (lw.b + lw.d)), "constant (b+d)/2"});
  seeds.push_back({GridFunction::constant(ts, 0.5 * (lw.a + lw.b)), "constant (a+b)/2"});
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 0; k < cfg.seeds_per_region; ++k) {
    auto rng = sample_rng(cfg.seed, 10, k);
    seeds.push_back({sample_region(ts, cs, lw, Region::ClosedBallA, rng), "ball a #" + std::to_string(k)});
    rng = sample_rng(cfg.seed, 11, k);
    seeds.push_back({sample_region(ts, cs, lw, Region::SliceBD, rng), "slice (b,d) #" + std::to_string(k)});
    // ||u|| in (a, c] with alpha(u) < b.
    rng = sample_rng(cfg.seed, 12, k);
    for (int attempt = 0; attempt < 10000; ++attempt) {
      const GridFunction shape = random_cone_shape(ts, cs.monotonicity, rng);
      const double tn = lw.a + (lw.c - lw.a) * (1.0 - unit(rng));
      const double ta = std::min(tn, lw.b) * unit(rng);
      if (auto placed = place_in_cone(shape, cs.xi, ta, tn)) {
        seeds.push_back({*placed, "between #" + std::to_string(k)});
        break;
      }
    }
  }
  return seeds;
}

}  // namespace detail

/// Multi-start Picard from seeds in the three Leggett-Williams regions.
/// Converged limits are deduplicated in seed order and labelled by signature.
inline SolutionSet find_three(const OperatorFn& op, const TimeScalePtr& ts, const LWParams& lw, const ConeSpec& cs,
                              const SolverConfig& cfg) {
  lw.validate();
  cfg.validate();
  const auto seeds = detail::solver_seeds(ts, lw, cs, cfg);
  std::vector<std::optional<FixedPointResult>> results(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t k) { results[k] = picard(op, seeds[k].u, cfg); });

  SolutionSet set;
  set.seeds_tried = seeds.size();
  set.dedup_distance = 100.0 * cfg.tol;
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    const auto& r = *results[k];
    if (!r.converged()) continue;
    ++set.seeds_converged;
    bool duplicate = false;
    for (const auto& s : set.solutions) {
      if (sup_distance(s.u, r.u) < set.dedup_distance) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;
    Solution s;
    s.u = r.u;
    s.residual = r.residual;
    s.cone = check_cone(r.u, cs);
    s.norm = r.u.norm();
    s.alpha = alpha(r.u, cs.xi);
    s.signature = classify_solution(r.u, lw, cs.xi);
    s.seed_label = seeds[k].label;
    s.iterations = r.iterations;
    set.solutions.push_back(std::move(s));
  }
  return set;
}

}  // namespace tsbvp
