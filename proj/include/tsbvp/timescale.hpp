#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "tsbvp/error.hpp"

namespace tsbvp {

/// One building block of a bounded time scale.
///
/// Intervals become uniform quadrature subgrids. Discrete points are taken
/// as given. Geometric families x_k = limit + (from - limit) * ratio^k are
/// expanded until the remaining tail is narrower than the merge tolerance;
/// the limit itself is always included and marked as an accumulation point.
struct Segment {
  enum class Kind { Interval, Points, Geometric };

  Kind kind = Kind::Points;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> points;
  double limit = 0.0;
  double ratio = 0.0;
  double from = 0.0;

  static Segment interval(double lo, double hi) {
    Segment s;
    s.kind = Kind::Interval;
    s.lo = lo;
    s.hi = hi;
    return s;
  }

  static Segment discrete(std::vector<double> pts) {
    Segment s;
    s.kind = Kind::Points;
    s.points = std::move(pts);
    return s;
  }

  static Segment geometric(double limit, double ratio, double from) {
    Segment s;
    s.kind = Kind::Geometric;
    s.limit = limit;
    s.ratio = ratio;
    s.from = from;
    return s;
  }
};

struct PointClass {
  bool left_dense = false;
  bool right_dense = false;

  bool operator==(const PointClass&) const = default;
};

inline std::string to_string(const PointClass& pc) {
  return std::string(pc.left_dense ? "LeftDense" : "LeftScattered") + "," +
         (pc.right_dense ? "RightDense" : "RightScattered");
}

/// Default quadrature step: a thousandth of the covered span.
inline double default_hmax(const std::vector<Segment>& segments);

/// An immutable bounded time scale with its canonical computation grid.
///
/// Gap i joins grid[i] and grid[i+1]. A gap is dense when both ends lie in
/// the same continuous interval; every other gap is a jump of the time scale.
class TimeScale {
 public:
  const std::vector<double>& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_.size(); }
  double tmin() const noexcept { return grid_.front(); }
  double tmax() const noexcept { return grid_.back(); }
  double operator[](std::size_t i) const { return grid_[i]; }

  double gap(std::size_t i) const { return grid_[i + 1] - grid_[i]; }
  bool dense_gap(std::size_t i) const { return dense_gap_[i] != 0; }
  bool is_interval_point(std::size_t i) const { return in_interval_[i] != 0; }

  bool right_dense(std::size_t i) const { return right_dense_[i] != 0; }
  bool left_dense(std::size_t i) const { return left_dense_[i] != 0; }

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  double hmax() const noexcept { return hmax_; }
  double eps_merge() const noexcept { return eps_merge_; }

  /// Index of the grid point equal to t (to rounding), or throws PointNotInTimeScale.
  std::size_t index_of(double t) const {
    auto idx = find(t);
    if (idx == npos) {
      throw Error(ErrorCode::PointNotInTimeScale, "t = " + fmt_real(t) + " is not a grid point");
    }
    return idx;
  }

  bool contains(double t) const { return find(t) != npos; }

  /// Index i of the gap [grid[i], grid[i+1]] holding x; x == tmax maps to the last gap.
  std::size_t gap_index(double x) const {
    if (x < tmin() || x > tmax()) {
      throw Error(ErrorCode::PointNotInTimeScale,
                  "x = " + fmt_real(x) + " outside [" + fmt_real(tmin()) + ", " + fmt_real(tmax()) + "]");
    }
    if (grid_.size() == 1) return 0;
    auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    std::size_t j = static_cast<std::size_t>(it - grid_.begin());
    if (j == 0) return 0;
    return std::min(j - 1, grid_.size() - 2);
  }

  double sigma_at(std::size_t i) const {
    if (right_dense(i) || i + 1 == grid_.size()) return grid_[i];
    return grid_[i + 1];
  }

  double rho_at(std::size_t i) const {
    if (left_dense(i) || i == 0) return grid_[i];
    return grid_[i - 1];
  }

  PointClass classify_at(std::size_t i) const { return {left_dense(i), right_dense(i)}; }

  /// Grid indices with lo <= grid[i] <= hi (to rounding).
  std::pair<std::size_t, std::size_t> index_range(double lo, double hi) const {
    const double tol = tolerance(std::max(std::abs(lo), std::abs(hi)));
    auto first = std::lower_bound(grid_.begin(), grid_.end(), lo - tol);
    auto last = std::upper_bound(grid_.begin(), grid_.end(), hi + tol);
    return {static_cast<std::size_t>(first - grid_.begin()), static_cast<std::size_t>(last - grid_.begin())};
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  friend TimeScale build_timescale(const std::vector<Segment>&, double, double);

  static double tolerance(double scale) {
    return 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale);
  }

  static std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  std::size_t find(double t) const {
    auto it = std::lower_bound(grid_.begin(), grid_.end(), t);
    const double tol = tolerance(std::abs(t));
    if (it != grid_.end() && std::abs(*it - t) <= tol) return static_cast<std::size_t>(it - grid_.begin());
    if (it != grid_.begin() && std::abs(*(it - 1) - t) <= tol) return static_cast<std::size_t>(it - grid_.begin() - 1);
    return npos;
  }

  std::vector<double> grid_;
  std::vector<char> dense_gap_;
  std::vector<char> in_interval_;
  std::vector<char> left_dense_;
  std::vector<char> right_dense_;
  std::vector<Segment> segments_;
  double hmax_ = 0.0;
  double eps_merge_ = 0.0;
};

using TimeScalePtr = std::shared_ptr<const TimeScale>;

namespace detail {

struct Atom {
  double value;
  bool left_dense;
  bool right_dense;
};

inline void expand_geometric(const Segment& s, double eps, std::vector<Atom>& atoms) {
  if (!(s.ratio > 0.0 && s.ratio < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "geometric ratio must lie in (0,1)");
  }
  if (!std::isfinite(s.limit) || !std::isfinite(s.from) || s.from == s.limit) {
    throw Error(ErrorCode::InvalidArgument, "geometric family needs finite from != limit");
  }
  // The family is infinite; a positive merge tolerance decides where to cut it.
  const double floor_width = std::max(eps, 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(s.limit)));
  const double width0 = s.from - s.limit;
  double scale = 1.0;
  for (int k = 0; k < 4096; ++k) {
    const double offset = width0 * scale;
    if (std::abs(offset) < floor_width) break;
    atoms.push_back({s.limit + offset, false, false});
    scale *= s.ratio;
  }
  const bool approach_from_below = s.from < s.limit;
  atoms.push_back({s.limit, approach_from_below, !approach_from_below});
}

}  // namespace detail

/// Validates the segment list and lays down the canonical grid.
///
/// Discrete points closer than eps_merge are merged; a discrete point may
/// coincide with an interval endpoint but not sit strictly inside it.
inline TimeScale build_timescale(const std::vector<Segment>& segments, double hmax, double eps_merge = 1e-12) {
  if (segments.empty()) throw Error(ErrorCode::EmptyTimeScale, "no segments given");
  if (!(hmax > 0.0) || !std::isfinite(hmax)) throw Error(ErrorCode::InvalidArgument, "hmax must be positive");
  if (!(eps_merge >= 0.0)) throw Error(ErrorCode::InvalidArgument, "eps_merge must be nonnegative");

  struct Iv {
    double lo, hi;
  };
  std::vector<Iv> intervals;
  std::vector<detail::Atom> atoms;

  for (const auto& s : segments) {
    switch (s.kind) {
      case Segment::Kind::Interval:
        if (!std::isfinite(s.lo) || !std::isfinite(s.hi) || !(s.lo < s.hi)) {
          throw Error(ErrorCode::InvalidArgument, "interval needs finite lo < hi");
        }
        intervals.push_back({s.lo, s.hi});
        break;
      case Segment::Kind::Points:
        for (double p : s.points) {
          if (!std::isfinite(p)) throw Error(ErrorCode::InvalidArgument, "non-finite discrete point");
          atoms.push_back({p, false, false});
        }
        break;
      case Segment::Kind::Geometric:
        detail::expand_geometric(s, eps_merge, atoms);
        break;
    }
  }
  if (intervals.empty() && atoms.empty()) throw Error(ErrorCode::EmptyTimeScale, "segments contain no points");

  std::sort(intervals.begin(), intervals.end(), [](const Iv& a, const Iv& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    if (intervals[i].lo <= intervals[i - 1].hi + eps_merge) {
      throw Error(ErrorCode::OverlappingSegments, "intervals overlap or touch");
    }
  }

  // Merge nearby atoms, keeping an accumulation point's exact value.
  std::sort(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
  std::vector<detail::Atom> merged;
  for (const auto& a : atoms) {
    if (!merged.empty() && a.value - merged.back().value <= eps_merge) {
      auto& m = merged.back();
      const bool a_accum = a.left_dense || a.right_dense;
      const bool m_accum = m.left_dense || m.right_dense;
      if (a_accum && !m_accum) m.value = a.value;
      m.left_dense = m.left_dense || a.left_dense;
      m.right_dense = m.right_dense || a.right_dense;
      continue;
    }
    merged.push_back(a);
  }

  struct Node {
    double t;
    bool left_dense, right_dense, in_interval;
    int interval_id;
  };
  std::vector<Node> nodes;
  std::vector<char> absorbed(merged.size(), 0);
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    const auto [lo, hi] = intervals[k];
    bool lo_left_dense = false;
    bool hi_right_dense = false;
    for (std::size_t j = 0; j < merged.size(); ++j) {
      const double x = merged[j].value;
      if (x < lo - eps_merge || x > hi + eps_merge) continue;
      if (std::abs(x - lo) <= eps_merge) {
        lo_left_dense = lo_left_dense || merged[j].left_dense;
      } else if (std::abs(x - hi) <= eps_merge) {
        hi_right_dense = hi_right_dense || merged[j].right_dense;
      } else {
        throw Error(ErrorCode::OverlappingSegments, "discrete point lies inside an interval");
      }
      absorbed[j] = 1;
    }
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((hi - lo) / hmax - 1e-9)));
    for (std::size_t j = 0; j <= n; ++j) {
      const double t = (j == n) ? hi : lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n);
      const bool ld = (j > 0) || lo_left_dense;
      const bool rd = (j < n) || hi_right_dense;
      nodes.push_back({t, ld, rd, true, static_cast<int>(k)});
    }
  }
  for (std::size_t j = 0; j < merged.size(); ++j) {
    if (absorbed[j]) continue;
    nodes.push_back({merged[j].value, merged[j].left_dense, merged[j].right_dense, false, -1});
  }
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.t < b.t; });

  TimeScale ts;
  ts.segments_ = segments;
  ts.hmax_ = hmax;
  ts.eps_merge_ = eps_merge;
  const std::size_t n = nodes.size();
  ts.grid_.resize(n);
  ts.left_dense_.resize(n);
  ts.right_dense_.resize(n);
  ts.in_interval_.resize(n);
  ts.dense_gap_.assign(n > 0 ? n - 1 : 0, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ts.grid_[i] = nodes[i].t;
    ts.left_dense_[i] = nodes[i].left_dense;
    ts.right_dense_[i] = nodes[i].right_dense;
    ts.in_interval_[i] = nodes[i].in_interval;
    if (i > 0) {
      if (!(nodes[i].t > nodes[i - 1].t)) throw Error(ErrorCode::OverlappingSegments, "grid not strictly increasing");
      ts.dense_gap_[i - 1] = nodes[i].interval_id >= 0 && nodes[i].interval_id == nodes[i - 1].interval_id;
    }
  }
  // sigma(max) = max and rho(min) = min.
  ts.left_dense_.front() = 1;
  ts.right_dense_.back() = 1;
  return ts;
}

inline double default_hmax(const std::vector<Segment>& segments) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : segments) {
    switch (s.kind) {
      case Segment::Kind::Interval:
        lo = std::min(lo, s.lo);
        hi = std::max(hi, s.hi);
        break;
      case Segment::Kind::Points:
        for (double p : s.points) {
          lo = std::min(lo, p);
          hi = std::max(hi, p);
        }
        break;
      case Segment::Kind::Geometric:
        lo = std::min({lo, s.from, s.limit});
        hi = std::max({hi, s.from, s.limit});
        break;
    }
  }
  const double span = hi - lo;
  return (std::isfinite(span) && span > 0.0) ? 1e-3 * span : 1.0;
}

inline TimeScalePtr make_timescale(const std::vector<Segment>& segments, double hmax = 0.0, double eps_merge = 1e-12) {
  if (hmax <= 0.0) hmax = default_hmax(segments);
  return std::make_shared<const TimeScale>(build_timescale(segments, hmax, eps_merge));
}

inline double sigma(const TimeScale& ts, double t) { return ts.sigma_at(ts.index_of(t)); }
inline double rho(const TimeScale& ts, double t) { return ts.rho_at(ts.index_of(t)); }
inline PointClass classify(const TimeScale& ts, double t) { return ts.classify_at(ts.index_of(t)); }

/// Forward graininess sigma(t) - t.
inline double mu(const TimeScale& ts, double t) { return sigma(ts, t) - t; }
/// Backward graininess t - rho(t).
inline double nu(const TimeScale& ts, double t) { return t - rho(ts, t); }

}  // namespace tsbvp
