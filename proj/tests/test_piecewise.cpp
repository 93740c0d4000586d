#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "tsbvp/piecewise.hpp"

using namespace tsbvp;

namespace {

// Continuous random piecewise cubic on [-1, 1].
PiecewiseFunction random_cubic(std::mt19937_64& rng, Extrapolation mode) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> npieces(1, 5);
  const int n = npieces(rng);
  std::vector<double> bp{-1.0};
  for (int k = 1; k < n; ++k) bp.push_back(unit(rng));
  bp.push_back(1.0);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  std::vector<Polynomial> pieces;
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    Polynomial p{{unit(rng), unit(rng), unit(rng), unit(rng)}};
    if (k > 0) {
      const double target = pieces.back()(bp[k]);
      p.coeffs[0] += target - p(bp[k]);
    }
    pieces.push_back(p);
  }
  return PiecewiseFunction(bp, pieces, mode);
}

}  // namespace

TEST(Piecewise, EvaluatesPiecesAndRightPieceWinsAtBreakpoints) {
  const PiecewiseFunction f({0.0, 1.0, 2.0}, {Polynomial{{1.0}}, Polynomial{{5.0}}});
  EXPECT_EQ(f(0.5), 1.0);
  EXPECT_EQ(f(1.0), 5.0);
  EXPECT_FALSE(f.continuous());
  EXPECT_EQ(f.warnings().size(), 1u);
}

TEST(Piecewise, ExtrapolationModes) {
  const std::vector<double> bp{0.0, 1.0};
  const std::vector<Polynomial> line{Polynomial{{0.0, 2.0}}};
  EXPECT_EQ(PiecewiseFunction(bp, line, Extrapolation::ClampEnds)(3.0), 2.0);
  EXPECT_EQ(PiecewiseFunction(bp, line, Extrapolation::Extend)(3.0), 6.0);
  EXPECT_THROW(PiecewiseFunction(bp, line, Extrapolation::Error)(3.0), Error);
}

TEST(Piecewise, RejectsMalformedInput) {
  EXPECT_THROW(PiecewiseFunction({0.0}, {}), Error);
  EXPECT_THROW(PiecewiseFunction({0.0, 1.0}, {Polynomial{{1, 2, 3, 4, 5}}}), Error);
  EXPECT_THROW(PiecewiseFunction({1.0, 0.0}, {Polynomial{{1}}}), Error);
  EXPECT_THROW(PiecewiseFunction({0.0, 1.0}, {Polynomial{{NAN}}}), Error);
}

TEST(Piecewise, ExactExtremaOfTheThermistorExample) {
  const double r2 = std::sqrt(2.0);
  const PiecewiseFunction f({0.0, 1.0, 1.5, 10.0, 16.0},
                            {Polynomial{{2 * r2}}, Polynomial{{2 * r2 - 4.0, 4.0}}, Polynomial{{2.0 + 2 * r2}},
                             Polynomial{{2 * r2 - 18.0, 2.0}}});
  EXPECT_TRUE(f.continuous());
  EXPECT_EQ(f.min_over(0.0, 1.0), 2 * r2);
  EXPECT_EQ(f.min_over(0.0, 16.0), 2 * r2);
  EXPECT_DOUBLE_EQ(f.min_over(1.5, 10.0), 2.0 + 2 * r2);
  EXPECT_DOUBLE_EQ(f.max_over(0.0, 16.0), 2 * r2 + 14.0);
}

TEST(Piecewise, InteriorCriticalPoint) {
  // 1 - (x - 0.3)^2 peaks at 0.3.
  const PiecewiseFunction f({0.0, 1.0}, {Polynomial{{1.0 - 0.09, 0.6, -1.0}}});
  EXPECT_DOUBLE_EQ(f.max_over(0.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(f.min_over(0.0, 1.0), 1.0 - 0.49);
}

TEST(Piecewise, LeftLimitAtRangeStartIsIgnored) {
  const PiecewiseFunction f({0.0, 1.0, 2.0}, {Polynomial{{-7.0}}, Polynomial{{3.0}}});
  EXPECT_EQ(f.min_over(1.0, 2.0), 3.0);
  EXPECT_EQ(f.min_over(0.5, 2.0), -7.0);
}

TEST(Piecewise, ExtendedRangeUsesExtrapolation) {
  const PiecewiseFunction sq({0.0, 1.0}, {Polynomial{{0.0, 0.0, 1.0}}}, Extrapolation::Extend);
  EXPECT_DOUBLE_EQ(sq.max_over(0.0, 10.0), 100.0);
  EXPECT_DOUBLE_EQ(sq.min_over(-2.0, 3.0), 0.0);
  const PiecewiseFunction clamped({0.0, 1.0}, {Polynomial{{0.0, 0.0, 1.0}}});
  EXPECT_DOUBLE_EQ(clamped.max_over(0.0, 10.0), 1.0);
}

TEST(Piecewise, ExtremaMatchDenseSampling) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_cubic(rng, trial % 2 ? Extrapolation::Extend : Extrapolation::ClampEnds);
    double a = 1.2 * unit(rng), b = 1.2 * unit(rng);
    if (a > b) std::swap(a, b);
    const auto [mn, mx] = f.extrema(a, b);
    const int n = 100000;
    double smin = INFINITY, smax = -INFINITY;
    for (int k = 0; k <= n; ++k) {
      const double x = a + (b - a) * k / n;
      smin = std::min(smin, f(x));
      smax = std::max(smax, f(x));
    }
    for (double x : f.breakpoints()) {
      if (x >= a && x <= b) {
        smin = std::min(smin, f(x));
        smax = std::max(smax, f(x));
      }
    }
    EXPECT_NEAR(mn, smin, 1e-9);
    EXPECT_NEAR(mx, smax, 1e-9);
    EXPECT_LE(mn, smin + 1e-15);
    EXPECT_GE(mx, smax - 1e-15);
  }
}

TEST(Piecewise, CompositeBivariate) {
  const CompositeBivariate f{PiecewiseFunction({0.0, 1.0}, {Polynomial{{0.0, 0.0, 1.0}}}, Extrapolation::Extend), 1.0, 1.0};
  EXPECT_DOUBLE_EQ(f(1.0, 2.0), 9.0);
}
