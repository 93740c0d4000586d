#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "tsbvp/plaplacian.hpp"

using namespace tsbvp;

TEST(PExponent, ConjugateExponent) {
  for (double p : {1.5, 2.0, 3.0, 1.01, 7.0}) {
    const PExponent e(p);
    EXPECT_NEAR(1.0 / e.p() + 1.0 / e.q(), 1.0, 1e-12);
  }
  EXPECT_DOUBLE_EQ(PExponent(1.5).q(), 3.0);
}

TEST(PExponent, RejectsPAtMostOne) {
  for (double p : {1.0, 0.5, -2.0, double(NAN), double(INFINITY)}) {
    try {
      PExponent e(p);
      FAIL() << p;
    } catch (const Error& err) {
      EXPECT_EQ(err.code(), ErrorCode::InvalidExponent);
    }
  }
  EXPECT_THROW(phi(1.0, 1.0), Error);
  EXPECT_THROW(phi_inverse(1.0, 0.9), Error);
}

TEST(Phi, Examples) {
  EXPECT_DOUBLE_EQ(phi(4.0, 1.5), 2.0);
  for (double p : {1.2, 1.5, 2.0, 3.0}) EXPECT_EQ(phi(0.0, p), 0.0);
  EXPECT_NEAR(phi(0.5, 1.5), std::sqrt(2.0) / 2.0, 1e-15);
}

TEST(PhiInverse, Examples) {
  // p = 3/2 has q = 3.
  EXPECT_DOUBLE_EQ(phi_inverse(2.0, 1.5), 4.0);
  EXPECT_NEAR(phi_inverse(phi(-3.7, 1.5), 1.5), -3.7, 1e-12 * 3.7);
  for (double p : {1.5, 2.0, 3.0, 4.5}) EXPECT_DOUBLE_EQ(phi_inverse(1.0, p), 1.0);
}

TEST(Phi, OddAndStrictlyIncreasing) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-50.0, 50.0);
  for (double p : {1.5, 2.0, 3.0}) {
    std::vector<double> s(500);
    for (double& x : s) x = dist(rng);
    std::sort(s.begin(), s.end());
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_EQ(phi(-s[i], p), -phi(s[i], p));
      if (i > 0 && s[i] > s[i - 1]) {
        EXPECT_LT(phi(s[i - 1], p), phi(s[i], p));
      }
    }
  }
}

TEST(Phi, RoundTripOverLogRange) {
  for (double p : {1.5, 2.0, 3.0}) {
    for (int k = 0; k <= 1000; ++k) {
      const double s = std::pow(10.0, -6.0 + 12.0 * k / 1000.0);
      for (double sign : {1.0, -1.0}) {
        const double x = sign * s;
        EXPECT_NEAR(phi_inverse(phi(x, p), p), x, 1e-12 * s);
        EXPECT_NEAR(phi(phi_inverse(x, p), p), x, 1e-12 * s);
      }
    }
  }
}
