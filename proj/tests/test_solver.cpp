#include <gtest/gtest.h>

#include <cmath>

#include "tsbvp/problems.hpp"
#include "tsbvp/solver.hpp"

using namespace tsbvp;

namespace {

TimeScalePtr unit_interval(double hmax) { return make_timescale({Segment::interval(0.0, 1.0)}, hmax); }

ConeSpec increasing() {
  ConeSpec cs;
  cs.monotonicity = Monotonicity::Increasing;
  return cs;
}

// f(u) = 1 + u / 10 is a contraction for F at p = 2.
QuasilinearSpec mild_linear(double hmax) {
  QuasilinearSpec s{unit_interval(hmax), PiecewiseFunction({0.0, 100.0}, {Polynomial{{1.0, 0.1}}}, Extrapolation::Extend)};
  s.eta = 0.5;
  s.p = PExponent(2.0);
  return s;
}

GridFunction solve(const QuasilinearSpec& spec) {
  SolverConfig cfg;
  cfg.tol = 1e-12;
  const auto r = picard(make_operator(spec), GridFunction::constant(spec.ts, 0.0), cfg);
  EXPECT_TRUE(r.converged());
  return r.u;
}

double coarse_vs_fine(const GridFunction& coarse, const GridFunction& fine) {
  double worst = 0.0;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    const double t = coarse.timescale()[i];
    worst = std::max(worst, std::abs(coarse[i] - fine.value_at(t)));
  }
  return worst;
}

}  // namespace

TEST(Picard, ZeroMapConvergesInOneStep) {
  const auto ts = unit_interval(0.1);
  const OperatorFn zero = [&](const GridFunction&) { return GridFunction::constant(ts, 0.0); };
  const auto r = picard(zero, GridFunction::constant(ts, 3.0), SolverConfig{});
  EXPECT_TRUE(r.converged());
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.u.norm(), 0.0);
}

TEST(Picard, ConstantNonlinearityIsOneStep) {
  QuasilinearSpec spec{unit_interval(1e-3), PiecewiseFunction::constant(1.0, 0.0, 100.0)};
  spec.p = PExponent(1.5);
  const auto r = picard(make_operator(spec), GridFunction::constant(spec.ts, 0.0), SolverConfig{});
  EXPECT_TRUE(r.converged());
  EXPECT_EQ(r.iterations, 1);
  EXPECT_NEAR(r.u[0], 0.25, 1e-12);
}

TEST(Picard, ResidualOfZeroIsTheImageNorm) {
  const auto pr = load_problem(preset_json("example2"));
  const auto op = pr.op();
  const auto z = GridFunction::constant(pr.timescale(), 0.0);
  EXPECT_EQ(residual(op, z), op(z).norm());
}

TEST(Picard, ContractionMatchesTheOdeSolution) {
  // At p = 2 the fixed point solves -u'' = 1 + u/10 with u'(1) = 0 and
  // u(0) = u'(1/2): u = -10 + C cos(k (1 - t)), k = 1/sqrt(10).
  const double k = std::sqrt(0.1);
  const double C = 10.0 / (std::cos(k) - k * std::sin(0.5 * k));
  const auto coarse = solve(mild_linear(4e-3));
  const auto fine = solve(mild_linear(1e-3));
  for (const auto* u : {&coarse, &fine}) {
    double worst = 0.0;
    for (std::size_t i = 0; i < u->size(); ++i) {
      const double t = u->timescale()[i];
      worst = std::max(worst, std::abs((*u)[i] - (-10.0 + C * std::cos(k * (1.0 - t)))));
    }
    EXPECT_LT(worst, u == &coarse ? 1e-4 : 1e-5);
  }
  EXPECT_LT(coarse_vs_fine(coarse, fine), 1e-4);
  EXPECT_TRUE(check_cone(fine, increasing()).ok());
}

TEST(Picard, HalvingHmaxMovesTheSolutionByLessThanTwoHmax) {
  for (double h : {8e-3, 4e-3, 2e-3}) {
    const auto a = solve(mild_linear(h));
    const auto b = solve(mild_linear(h / 2));
    EXPECT_LE(coarse_vs_fine(a, b), 2.0 * h) << h;
  }
}

TEST(Picard, DegenerateDenominatorPropagates) {
  Json j = preset_json("example1");
  j["f"] = 0.0;
  const auto pr = load_problem(j);
  try {
    picard(pr.op(), GridFunction::constant(pr.timescale(), 1.0), SolverConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateDenominator);
  }
}

TEST(Picard, DivergenceIsReported) {
  const auto ts = unit_interval(0.1);
  const OperatorFn grow = [](const GridFunction& u) {
    std::vector<double> v(u.values());
    for (double& x : v) x = 10.0 * x + 1.0;
    return GridFunction(u.timescale_ptr(), std::move(v));
  };
  const auto r = picard(grow, GridFunction::constant(ts, 1.0), SolverConfig{});
  EXPECT_EQ(r.status, FixedPointStatus::Diverged);
}

TEST(Picard, FlipFlopIsDampedToAFixedPoint) {
  // u -> 2 - u oscillates undamped; theta = 1/2 lands on u = 1 in one step.
  const auto ts = unit_interval(0.1);
  const OperatorFn flip = [](const GridFunction& u) {
    std::vector<double> v(u.values());
    for (double& x : v) x = 2.0 - x;
    return GridFunction(u.timescale_ptr(), std::move(v));
  };
  const auto r = picard(flip, GridFunction::constant(ts, 0.0), SolverConfig{});
  EXPECT_TRUE(r.converged());
  EXPECT_LT(r.theta, 1.0);
  EXPECT_NEAR(r.u[0], 1.0, 1e-10);
}

TEST(Picard, RejectsBadConfig) {
  const auto ts = unit_interval(0.1);
  const OperatorFn id = [](const GridFunction& u) { return u; };
  SolverConfig cfg;
  cfg.tol = 0.0;
  EXPECT_THROW(picard(id, GridFunction::constant(ts, 0.0), cfg), Error);
  cfg = SolverConfig{};
  cfg.theta = 1.5;
  EXPECT_THROW(picard(id, GridFunction::constant(ts, 0.0), cfg), Error);
}

TEST(Classify, Signatures) {
  const auto ts = unit_interval(0.1);
  const LWParams lw{1.0, 2.0, 8.0, 4.0};
  EXPECT_EQ(classify_solution(GridFunction::constant(ts, 0.5), lw, 0.25), Signature::SmallNorm);
  EXPECT_EQ(classify_solution(GridFunction::constant(ts, 3.0), lw, 0.25), Signature::LargeAlpha);
  EXPECT_EQ(classify_solution(GridFunction::sample(ts, [](double t) { return 3.0 * t; }), lw, 0.25), Signature::Between);
  EXPECT_EQ(classify_solution(GridFunction::constant(ts, 1.0), lw, 0.25), Signature::None);
}

TEST(FindThree, IdentityRealisesEverySignature) {
  const auto ts = unit_interval(0.05);
  const OperatorFn id = [](const GridFunction& u) { return u; };
  const auto set = find_three(id, ts, {1.0, 2.0, 8.0, 4.0}, increasing(), SolverConfig{});
  EXPECT_EQ(set.seeds_converged, set.seeds_tried);
  EXPECT_EQ(set.signatures_realised(), 3);
  for (const auto& s : set.solutions) EXPECT_EQ(s.residual, 0.0);
}

TEST(FindThree, RejectsBadLevels) {
  const auto ts = unit_interval(0.05);
  const OperatorFn id = [](const GridFunction& u) { return u; };
  EXPECT_THROW(find_three(id, ts, {1.0, 2.0, 8.0, 1.5}, increasing(), SolverConfig{}), Error);
}

TEST(FindThree, Example2HasACertifiedSolution) {
  const auto pr = load_problem(preset_json("example2"));
  const auto set = find_three(pr.op(), pr.timescale(), pr.lw_levels(), pr.cone(), SolverConfig{});
  ASSERT_FALSE(set.solutions.empty());
  bool certified = false;
  for (const auto& s : set.solutions) {
    if (s.cone.ok() && s.residual <= 1e-10) certified = true;
  }
  EXPECT_TRUE(certified);
}

TEST(FindThree, DeterministicAcrossRunsAndThreads) {
  const auto pr = load_problem(preset_json("example2"));
  SolverConfig cfg;
  cfg.seed = 42;
  setenv("TSBVP_THREADS", "1", 1);
  const auto a = find_three(pr.op(), pr.timescale(), pr.lw_levels(), pr.cone(), cfg);
  unsetenv("TSBVP_THREADS");
  const auto b = find_three(pr.op(), pr.timescale(), pr.lw_levels(), pr.cone(), cfg);
  ASSERT_EQ(a.solutions.size(), b.solutions.size());
  for (std::size_t i = 0; i < a.solutions.size(); ++i) {
    EXPECT_EQ(a.solutions[i].u.values(), b.solutions[i].u.values());
    EXPECT_EQ(a.solutions[i].seed_label, b.solutions[i].seed_label);
  }
}
