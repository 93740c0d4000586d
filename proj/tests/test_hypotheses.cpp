#include <gtest/gtest.h>

#include <cmath>

#include "tsbvp/problems.hpp"

using namespace tsbvp;

namespace {

const double kR2 = std::sqrt(2.0);

Problem preset(const std::string& name) { return load_problem(preset_json(name)); }

Problem with_override(const std::string& name, const std::string& kv) {
  Json j = preset_json(name);
  apply_override(j, kv);
  return load_problem(j);
}

const Verdict& verdict(const HypothesisReport& rep, const std::string& id) {
  const Verdict* v = rep.find(id);
  if (!v) throw std::runtime_error("no verdict " + id);
  return *v;
}

}  // namespace

TEST(Thermistor, Example1Constants) {
  const auto rep = preset("example1").check();
  // T = 1, q = 3, beta = 1/2: zeta = 1 * 1 / (1/2).
  EXPECT_NEAR(rep.constant("zeta"), 2.0, 1e-12);
  EXPECT_NEAR(rep.constant("a1"), 1.0, 1e-12);
  EXPECT_NEAR(rep.constant("c1"), 16.0, 1e-12);
  // sup f on [3/2, 10] is f(10) = 2 + 2 sqrt 2.
  const double sup = 2.0 + 2.0 * kR2;
  EXPECT_NEAR(rep.constant("sup_f_b_d"), sup, 1e-12);
  const double b1 = 0.5 / (0.5 * 0.25) * std::sqrt(0.75) * std::sqrt(1.0 / (sup * sup));
  EXPECT_NEAR(rep.constant("B1"), b1, 1e-12);
}

TEST(Thermistor, Example1Verdicts) {
  const auto rep = preset("example1").check();
  const auto& h2 = verdict(rep, "H2");
  // Equality case: 2 sqrt 2 against 1 / (1/2 * sqrt(1/2)).
  EXPECT_NEAR(h2.lhs, 2.0 * kR2, 1e-12);
  EXPECT_NEAR(h2.rhs, 2.0 * kR2, 1e-12);
  EXPECT_TRUE(h2.pass);
  const auto& h3 = verdict(rep, "H3");
  EXPECT_NEAR(h3.rhs, 1.0 / (0.5 * std::sqrt(8.0)), 1e-12);
  EXPECT_TRUE(h3.pass);
  const auto& h4 = verdict(rep, "H4");
  EXPECT_NEAR(h4.lhs, 2.0 + 2.0 * kR2, 1e-12);
  EXPECT_NEAR(h4.rhs, std::sqrt(1.5 * rep.constant("B1")), 1e-12);
  EXPECT_TRUE(h4.pass);
  const auto& lit = verdict(rep, "H4 (literal B1)");
  EXPECT_FALSE(lit.counts);
  EXPECT_TRUE(lit.pass);
  EXPECT_NEAR(lit.rhs, std::sqrt(1.5 / (2.0 * (2.0 + kR2))), 1e-12);
  EXPECT_TRUE(verdict(rep, "H1").pass);
  EXPECT_TRUE(rep.chain_ok);
  EXPECT_TRUE(rep.all_pass());
  EXPECT_FALSE(rep.notes.empty());
}

TEST(Thermistor, LargerAKeepsH2ButBreaksTheChain) {
  for (const char* a : {"a=1", "a=2"}) {
    const auto rep = with_override("example1", a).check();
    EXPECT_TRUE(verdict(rep, "H2").pass) << a;
    EXPECT_FALSE(rep.chain_ok) << a;
    EXPECT_FALSE(rep.all_pass()) << a;
  }
}

TEST(Thermistor, SmallerALosesH2) {
  // a = 1/4: min f on [0, 1/2] is 2 sqrt 2, the bound 1 / (1/2 * (1/4)^(1/2)) = 4.
  const auto rep = with_override("example1", "a=0.25").check();
  const auto& h2 = verdict(rep, "H2");
  EXPECT_NEAR(h2.rhs, 1.0 / (0.5 * 0.5), 1e-12);
  EXPECT_FALSE(h2.pass);
}

TEST(Thermistor, ZeroNonlinearityFailsH1) {
  Json j = preset_json("example1");
  j["f"] = 0.0;
  const auto pr = load_problem(j);
  const auto rep = pr.check();
  EXPECT_FALSE(verdict(rep, "H1").pass);
  EXPECT_FALSE(rep.all_pass());
}

TEST(Thermistor, BetaNearOneStaysFinite) {
  Json j = preset_json("example1");
  j["beta"] = std::nextafter(1.0, 0.0);
  const auto rep = load_problem(j).check();
  EXPECT_TRUE(std::isfinite(rep.constant("zeta")));
  for (const auto& v : rep.verdicts) {
    EXPECT_FALSE(std::isnan(v.lhs)) << v.id;
    EXPECT_FALSE(std::isnan(v.rhs)) << v.id;
  }
}

TEST(Thermistor, XiOutsideTheWindowFails) {
  const auto rep = with_override("example1", "xi=0.6").check();
  EXPECT_FALSE(verdict(rep, "xi in (0, T/2)").pass);
}

TEST(Quasilinear, Example2Constants) {
  const auto rep = preset("example2").check();
  // T = 1, p = 3/2: gamma = 2 * 1, alpha = phi_q(2^(-1/2)) * 2 = 1/2 * 2.
  EXPECT_NEAR(rep.constant("gamma"), 2.0, 1e-12);
  EXPECT_NEAR(rep.constant("alpha"), 1.0, 1e-12);
  EXPECT_NEAR(rep.constant("A"), 1.0, 1e-12);
  EXPECT_NEAR(rep.constant("B"), std::sqrt(0.5), 1e-12);
  EXPECT_EQ(rep.constant("h_sup"), 0.0);
}

TEST(Quasilinear, Example2Verdicts) {
  const auto rep = preset("example2").check();
  const auto& a3 = verdict(rep, "A3");
  EXPECT_NEAR(a3.lhs, kR2 / 2.0, 1e-12);
  EXPECT_NEAR(a3.rhs, std::sqrt(0.5), 1e-12);
  EXPECT_TRUE(a3.pass);
  const auto& a4 = verdict(rep, "A4");
  EXPECT_NEAR(a4.lhs, 4.0 + kR2 / 2.0, 1e-12);
  EXPECT_NEAR(a4.rhs, 5.0, 1e-12);
  const auto& a5 = verdict(rep, "A5");
  EXPECT_NEAR(a5.rhs, std::sqrt(1.5 * std::sqrt(0.5)), 1e-12);
  EXPECT_NEAR(a5.rhs, 1.0299, 1e-3);
  EXPECT_TRUE(rep.all_pass());
  EXPECT_TRUE(rep.chain_ok);
}

TEST(Quasilinear, ForcingShrinksA) {
  Json j = preset_json("example2");
  j["h"] = 0.01;
  const auto rep = load_problem(j).check();
  // |h|^(1/(p-1)) = 1e-4, a = 1/2.
  EXPECT_NEAR(rep.constant("A"), (0.5 - 1e-4) / 0.5, 1e-12);
  EXPECT_FALSE(verdict(rep, "A3").pass);
}

TEST(Delay, Example3Constants) {
  const auto rep = preset("example3").check();
  EXPECT_NEAR(rep.constant("int_a"), 1.0, 1e-12);
  EXPECT_NEAR(rep.constant("l"), 0.5, 1e-12);
  EXPECT_NEAR(rep.constant("m"), 1.0, 1e-12);
  // Y1 holds 0 and the dyadic points up to 1/2; their backward gaps sum to 1/2.
  EXPECT_NEAR(rep.constant("int_Y1_a"), 0.5, 1e-10);
}

TEST(Delay, Example3Verdicts) {
  const auto rep = preset("example3").check();
  for (const char* id : {"C1", "C2", "C3", "C4", "C4 range", "C5 delta <= gamma", "C5 lower", "C5 upper"}) {
    EXPECT_TRUE(verdict(rep, id).pass) << id;
    EXPECT_EQ(verdict(rep, id).status, "pass") << id;
  }
  for (const char* id : {"C6", "C7", "C8"}) EXPECT_EQ(verdict(rep, id).status, "corroborated") << id;
  // f(x, 0) / x^(1/2) = x^(3/2) peaks at x_small = 1e-4.
  EXPECT_NEAR(verdict(rep, "C6").lhs, 1e-6, 1e-18);
  EXPECT_NEAR(verdict(rep, "C6").rhs, std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(verdict(rep, "C7").lhs, 4e-6, 1e-17);
  EXPECT_NEAR(verdict(rep, "C8").lhs, 1e6, 1e-6);
  EXPECT_TRUE(rep.chain_ok);
  EXPECT_TRUE(rep.all_pass());
}

TEST(Delay, SmallXLargeEnoughRefutesC6) {
  Json j = preset_json("example3");
  j["x_small"] = 1.0;
  const auto rep = load_problem(j).check();
  EXPECT_EQ(verdict(rep, "C6").status, "refuted");
}

TEST(Delay, NoHistoryMassIsY1Empty) {
  Json j = preset_json("example3");
  j["coefficient"] = 0.0;
  const auto pr = load_problem(j);
  try {
    pr.check();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Y1Empty);
  }
}

TEST(Delay, B0OutsideTheSectorFailsC5) {
  Json j = preset_json("example3");
  j["gamma"] = 2.0;
  j["delta"] = 1.5;
  const auto rep = load_problem(j).check();
  EXPECT_FALSE(verdict(rep, "C5 lower").pass);
  EXPECT_TRUE(verdict(rep, "C5 upper").pass);
}

TEST(Reports, RecomputationIsBitIdentical) {
  for (const char* name : {"example1", "example2", "example3"}) {
    const auto a = preset(name).check();
    const auto b = preset(name).check();
    ASSERT_EQ(a.verdicts.size(), b.verdicts.size());
    for (std::size_t i = 0; i < a.verdicts.size(); ++i) {
      EXPECT_EQ(a.verdicts[i].lhs, b.verdicts[i].lhs);
      EXPECT_EQ(a.verdicts[i].rhs, b.verdicts[i].rhs);
    }
    ASSERT_EQ(a.constants.size(), b.constants.size());
    for (std::size_t i = 0; i < a.constants.size(); ++i) EXPECT_EQ(a.constants[i].second, b.constants[i].second);
  }
}

TEST(Compare, ToleranceOnlyOnNonStrictRelations) {
  EXPECT_TRUE(detail::holds(1.0 - 1e-13, ">=", 1.0));
  EXPECT_FALSE(detail::holds(1.0 - 1e-13, ">", 1.0));
  EXPECT_FALSE(detail::holds(1.0, ">", 1.0));
  EXPECT_TRUE(detail::holds(1.0 + 1e-13, "<=", 1.0));
  EXPECT_FALSE(detail::holds(1.0 - 1e-10, ">=", 1.0));
}

TEST(MinMinusLinear, MatchesSampling) {
  const PiecewiseFunction g({0.0, 1.0, 2.0}, {Polynomial{{0.0, 0.0, 1.0}}, Polynomial{{-2.0, 3.0}}});
  double best = INFINITY;
  for (int k = 0; k <= 200000; ++k) {
    const double s = 2.0 * k / 200000;
    best = std::min(best, g(s) - 0.5 * s);
  }
  EXPECT_NEAR(detail::min_minus_linear(g, 0.5, 1.0, 0.0, 2.0), best, 1e-9);
}
