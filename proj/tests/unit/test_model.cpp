#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cda/expression.hpp"
#include "cda/model.hpp"

using namespace cda;

TEST(Example1, ValuesAtOrigin) {
  const ProblemSpec s = example1_spec();
  EXPECT_DOUBLE_EQ(s.q({0, 0}), 5.0);
  EXPECT_DOUBLE_EQ(s.b1({0, 0}), 3.0);
  EXPECT_DOUBLE_EQ(s.b2({0, 0}), 4.0);
  EXPECT_DOUBLE_EQ(s.c({0, 0}), 4.0);
}

TEST(Example1, FormulasAtAnInteriorPoint) {
  const ProblemSpec s = example1_spec();
  const double x = 0.3, y = 0.8;
  EXPECT_NEAR(s.q({x, y}), 2 * std::sin(3 * M_PI * x) * std::sin(2 * M_PI * y) - 0.7 * x + 5, 1e-14);
  EXPECT_NEAR(s.b1({x, y}), 2 * x * x - y * y + 3, 1e-14);
  EXPECT_NEAR(s.b2({x, y}), std::exp(x * x) - 2 * y * std::sin(3 * x) + 3, 1e-14);
  EXPECT_NEAR(s.c({x, y}), std::exp(0.2 * x + 0.3 * y) + std::cos(2 * x) * std::cos(4 * y) + 2, 1e-14);
  EXPECT_NEAR(s.f({x, y}),
              1.5 * std::sin(6 * x - 0.4) * std::cos(3 * y + 0.6) + 6 * (y - 1) * y + 6, 1e-14);
}

TEST(Example1, ConductivityBoundsOnSampleGrid) {
  const ProblemSpec s = example1_spec();
  double lo = 1e300, hi = -1e300;
  for (int j = 0; j <= 200; ++j) {
    for (int i = 0; i <= 200; ++i) {
      const double v = s.q({i / 200.0, j / 200.0});
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_GE(lo, 2.3 - 1e-12);
  EXPECT_LE(hi, 7.0 + 1e-12);
  EXPECT_DOUBLE_EQ(s.q_bounds.lo, 2.3);
  EXPECT_DOUBLE_EQ(s.q_bounds.hi, 7.0);
  EXPECT_NO_THROW(s.validate());
}

TEST(Example2, ValuesAndBranches) {
  const ProblemSpec s = example2_spec();
  EXPECT_DOUBLE_EQ(s.q({0, 0}), 5.0);
  EXPECT_NEAR(s.q({1, 0}), 2.8, 1e-14);
  EXPECT_NEAR(s.f({0.5, 0.5}), 5 + 1.8 * std::exp(-0.5) * std::exp(0.25) + 2, 1e-14);
  // Both branches agree at x = 0.4, and x = 0.4 belongs to the second one.
  EXPECT_NEAR(20 * 0.16 + 1, 15 * 0.36 - 1.2, 1e-12);
  EXPECT_NEAR(s.q({0.4, 0.0}), 4 + 15 * 0.36 - 1.2, 1e-14);
  EXPECT_NEAR(s.q({0.4 - 1e-13, 0.0}), s.q({0.4, 0.0}), 1e-11);
  EXPECT_NO_THROW(s.validate());
}

TEST(Problems, LookupByName) {
  EXPECT_EQ(problem_by_name("example1").name, "example1");
  try {
    problem_by_name("example3");
    FAIL();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("example1"), std::string::npos);
    EXPECT_NE(msg.find("example2"), std::string::npos);
  }
}

TEST(Problems, FromExpressionsSamplesBounds) {
  const ProblemSpec s = problem_from_expressions("2 + x", "1", "0", "y", "if(x < 0.5, 1, 3)");
  EXPECT_DOUBLE_EQ(s.q_bounds.lo, 2.0);
  EXPECT_DOUBLE_EQ(s.q_bounds.hi, 3.0);
  EXPECT_DOUBLE_EQ(s.c_bound, 1.0);
  EXPECT_DOUBLE_EQ(s.f({0.2, 0.2}), 1.0);
  EXPECT_DOUBLE_EQ(s.f({0.5, 0.2}), 3.0);
  EXPECT_NO_THROW(s.validate());
}

TEST(Problems, ValidateRejectsBadBounds) {
  ProblemSpec s = example1_spec();
  s.q_bounds = {3.0, 7.0};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.q_bounds = {0.0, 7.0};
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Expression, Grammar) {
  EXPECT_DOUBLE_EQ(Expression::parse("1 + 2 * 3")(0, 0), 7.0);
  EXPECT_DOUBLE_EQ(Expression::parse("2 ^ 3 ^ 2")(0, 0), 512.0);
  EXPECT_DOUBLE_EQ(Expression::parse("-2 ^ 2")(0, 0), -4.0);
  EXPECT_DOUBLE_EQ(Expression::parse("(x - y) / 2")(3, 1), 1.0);
  EXPECT_NEAR(Expression::parse("sin(pi/2) + cos(0) + exp(0) + log(1) + sqrt(4) + abs(-1)")(0, 0),
              6.0, 1e-15);
  EXPECT_DOUBLE_EQ(Expression::parse("if(x >= 0.4, 1, 2)")(0.4, 0), 1.0);
  EXPECT_DOUBLE_EQ(Expression::parse("if(x >= 0.4, 1, 2)")(0.39, 0), 2.0);
  EXPECT_DOUBLE_EQ(Expression::parse("1.5e-1")(0, 0), 0.15);
}

TEST(Expression, ErrorsCarryPosition) {
  for (const char* bad : {"1 +", "sin(x", "foo(1)", "x $ y", "if(x, 1, 2)", ""}) {
    EXPECT_THROW(Expression::parse(bad), ExpressionError) << bad;
  }
  try {
    Expression::parse("1 + * 2");
    FAIL();
  } catch (const ExpressionError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
}

TEST(Noise, ZeroDeltaIsIdentity) {
  Vector v(4);
  v << 1, -2, 0, 3.5;
  const Vector out = apply_noise(v, 0.0, 99);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(out[i], v[i]);
}

TEST(Noise, StaysInTheInterval) {
  Vector v = Vector::LinSpaced(200, -3.0, 5.0);
  for (double delta : {0.01, 0.1, 0.5}) {
    const Vector out = apply_noise(v, delta, 4);
    for (int i = 0; i < v.size(); ++i) EXPECT_LE(std::abs(out[i] - v[i]), delta * std::abs(v[i]) + 1e-15);
  }
}

TEST(Noise, RejectsOutOfRangeDelta) {
  Vector v = Vector::Ones(3);
  EXPECT_THROW(apply_noise(v, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(apply_noise(v, -0.1, 0), std::invalid_argument);
}

TEST(Noise, BitReproducibleAndSeedDependent) {
  Vector v = Vector::LinSpaced(50, 1.0, 2.0);
  const Vector a = apply_noise(v, 0.05, 123), b = apply_noise(v, 0.05, 123),
               c = apply_noise(v, 0.05, 124);
  for (int i = 0; i < v.size(); ++i) EXPECT_EQ(a[i], b[i]);
  EXPECT_GT((a - c).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Noise, FirstDrawMatchesDocumentedGenerator) {
  // The standard pins the 10000th output for the default seed 5489, so the
  // sequence is portable.
  std::mt19937_64 ref;
  ref.discard(9999);
  EXPECT_EQ(ref(), 9981545732273789042ull);
  std::mt19937_64 g(5489);
  const double u = static_cast<double>(g() >> 11) * 0x1.0p-53;
  Vector v(1);
  v << 2.0;
  EXPECT_EQ(apply_noise(v, 0.5, 5489)[0], 2.0 * (1.0 + 0.5 * (2.0 * u - 1.0)));
}

TEST(Noise, MonteCarloMeanIsUnbiased) {
  Vector v(3);
  v << 1.0, -2.0, 0.5;
  const double delta = 0.1;
  const int runs = 10000;
  Vector mean = Vector::Zero(3);
  for (int s = 0; s < runs; ++s) mean += apply_noise(v, delta, s);
  mean /= runs;
  for (int i = 0; i < 3; ++i) {
    EXPECT_LE(std::abs(mean[i] - v[i]), 3 * (delta * std::abs(v[i]) / std::sqrt(3.0)) / 100);
  }
}
