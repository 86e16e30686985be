#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "equidist/potential.hpp"

namespace equidist {
namespace {

// Green's function of [-2, 2]: z = w + 1/w with |w| > 1 gives g(z) = log|w|.
double segment_green(Complex z) {
  Complex w = (z + std::sqrt(z * z - 4.0)) / 2.0;
  if (std::abs(w) < 1.0) w = 1.0 / w;
  return std::log(std::abs(w));
}

std::vector<Complex> unity_roots(int n) {
  std::vector<Complex> r;
  for (int j = 0; j < n; ++j) r.push_back(std::polar(1.0, 2.0 * std::numbers::pi * j / n));
  return r;
}

TEST(GreenEval, Examples) {
  const GreenEvaluator m = GreenEvaluator::mandelbrot();
  EXPECT_EQ(green_eval(m, 0.0), 0.0);
  EXPECT_EQ(green_eval(m, -2.0), 0.0);
  EXPECT_NEAR(green_eval(GreenEvaluator::filled_julia(DensePoly{0.0, 0.0, 1.0}), 3.0), std::log(3.0), 1e-12);
}

TEST(GreenEval, SquareMapIsLogModulusEverywhereOutside) {
  const GreenEvaluator ge = GreenEvaluator::filled_julia(DensePoly{0.0, 0.0, 1.0});
  for (double r : {1.001, 1.1, 1.9, 2.5, 1e3, 1e10})
    for (double t : {0.0, 1.0, 2.5})
      EXPECT_NEAR(green_eval(ge, std::polar(r, t)), std::log(r), 1e-12 * std::max(1.0, std::log(r)));
  EXPECT_EQ(green_eval(ge, 0.999), 0.0);
}

TEST(GreenEval, ChebyshevMapMatchesSegmentGreen) {
  const GreenEvaluator ge = GreenEvaluator::filled_julia(DensePoly{-2.0, 0.0, 1.0});
  for (Complex z : {Complex(3.0), Complex(4.0), Complex(0.0, 0.5), Complex(1.0, 1.0), Complex(-2.1, 0.01),
                    Complex(100.0, -50.0)})
    EXPECT_NEAR(green_eval(ge, z), segment_green(z), 1e-12) << z;
  EXPECT_EQ(green_eval(ge, 1.3), 0.0);
}

TEST(GreenEval, NonMonicMapCarriesLeadingCoefficient) {
  // 2z^2 is conjugate to z^2 by w = 2z, so g(z) = log|2z|.
  const GreenEvaluator ge = GreenEvaluator::filled_julia(DensePoly{0.0, 0.0, 2.0});
  for (double r : {0.6, 1.0, 7.0}) EXPECT_NEAR(green_eval(ge, Complex(0.0, r)), std::log(2.0 * r), 1e-12);
}

TEST(GreenEval, ParameterPlaneEqualsDynamicalGreenAtCriticalValue) {
  const GreenEvaluator m = GreenEvaluator::mandelbrot();
  for (Complex c : {Complex(0.5), Complex(0.3, 0.6), Complex(-1.0, 0.4), Complex(-2.2), Complex(5.0, 5.0)}) {
    const GreenEvaluator dyn = GreenEvaluator::filled_julia(DensePoly{c, 0.0, 1.0});
    const double want = green_eval(dyn, c);
    EXPECT_NEAR(green_eval(m, c), want, 1e-12 * std::max(1.0, want)) << c;
  }
}

TEST(GreenEval, InvariantUnderDepthDoubling) {
  const GreenEvaluator a = GreenEvaluator::mandelbrot(500);
  const GreenEvaluator b = GreenEvaluator::mandelbrot(1000);
  for (double x = -2.4; x <= 1.0; x += 0.17)
    for (double y = -1.3; y <= 1.3; y += 0.19) {
      const double ga = green_eval(a, {x, y});
      if (ga == 0.0) continue;
      EXPECT_NEAR(ga, green_eval(b, {x, y}), 1e-9);
    }
}

TEST(GreenEval, NonNegativeAndLogAsymptotic) {
  const GreenEvaluator m = GreenEvaluator::mandelbrot();
  for (double x = -2.4; x <= 1.0; x += 0.1)
    for (double y = -1.3; y <= 1.3; y += 0.1) EXPECT_GE(green_eval(m, {x, y}), 0.0);
  for (double r : {1e4, 1e6, 1e8}) EXPECT_NEAR(green_eval(m, r) - std::log(r), 0.0, 2.0 / r);
}

TEST(GreenEval, RejectsNonFinite) {
  EXPECT_THROW(green_eval(GreenEvaluator::mandelbrot(), Complex(NAN, 0.0)), Error);
  EXPECT_THROW(GreenEvaluator::filled_julia(DensePoly{1.0, 1.0}), Error);
}

TEST(PotentialOfMeasure, Examples) {
  const EmpiricalMeasure delta = EmpiricalMeasure::uniform({0.0});
  EXPECT_NEAR(potential_of_measure(delta, std::polar(5.0, 0.4)), std::log(5.0), 1e-15);
  for (int n : {1, 4, 16, 40}) {
    const EmpiricalMeasure mu = EmpiricalMeasure::uniform(unity_roots(n));
    EXPECT_NEAR(potential_of_measure(mu, 2.0), std::log(std::ldexp(1.0, n) - 1.0) / n, 1e-14);
    EXPECT_NEAR(potential_of_measure(mu, 0.0), 0.0, 1e-14);
  }
}

TEST(PotentialOfMeasure, CollisionIsMinusInfinity) {
  const EmpiricalMeasure mu = EmpiricalMeasure::uniform({0.0, 1.0});
  EXPECT_EQ(potential_of_measure(mu, 1.0), -std::numeric_limits<double>::infinity());
  const EmpiricalMeasure zero_weight({0.0, 1.0}, {1.0, 0.0}, 1);
  EXPECT_NEAR(potential_of_measure(zero_weight, 1.0), 0.0, 0.0);
}

TEST(PotentialOfMeasure, MeanValueOffSupport) {
  const EmpiricalMeasure mu = brolin_sample(DensePoly{-2.0, 0.0, 1.0}, 500, 30, 5);
  for (Complex z : {Complex(3.0), Complex(0.0, 1.0), Complex(-2.5, -0.5)}) {
    const double r = 1e-3;
    double mean = 0.0;
    for (int j = 0; j < 8; ++j) mean += potential_of_measure(mu, z + std::polar(r, 2.0 * std::numbers::pi * j / 8)) / 8;
    EXPECT_NEAR(mean, potential_of_measure(mu, z), 1e-6) << z;
  }
}

TEST(RobinConstant, CapacityOneSets) {
  const RobinEstimate sq = robin_constant(GreenEvaluator::filled_julia(DensePoly{0.0, 0.0, 1.0}));
  EXPECT_LE(std::abs(sq.value), 1e-10);
  EXPECT_EQ(sq.radii, (std::vector<double>{1e3, 1e4, 1e5}));
  EXPECT_LE(std::abs(robin_constant(GreenEvaluator::filled_julia(DensePoly{-2.0, 0.0, 1.0})).value), 1e-3);
  const RobinEstimate m = robin_constant(GreenEvaluator::mandelbrot());
  EXPECT_LE(std::abs(m.value), 1e-3);
  EXPECT_LE(m.spread, 1e-3);
}

TEST(RobinConstant, NonMonicMap) {
  // Filled Julia set of 2z^2 is the disk of radius 1/2.
  const RobinEstimate r = robin_constant(GreenEvaluator::filled_julia(DensePoly{0.0, 0.0, 2.0}));
  EXPECT_NEAR(r.value, std::log(0.5), 1e-10);
}

TEST(RobinConstant, ProbesInsideSetAreRejected) {
  EXPECT_THROW(robin_constant(GreenEvaluator::filled_julia(DensePoly{0.0, 0.0, 1.0}), {0.5}), Error);
  EXPECT_THROW(robin_constant(GreenEvaluator::mandelbrot(), {}), Error);
}

TEST(BrolinSample, SquareMapGivesUniformCircle) {
  const int n = 10000;
  const EmpiricalMeasure mu = brolin_sample(DensePoly{0.0, 0.0, 1.0}, n, 40, 17);
  ASSERT_EQ(mu.size(), static_cast<std::size_t>(n));
  for (const auto& z : mu.points()) EXPECT_LE(std::abs(std::abs(z) - 1.0), 1e-6);
  for (int p = 1; p <= 4; ++p) {
    Complex s{};
    for (const auto& z : mu.points()) s += std::pow(z, p);
    EXPECT_LE(std::abs(s) / n, 3.0 / std::sqrt(static_cast<double>(n))) << p;
  }
}

TEST(BrolinSample, ChebyshevMapStaysOnSegment) {
  const EmpiricalMeasure mu = brolin_sample(DensePoly{-2.0, 0.0, 1.0}, 10000, 40, 2);
  for (const auto& z : mu.points()) {
    EXPECT_LE(std::abs(z.imag()), 1e-6);
    EXPECT_LE(std::abs(z.real()), 2.0 + 1e-12);
  }
}

TEST(BrolinSample, CubicUsesGeneralInverseBranches) {
  const int n = 3000;
  const EmpiricalMeasure mu = brolin_sample(DensePoly{0.0, 0.0, 0.0, 1.0}, n, 25, 4);
  Complex s{};
  for (const auto& z : mu.points()) {
    EXPECT_LE(std::abs(std::abs(z) - 1.0), 1e-6);
    s += z;
  }
  EXPECT_LE(std::abs(s) / n, 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST(BrolinSample, DeterministicPerSeed) {
  const DensePoly p{Complex(-0.1, 0.65), 0.0, 1.0};
  const EmpiricalMeasure a = brolin_sample(p, 200, 20, 8);
  const EmpiricalMeasure b = brolin_sample(p, 200, 20, 8);
  const EmpiricalMeasure c = brolin_sample(p, 200, 20, 9);
  EXPECT_TRUE(std::equal(a.points().begin(), a.points().end(), b.points().begin()));
  EXPECT_FALSE(std::equal(a.points().begin(), a.points().end(), c.points().begin()));
}

TEST(BrolinSample, Preconditions) {
  EXPECT_THROW(brolin_sample(DensePoly{0.0, 0.0, 2.0}, 10, 40, 0), Error);
  EXPECT_THROW(brolin_sample(DensePoly{0.0, 1.0}, 10, 40, 0), Error);
  EXPECT_THROW(brolin_sample(DensePoly{0.0, 0.0, 1.0}, 10, 19, 0), Error);
  EXPECT_THROW(brolin_sample(DensePoly{0.0, 0.0, 1.0}, 0, 40, 0), Error);
}

TEST(PotentialIdentity, GreenEqualsPotentialMinusRobin) {
  for (const DensePoly& p : {DensePoly{0.0, 0.0, 1.0}, DensePoly{-2.0, 0.0, 1.0}, DensePoly{Complex(-0.1, 0.65), 0.0, 1.0}}) {
    const int n = 20000;
    const EmpiricalMeasure mu = brolin_sample(p, n, 40, 11);
    const GreenEvaluator ge = GreenEvaluator::filled_julia(p);
    const double robin = robin_constant(ge).value;
    for (int j = 0; j < 20; ++j) {
      const Complex z = std::polar(4.0, 2.0 * std::numbers::pi * j / 20);
      EXPECT_LE(std::abs(potential_of_measure(mu, z) - robin - green_eval(ge, z)), 5.0 / std::sqrt(n) + 1e-3)
          << "p=" << p[0] << " z=" << z;
    }
  }
}

}  // namespace
}  // namespace equidist
