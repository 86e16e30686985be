#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "equidist/companion.hpp"
#include "equidist/diagnostics.hpp"
#include "support.hpp"

namespace equidist {
namespace {

using testing::paired_max_distance;

const DensePoly kCheb{-2.0, 0.0, 1.0};
const DensePoly kSquare{0.0, 0.0, 1.0};

EmpiricalMeasure circle_measure(int n) {
  std::vector<Complex> pts;
  for (int j = 0; j < n; ++j) pts.push_back(std::polar(1.0, 2.0 * std::numbers::pi * j / n));
  return EmpiricalMeasure::uniform(pts);
}

std::vector<Complex> chebyshev_nodes(int n) {
  std::vector<Complex> x;
  for (int j = 0; j < n; ++j) x.emplace_back(2.0 * std::cos((2.0 * j + 1.0) * std::numbers::pi / (2.0 * n)));
  return x;
}

TEST(KRegularityGap, SquareMapIsExact) {
  const auto ge = GreenEvaluator::filled_julia(kSquare);
  for (int k = 1; k <= 12; ++k) {
    const DiscrepancyReport r = kregularity_gap(FamilySpec::iterate(kSquare), k, 0, ge, 2.0, 64);
    EXPECT_LE(r.sup_gap, 1e-10) << k;
    EXPECT_EQ(r.normalization, std::int64_t{1} << k);
    EXPECT_EQ(r.n_probes, 64);
    EXPECT_EQ(r.probe_circle_radius, 2.0);
  }
}

TEST(KRegularityGap, ChebyshevBaseFamilyAtRoundoff) {
  // Truncation is O(|P^k(4)|^-2 / 2^k): about 3e-11 at k = 3 and far below
  // double precision from k = 5 on, so the two values are compared by bound.
  const auto ge = GreenEvaluator::filled_julia(kCheb);
  const auto spec = FamilySpec::iterate(kCheb);
  const double g3 = kregularity_gap(spec, 3, 0, ge, 4.0, 64).sup_gap;
  const double g5 = kregularity_gap(spec, 5, 0, ge, 4.0, 64).sup_gap;
  const double g10 = kregularity_gap(spec, 10, 0, ge, 4.0, 64).sup_gap;
  EXPECT_GT(g3, 1e-12);
  EXPECT_LE(g5, 1e-12);
  EXPECT_LE(g10, 1e-12);
}

TEST(KRegularityGap, DerivativeFamilyInheritsRegularity) {
  const auto ge = GreenEvaluator::filled_julia(kCheb);
  const auto spec = FamilySpec::iterate(kCheb);
  const double g5 = kregularity_gap(spec, 5, 1, ge, 4.0, 64).sup_gap;
  const double g10 = kregularity_gap(spec, 10, 1, ge, 4.0, 64).sup_gap;
  EXPECT_LE(g10, 0.01);
  EXPECT_LT(g10, g5);
  // The derivative carries an extra factor 2^k prod P^j'(..) ~ 2^k 4^k off the
  // leading order, so the gap is close to k ln 2 / (2^k - 1).
  EXPECT_NEAR(g10, 10.0 * std::numbers::ln2 / 1023.0, 2e-3);
}

TEST(KRegularityGap, CriticalOrbitOnParameterPlane) {
  const auto ge = GreenEvaluator::mandelbrot();
  const auto spec = FamilySpec::critical_orbit();
  EXPECT_LT(kregularity_gap(spec, 12, 0, ge, 4.0, 32).sup_gap, kregularity_gap(spec, 4, 0, ge, 4.0, 32).sup_gap);
  EXPECT_LT(kregularity_gap(spec, 12, 1, ge, 4.0, 32).sup_gap, kregularity_gap(spec, 4, 1, ge, 4.0, 32).sup_gap);
}

TEST(KRegularityGap, Errors) {
  const auto ge = GreenEvaluator::filled_julia(kSquare);
  const auto spec = FamilySpec::iterate(kSquare);
  EXPECT_THROW(kregularity_gap(spec, 3, 0, ge, 0.5, 8), Error);   // inside K
  EXPECT_THROW(kregularity_gap(spec, 1, 2, ge, 2.0, 8), Error);   // constant
  EXPECT_THROW(kregularity_gap(spec, 3, 0, ge, 2.0, 0), Error);
  EXPECT_THROW(kregularity_gap(spec, 3, -1, ge, 2.0, 8), Error);
}

TEST(CenteringReport, RootsOnJuliaSetHaveNoMassAbove) {
  for (int k : {1, 5, 64}) {
    const CenteringReport r = centering_report(circle_measure(k), GreenEvaluator::filled_julia(kSquare), 0.1);
    EXPECT_EQ(r.count_above, 0);
    EXPECT_EQ(r.fraction_above, 0.0);
    EXPECT_EQ(r.threshold_tau, 0.1);
  }
}

TEST(CenteringReport, CountsWithMultiplicity) {
  const auto ge = GreenEvaluator::filled_julia(kSquare);
  const EmpiricalMeasure mu = root_distribution(std::vector<Complex>{3.0, 3.0, 0.0, 1.5}, 4);
  const CenteringReport r = centering_report(mu, ge, std::log(2.0));
  EXPECT_EQ(r.count_above, 2);
  EXPECT_DOUBLE_EQ(r.fraction_above, 0.5);
  EXPECT_EQ(centering_report(mu, ge, 0.1).count_above, 3);
  EXPECT_THROW(centering_report(mu, ge, 0.0), Error);
}

TEST(CenteringReport, DerivativeOfCriticalOrbitGolden) {
  AberthConfig cfg;
  cfg.max_iter = 1000;
  const RootSolveReport rep = solve_shifted(FamilySpec::critical_orbit(), 10, 1, 0.0, cfg);
  ASSERT_TRUE(rep.all_converged());
  const EmpiricalMeasure mu = root_distribution(rep.roots, 511);
  const auto ge = GreenEvaluator::mandelbrot();
  const CenteringReport r2 = centering_report(mu, ge, 0.2);
  EXPECT_LE(r2.count_above, 5);
  EXPECT_EQ(r2.count_above, std::llround(r2.fraction_above * 511));
  EXPECT_LE(centering_report(mu, ge, 0.05).fraction_above, 0.1);
}

TEST(CenteringReport, PerturbedShiftKeepsTheBound) {
  // a_k = k grows like log k = o(n_k): the count above 0.2 stays at the a = 0 level.
  AberthConfig cfg;
  cfg.max_iter = 1000;
  const auto ge = GreenEvaluator::mandelbrot();
  const auto spec = FamilySpec::critical_orbit();
  for (int k = 5; k <= 10; ++k) {
    const auto base = solve_shifted(spec, k, 0, 0.0, cfg);
    const auto pert = solve_shifted(spec, k, 0, static_cast<double>(k), cfg);
    ASSERT_TRUE(base.all_converged() && pert.all_converged()) << k;
    const int n = static_cast<int>(base.roots.size());
    const auto c0 = centering_report(root_distribution(base.roots, n), ge, 0.2).count_above;
    const auto c1 = centering_report(root_distribution(pert.roots, n), ge, 0.2).count_above;
    EXPECT_LE(c0, 5) << k;
    EXPECT_LE(c1, 5) << k;
  }
}

TEST(MomentGap, Examples) {
  const EmpiricalMeasure circle = circle_measure(4096);
  const MomentGapReport self = moment_gap(circle, circle, 8);
  EXPECT_EQ(self.max_gap, 0.0);
  EXPECT_EQ(self.gaps.size(), 45u);

  EXPECT_LE(moment_gap(circle_measure(256), circle, 8).max_gap, 1e-12);

  const MomentGapReport delta = moment_gap(root_distribution(std::vector<Complex>(16, 0.0), 16), circle, 8);
  EXPECT_EQ(delta.gap(1, 1), 1.0);
  EXPECT_GE(delta.max_gap, 1.0);
  EXPECT_EQ(delta.gap(0, 0), 0.0);
  EXPECT_LE(delta.gap(1, 0), 1e-15);
  EXPECT_THROW(delta.gap(9, 0), Error);
}

TEST(MomentGap, DirectSumsOnSmallMeasure) {
  const EmpiricalMeasure mu({Complex(1.0, 2.0), Complex(-0.5, 0.25)}, {0.25, 0.75}, 4);
  const EmpiricalMeasure zero = EmpiricalMeasure::uniform({0.0});
  const MomentGapReport r = moment_gap(mu, zero, 4);
  for (const auto& g : r.gaps) {
    if (g.p + g.q == 0) continue;
    Complex want{};
    for (std::size_t i = 0; i < 2; ++i) {
      const Complex z = mu.points()[i];
      want += mu.weights()[i] * std::pow(z, g.p) * std::pow(std::conj(z), g.q);
    }
    EXPECT_NEAR(g.gap, std::abs(want), 1e-13) << g.p << "," << g.q;
    EXPECT_GE(g.gap, 0.0);
  }
  EXPECT_THROW(moment_gap(mu, zero, 9), Error);
}

TEST(MomentGap, ChebyshevRootsApproachArcsineMoments) {
  const EmpiricalMeasure ref = EmpiricalMeasure::uniform(chebyshev_nodes(4096));
  const auto spec = FamilySpec::iterate(kCheb);
  auto gap_at = [&](int k) {
    const auto rep = solve_shifted(spec, k, 0, 0.5, {});
    return moment_gap(root_distribution(rep.roots, static_cast<int>(rep.roots.size())), ref, 8).max_gap;
  };
  const double g3 = gap_at(3);
  const double g8 = gap_at(8);
  EXPECT_LE(g8, 0.05);
  EXPECT_LT(g8, g3);
}

TEST(ChebyshevOracle, Examples) {
  EXPECT_LE(paired_max_distance(chebyshev_oracle_roots(1, 0, 0.0), {std::sqrt(2.0), -std::sqrt(2.0)}), 1e-15);
  EXPECT_LE(paired_max_distance(chebyshev_oracle_roots(2, 1, 0.0), {std::sqrt(2.0), 0.0, -std::sqrt(2.0)}), 1e-15);
  std::vector<Complex> want;
  for (int j = 0; j < 8; ++j) want.emplace_back(2.0 * std::cos((std::numbers::pi / 3.0 + 2.0 * std::numbers::pi * j) / 8.0));
  const auto got = chebyshev_oracle_roots(3, 0, 1.0);
  EXPECT_LE(paired_max_distance(got, want), 1e-15);
  EXPECT_LE(paired_max_distance(got, solve_shifted(FamilySpec::iterate(kCheb), 3, 0, 1.0, {}).roots), 1e-10);
}

TEST(ChebyshevOracle, MatchesCompanionEigenvalues) {
  // Expanded coefficients grow like 4^(2^k); past degree 16 the eigenvalues
  // near +-2 lose digits.
  for (int k = 1; k <= 4; ++k) {
    const DensePoly pk = expand_family(FamilySpec::iterate(kCheb), k);
    EXPECT_LE(paired_max_distance(chebyshev_oracle_roots(k, 1, 0.0), companion_oracle(derivative(pk, 1))), 1e-8) << k;
    EXPECT_LE(paired_max_distance(chebyshev_oracle_roots(k, 0, -0.7), companion_oracle(pk - DensePoly{-0.7})), 1e-8) << k;
  }
}

TEST(ChebyshevOracle, UnsupportedInputs) {
  EXPECT_THROW(chebyshev_oracle_roots(3, 2, 0.0), Error);
  EXPECT_THROW(chebyshev_oracle_roots(3, 0, Complex(0.0, 1.0)), Error);
  EXPECT_THROW(chebyshev_oracle_roots(3, 0, 2.5), Error);
  EXPECT_THROW(chebyshev_oracle_roots(3, 1, 0.5), Error);
}

TEST(ArcsineKs, Examples) {
  EXPECT_LE(arcsine_ks_distance(chebyshev_nodes(256)), 1.0 / 256.0);
  const std::vector<Complex> zero{0.0};
  EXPECT_DOUBLE_EQ(arcsine_ks_distance(zero), 0.5);
  EXPECT_LE(arcsine_ks_distance(chebyshev_oracle_roots(8, 0, 0.5)), 0.01);
  const std::vector<Complex> bad{Complex(0.0, 1e-3)};
  EXPECT_THROW(arcsine_ks_distance(bad), Error);
  const std::vector<Complex> nearly_real{Complex(0.0, 1e-9)};
  EXPECT_NO_THROW(arcsine_ks_distance(nearly_real));
}

TEST(LeadingCoeffGap, Examples) {
  const RobinEstimate zero{0.0, {1e3}, 0.0};
  EXPECT_EQ(leading_coeff_gap(FamilySpec::critical_orbit(), 6, zero), 0.0);
  EXPECT_EQ(leading_coeff_gap(FamilySpec::iterate(kCheb), 4, zero), 0.0);
  EXPECT_LE(leading_coeff_gap(FamilySpec::critical_orbit(), 10, robin_constant(GreenEvaluator::mandelbrot())), 1e-3);
  for (int k : {1, 4, 9}) {
    std::vector<Complex> c(static_cast<std::size_t>(k) + 1, 0.0);
    c.back() = 3.0;
    EXPECT_NEAR(leading_coeff_gap(DensePoly(c), zero), std::log(3.0) / k, 1e-15);
  }
  EXPECT_THROW(leading_coeff_gap(DensePoly{2.0}, zero), Error);
}

TEST(TwoSidedness, KRegularButNotCenteredOnJulia) {
  // z^(2^k): exact potential agreement, yet all roots sit at the origin.
  const auto ge = GreenEvaluator::filled_julia(kSquare);
  const EmpiricalMeasure circle = circle_measure(4096);
  for (int k = 1; k <= 10; ++k) {
    EXPECT_LE(kregularity_gap(FamilySpec::iterate(kSquare), k, 0, ge, 2.0, 64).sup_gap, 1e-10);
    const int n = 1 << k;
    EXPECT_GE(moment_gap(root_distribution(std::vector<Complex>(static_cast<std::size_t>(n), 0.0), n), circle, 8).max_gap,
              1.0);
  }
}

TEST(TwoSidedness, OrthogonalFamilyOfCircleIsMonomials) {
  // The same family arises as the monic orthogonal polynomials of the circle.
  const EmpiricalMeasure circle = circle_measure(64);
  const auto spec = FamilySpec::orthogonal(circle);
  const auto ge = GreenEvaluator::filled_julia(kSquare);
  for (int k = 1; k <= 8; ++k) EXPECT_LE(kregularity_gap(spec, k, 0, ge, 2.0, 64).sup_gap, 1e-10) << k;
}

TEST(ReportJson, FlatKeys) {
  const nlohmann::json d = DiscrepancyReport{0.5, 4.0, 8, 3};
  EXPECT_EQ(d["sup_gap"], 0.5);
  EXPECT_EQ(d["normalization"], 3);
  const nlohmann::json c = CenteringReport{0.2, 3, 0.1};
  EXPECT_EQ(c["count_above"], 3);
  const nlohmann::json m = moment_gap(circle_measure(4), circle_measure(4), 1);
  EXPECT_EQ(m["gaps"].size(), 3u);
  EXPECT_EQ(m["max_gap"], 0.0);
}

}  // namespace
}  // namespace equidist
