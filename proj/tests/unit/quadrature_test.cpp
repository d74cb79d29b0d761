#include <gtest/gtest.h>

#include "unimod.hpp"

namespace unimod {
namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(Quadrature, SquaresMatchTheClosedForm) {
  for (double r : {0.05, 0.1, 0.2, 0.3}) {
    const QuadratureResult q = second_moment_general(ConvexRegion::square(r));
    EXPECT_LT(rel(q.value, second_moment_square_exact(r)), 1e-5) << r;
    EXPECT_TRUE(q.symmetric);
    EXPECT_EQ(q.cutoff, static_cast<std::int64_t>(std::ceil(2.0 * std::exp(-2.0 * r))));
  }
}

TEST(Quadrature, DiscsMatchTheClosedForm) {
  for (double R : {1.2, 1.7, 2.5}) {
    const QuadratureResult q = second_moment_general(ConvexRegion::disc(R));
    EXPECT_LT(rel(q.value, second_moment_disc_exact(R)), 1e-5) << R;
  }
}

TEST(Quadrature, RotatedSquareHasTheSameMoment) {
  // Haar measure is invariant under rotations acting on the left.
  const double r = 0.1, h = std::exp(-r);
  for (double phi : {0.3, 1.0, 2.2}) {
    std::vector<Vec2> corners{{-h, -h}, {h, -h}, {h, h}, {-h, h}};
    for (Vec2& c : corners) c = rotate(c, phi);
    const QuadratureResult q = second_moment_general(ConvexRegion::polygon(corners, true));
    EXPECT_LT(rel(q.value, second_moment_square_exact(r)), 1e-5) << phi;
  }
}

TEST(Quadrature, SmallRegionsReduceToTwiceTheMean) {
  // A disc of radius below 1 holds at most one pair +-v of primitive points.
  const QuadratureResult q = second_moment_general(ConvexRegion::disc(0.8));
  EXPECT_NEAR(q.value, 2.0 * siegel_mean_exact(ConvexRegion::disc(0.8)), 1e-12);
  // A region disjoint from its reflection holds at most one primitive point.
  const auto tri = ConvexRegion::polygon({{0.1, 0.1}, {0.7, 0.1}, {0.1, 0.7}});
  EXPECT_NEAR(second_moment_general(tri).value, siegel_mean_exact(tri), 1e-12);
}

TEST(Quadrature, AsymmetricTermsAreReported) {
  const auto region = ConvexRegion::rect(-0.4, -0.9, 1.3, 1.1);
  const QuadratureResult q = second_moment_general(region);
  EXPECT_FALSE(q.symmetric);
  EXPECT_EQ(q.terms.size(), static_cast<std::size_t>(q.cutoff));
  double sum = (area_and_symmetry(region).area + area_and_symmetry(region).symmetric_area) / kZeta2;
  for (double t : q.terms) sum += t;
  EXPECT_NEAR(sum, q.value, 1e-12);
  EXPECT_LT(q.error, 1e-6 * q.value);
}

TEST(Quadrature, ToleranceOutsideTheSupportedRange) {
  QuadratureOptions o;
  o.tol = 1e-9;
  EXPECT_THROW(second_moment_general(ConvexRegion::square(0.1), o), ArgumentError);
  o.tol = 0.1;
  EXPECT_THROW(second_moment_general(ConvexRegion::square(0.1), o), ArgumentError);
}

TEST(Quadrature, CellBudgetExhaustionCarriesAnEstimate) {
  QuadratureOptions o;
  o.tol = 1e-8;
  o.max_cells = 50;
  try {
    second_moment_general(ConvexRegion::disc(2.0), o);
    FAIL() << "expected a convergence error";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.best_estimate(), 0.0);
    EXPECT_NEAR(e.best_estimate(), second_moment_disc_exact(2.0), 0.05 * second_moment_disc_exact(2.0));
  }
}

TEST(Quadrature, IntervalLengthOfZeroDirectionIsZero) {
  EXPECT_EQ(interval_length(ConvexRegion::disc(1.0), {0.0, 0.0}, 1.0), 0.0);
  // n = 0: the line through the origin along x meets the disc in a chord of length 2R/|x|.
  EXPECT_NEAR(interval_length(ConvexRegion::disc(1.0), {0.5, 0.0}, 0.0), 4.0, 1e-14);
}

}  // namespace
}  // namespace unimod
