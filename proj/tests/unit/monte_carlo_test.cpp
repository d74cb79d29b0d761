#include <gtest/gtest.h>

#include "unimod.hpp"

namespace unimod {
namespace {

MonteCarloOptions options(std::uint64_t seed, std::size_t n, unsigned workers = 2) {
  MonteCarloOptions o;
  o.seed = seed;
  o.samples = n;
  o.workers = workers;
  return o;
}

TEST(MonteCarlo, SiegelMeanOfDisc) {
  const MonteCarloResult r = mc_moment(ConvexRegion::disc(1.0), 1, options(1, 200000));
  EXPECT_NEAR(r.mean, 6.0 / kPi, 5.0 * r.standard_error);
  EXPECT_EQ(r.samples, 200000u);
}

TEST(MonteCarlo, SymmetricRegionsHaveEvenCounts) {
  const MonteCarloResult r = mc_moment(ConvexRegion::square(0.1), 2, options(2, 50000));
  for (const auto& [count, times] : r.histogram) EXPECT_EQ(count % 2, 0u) << count;
  EXPECT_NEAR(r.mean, second_moment_square_exact(0.1), 5.0 * r.standard_error);
}

TEST(MonteCarlo, AsymmetricSecondMomentMatchesQuadrature) {
  const auto region = ConvexRegion::rect(-0.4, -0.9, 1.3, 1.1);
  const MonteCarloResult r = mc_moment(region, 2, options(3, 400000));
  EXPECT_NEAR(r.mean, second_moment_general(region).value, 5.0 * r.standard_error);
}

TEST(MonteCarlo, ResultsDoNotDependOnWorkerCount) {
  const auto region = ConvexRegion::disc(1.3);
  const MonteCarloResult a = mc_moment(region, 2, options(4, 30000, 1));
  const MonteCarloResult b = mc_moment(region, 2, options(4, 30000, 3));
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.standard_error, b.standard_error);
  EXPECT_EQ(a.histogram, b.histogram);
  const FractionEstimate c = mc_kr_fraction(0.2, options(5, 30000, 1));
  const FractionEstimate d = mc_kr_fraction(0.2, options(5, 30000, 4));
  EXPECT_EQ(c.hits, d.hits);
}

TEST(MonteCarlo, DifferentSeedsGiveDifferentSamples) {
  const auto region = ConvexRegion::disc(1.3);
  EXPECT_NE(mc_moment(region, 1, options(6, 20000)).mean, mc_moment(region, 1, options(7, 20000)).mean);
}

TEST(MonteCarlo, KrFractionMatchesTheExactMeasure) {
  for (double r : {0.1, 0.3, 0.6}) {
    const FractionEstimate f = mc_kr_fraction(r, options(8, 200000));
    EXPECT_NEAR(f.fraction, kr_measure_exact(r), 5.0 * f.standard_error) << r;
  }
}

TEST(MonteCarlo, ArgumentChecks) {
  EXPECT_THROW(mc_moment(ConvexRegion::disc(1.0), 3, options(1, 1000)), ArgumentError);
  EXPECT_THROW(mc_moment(ConvexRegion::disc(1.0), 1, options(1, 999)), ArgumentError);
  EXPECT_THROW(mc_kr_fraction(-0.1, options(1, 1000)), ArgumentError);
}

TEST(MonteCarlo, FractionStandardError) {
  const FractionEstimate f = make_fraction(25, 100);
  EXPECT_DOUBLE_EQ(f.fraction, 0.25);
  EXPECT_NEAR(f.standard_error, std::sqrt(0.25 * 0.75 / 99.0), 1e-15);
}

TEST(Parallel, BlocksComeBackInOrderAndErrorsPropagate) {
  const auto out = run_blocks<std::size_t>(100, 7, 3, [](std::size_t b, std::size_t, std::size_t) { return b; });
  ASSERT_EQ(out.size(), 15u);
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], i);
  EXPECT_THROW(run_blocks<int>(10, 1, 2,
                               [](std::size_t b, std::size_t, std::size_t) -> int {
                                 if (b == 4) throw RangeError("block 4");
                                 return 0;
                               }),
               RangeError);
}

}  // namespace
}  // namespace unimod
