#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

namespace unimod {
namespace {

TEST(Haar, CounterRngIsAPureFunctionOfSeedStreamAndIndex) {
  CounterRng a(5, 3), b(5, 3), c(5, 4), d(6, 3);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_NE(x, c.next());
    EXPECT_NE(x, d.next());
    seen.insert(x);
  }
  EXPECT_EQ(seen.size(), 1000u);
}

TEST(Haar, UniformsStayInTheHalfOpenUnitInterval) {
  CounterRng rng(1, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(Haar, BasePointsLieInTheFundamentalDomain) {
  HaarSampler s(9);
  for (int i = 0; i < 20000; ++i) {
    const BasePoint p = s.sample_base_point();
    ASSERT_LE(std::abs(p.x), 0.5);
    ASSERT_GE(p.x * p.x + p.y * p.y, 1.0);
    ASSERT_GE(p.phi, 0.0);
    ASSERT_LT(p.phi, 2.0 * kPi);
  }
}

TEST(Haar, HyperbolicAreaDistribution) {
  // Under dx dy / y^2 on the modular domain (area pi/3), P(y > 2) = (1/2) / (pi/3).
  HaarSampler s(10);
  const int n = 200000;
  int above = 0;
  for (int i = 0; i < n; ++i) above += s.sample_base_point().y > 2.0;
  const double p = 1.5 / kPi;
  EXPECT_NEAR(static_cast<double>(above) / n, p, 5.0 * std::sqrt(p * (1 - p) / n));
  // Rejected mass: the strip above y = sqrt(3)/2 has area 2/sqrt(3).
  const double reject = 1.0 - (kPi / 3.0) / (2.0 / std::sqrt(3.0));
  EXPECT_NEAR(s.rejection_rate(), reject, 5.0 * std::sqrt(reject * (1 - reject) / n));
}

TEST(Haar, SamplesAreReproducibleAndUnimodular) {
  HaarSampler a(77, 4), b(77, 4);
  for (int i = 0; i < 1000; ++i) {
    const LatticeBasis x = a.sample_lattice();
    const LatticeBasis y = b.sample_lattice();
    EXPECT_EQ(x.b1().x, y.b1().x);
    EXPECT_EQ(x.b2().y, y.b2().y);
    EXPECT_NEAR(x.det(), 1.0, 1e-12);
  }
}

TEST(Haar, LatticeFromBasePointHasTheRightShortestVector) {
  // Before rotation the first column is (1/sqrt(y), 0): the shortest vector.
  const BasePoint p{0.2, 1.7, 0.0};
  const LatticeBasis b = HaarSampler::lattice_from(p);
  EXPECT_NEAR(norm(reduce(b).u), 1.0 / std::sqrt(1.7), 1e-14);
}

TEST(Haar, TranslateSamplesAreShears) {
  HaarSampler s(3);
  for (int i = 0; i < 100; ++i) {
    const auto [x, b] = s.sample_translate_lattice();
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
    EXPECT_EQ(b.b2().x, x);
  }
}

}  // namespace
}  // namespace unimod
