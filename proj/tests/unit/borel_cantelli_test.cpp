#include <gtest/gtest.h>

#include "unimod.hpp"

namespace unimod {
namespace {

TEST(BorelCantelli, DyadicWindowsCoverTheRange) {
  const auto w = dyadic_windows(1.0, 1000.0);
  ASSERT_FALSE(w.empty());
  EXPECT_EQ(w.front().first, 1.0);
  EXPECT_EQ(w.back().second, 1000.0);
  EXPECT_EQ(w.back().first, 500.0);
  for (std::size_t i = 1; i < w.size(); ++i) EXPECT_EQ(w[i].first, w[i - 1].second);
  EXPECT_THROW(dyadic_windows(5.0, 5.0), DomainError);
}

TEST(BorelCantelli, SlowRateHitsMoreOftenThanFastRate) {
  BcOptions o;
  o.seed = 81;
  o.orbits = 100;
  o.s_max = 200.0;
  const HitStatistics slow = bc_experiment(RateFunction::power(1.0), o);
  const HitStatistics fast = bc_experiment(RateFunction::power(2.0), o);
  EXPECT_GT(slow.windows.back().fraction, 0.5);
  EXPECT_LT(fast.windows.back().fraction, 0.2);
  EXPECT_EQ(slow.uncertified_gaps, 0u);
  EXPECT_EQ(slow.first_hits.size(), 100u);
}

TEST(BorelCantelli, ResultsDoNotDependOnWorkerCount) {
  BcOptions o;
  o.seed = 82;
  o.orbits = 100;
  o.s_max = 100.0;
  o.start = OrbitStart::translate;
  o.workers = 1;
  const HitStatistics a = bc_experiment(RateFunction::power(1.0), o);
  o.workers = 3;
  const HitStatistics b = bc_experiment(RateFunction::power(1.0), o);
  ASSERT_EQ(a.windows.size(), b.windows.size());
  for (std::size_t i = 0; i < a.windows.size(); ++i) EXPECT_EQ(a.windows[i].hits, b.windows[i].hits);
  EXPECT_EQ(a.first_hits, b.first_hits);
}

TEST(BorelCantelli, Preconditions) {
  BcOptions o;
  o.orbits = 50;
  EXPECT_THROW(bc_experiment(RateFunction::power(1.0), o), PreconditionError);
  o.orbits = 100;
  EXPECT_THROW(bc_experiment(RateFunction::exponential(3.0, 2.0), o), PreconditionError);
}

}  // namespace
}  // namespace unimod
