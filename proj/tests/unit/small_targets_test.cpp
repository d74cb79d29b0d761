#include <gtest/gtest.h>

#include "support.hpp"

namespace unimod {
namespace {

constexpr double kR = 0.008;

// Members of K_r: a_eps Lambda_x with eps in [0, r) (Delta <= eps), and Haar
// samples that happen to fall in K_r.
std::vector<LatticeBasis> members(std::size_t constructed, std::size_t sampled_draws) {
  test::Gen gen(71);
  std::vector<LatticeBasis> out;
  for (std::size_t i = 0; i < constructed; ++i) {
    out.push_back(apply_flow(LatticeBasis::shear(gen.uniform(0.0, 1.0)), gen.uniform(0.0, kR)));
  }
  HaarSampler sampler(72);
  for (std::size_t i = 0; i < sampled_draws; ++i) {
    const LatticeBasis b = sampler.sample_lattice();
    if (delta(b) <= kR) out.push_back(b);
  }
  return out;
}

TEST(SmallTargets, ConstructedLatticesAreInTheTarget) {
  test::Gen gen(73);
  for (int i = 0; i < 500; ++i) {
    const double eps = gen.uniform(0.0, kR);
    EXPECT_LE(delta(apply_flow(LatticeBasis::shear(gen.uniform(0.0, 1.0)), eps)), eps + 1e-12);
  }
  EXPECT_TRUE(in_kr(apply_flow(LatticeBasis::shear(0.4), kR / 2.0), kR).member);
}

TEST(SmallTargets, CoveringAndSeparationOnMembers) {
  const auto set = members(200, 200000);
  ASSERT_GT(set.size(), 220u);
  for (const LatticeBasis& b : set) {
    EXPECT_TRUE(covering_predicate(b, kR));
    for (int j = 0; j < 20; ++j) {
      const double s = 6.0 * kR + (std::log(1.9) - 6.0 * kR) * j / 19.0;
      EXPECT_FALSE(separation_predicate(b, kR, s));
      EXPECT_FALSE(separation_predicate(b, kR, -s));
    }
  }
}

TEST(SmallTargets, FlowEnlargesTheTargetAtUnitSpeed) {
  // a_s K_r is inside K_{r + |s|}.
  const auto set = members(100, 50000);
  test::Gen gen(74);
  for (const LatticeBasis& b : set) {
    const double s = gen.uniform(-2.0, 2.0);
    EXPECT_LE(delta(apply_flow(b, s)), kR + std::abs(s) + 1e-12);
  }
}

TEST(SmallTargets, Preconditions) {
  const LatticeBasis b = LatticeBasis::identity();
  EXPECT_THROW(covering_predicate(b, 0.02), PreconditionError);
  EXPECT_THROW(covering_predicate(LatticeBasis::diagonal(0.5), kR), PreconditionError);
  EXPECT_THROW(separation_predicate(b, kR, 2.0 * kR), PreconditionError);
  EXPECT_THROW(separation_predicate(b, kR, 1.0), PreconditionError);
  EXPECT_NO_THROW(separation_predicate(b, kR, 6.0 * kR));
}

}  // namespace
}  // namespace unimod
