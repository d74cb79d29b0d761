#include <gtest/gtest.h>

#include "support.hpp"

namespace unimod {
namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

// Whether |q x - p| < psi(t), 0 < q < t has no solution, by trying every q.
bool fails_by_brute_force(double x, const PsiFunction& psi, double t) {
  double best = std::numeric_limits<double>::infinity();
  for (long long q = 1; static_cast<double>(q) < t; ++q) {
    const double qx = static_cast<double>(q) * x;
    best = std::min(best, std::abs(qx - std::round(qx)));
  }
  return best >= psi(t);
}

TEST(Dirichlet, GoldenRatioVerdicts) {
  // |q_k x - p_k| q_{k+1} tends to 1/sqrt(5) * golden = 0.7236...
  const CfVerdict loose = dirichlet_check_cf(kGolden, PsiFunction::power(0.9), 1e6);
  EXPECT_TRUE(loose.failures.empty());
  EXPECT_TRUE(loose.dirichlet_so_far);
  const CfVerdict tight = dirichlet_check_cf(kGolden, PsiFunction::power(0.5), 1e6);
  EXPECT_EQ(tight.failures.size(), tight.intervals.size());
  EXPECT_FALSE(tight.dirichlet_so_far);
  ASSERT_TRUE(tight.last_failure.has_value());
}

TEST(Dirichlet, IntervalFailuresMatchBruteForce) {
  test::Gen gen(41);
  for (int i = 0; i < 60; ++i) {
    const double x = gen.uniform(0.0, 1.0);
    const PsiFunction psi = PsiFunction::power(gen.uniform(0.2, 0.95));
    const CfVerdict v = dirichlet_check_cf(x, psi, 3000.0);
    for (const DirichletInterval& in : v.intervals) {
      if (in.margin < 1e-9) continue;  // numerically tied
      EXPECT_EQ(in.fails, fails_by_brute_force(x, psi, in.q_next)) << "x=" << x << " k=" << in.k;
      // Inside the interval the strongest condition is at its right end.
      if (!in.fails) {
        EXPECT_FALSE(fails_by_brute_force(x, psi, 0.5 * (in.q_k + in.q_next) + 0.5));
      }
    }
  }
}

TEST(Dirichlet, RationalsAreDirichletEventually) {
  const CfVerdict v = dirichlet_check_cf(ExactRational::parse("3/7"), PsiFunction::power(0.5), 1e6);
  EXPECT_TRUE(v.exact);
  EXPECT_TRUE(v.dirichlet_so_far);
}

TEST(Dirichlet, HorizonChecks) {
  EXPECT_THROW(dirichlet_check_cf(0.3, PsiFunction::power(0.5), 0.5), DomainError);
  EXPECT_THROW(dirichlet_check_cf(0.3, PsiFunction::power(0.5, 100.0), 50.0), DomainError);
}

TEST(Dirichlet, FlowHorizonMatchesTheCorrespondence) {
  const PsiFunction psi = PsiFunction::power(0.5);
  const double s = flow_horizon(psi, 1e5);
  const RateFunction rate = rate_from_psi(psi);
  EXPECT_NEAR(std::exp(s - rate(s)), 1e5, 1e-6);
}

TEST(Dirichlet, FlowAndConvergentMethodsAgree) {
  test::Gen gen(42);
  const double step = 0.01;
  for (double a : {0.9, 0.5}) {
    const PsiFunction psi = PsiFunction::power(a);
    for (int i = 0; i < 10; ++i) {
      const double x = gen.uniform(0.0, 1.0);
      const CfVerdict cf = dirichlet_check_cf(x, psi, 1e4);
      const FlowVerdict flow = dirichlet_check_flow(x, psi, flow_horizon(psi, 1e4), step, &cf.cf);
      EXPECT_TRUE(flow.resolved);
      const CrossReference xr = cross_reference(cf, flow, step);
      EXPECT_TRUE(xr.verdicts_agree) << "x=" << x << " a=" << a;
    }
  }
}

TEST(Dirichlet, FlowHitsAreFailures) {
  // Every flow hit t must be a t at which the inequalities fail.
  const PsiFunction psi = PsiFunction::power(0.5);
  const double x = 0.31415926;
  const FlowVerdict flow = dirichlet_check_flow(x, psi, flow_horizon(psi, 2000.0), 0.01);
  ASSERT_FALSE(flow.hits.empty());
  for (const FlowHit& h : flow.hits) {
    if (h.margin < 1e-9) continue;
    EXPECT_TRUE(fails_by_brute_force(x, psi, h.t)) << h.t;
  }
}

}  // namespace
}  // namespace unimod
