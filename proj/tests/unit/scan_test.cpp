#include <gtest/gtest.h>

#include "support.hpp"

namespace unimod {
namespace {

// Delta(a_s L) from a basis of size 1 is only determined to about
// eps * e^{2|s|}: the shortest vector has coefficients up to e^{|s|} whose
// contributions cancel down to e^{-|s|}.
double flow_tolerance(double s) { return 1e-12 + 1e-15 * std::exp(2.0 * std::abs(s)); }

TEST(Scan, OrbitTracksDirectFlow) {
  test::Gen gen(51);
  for (int i = 0; i < 50; ++i) {
    const LatticeBasis b = gen.lattice(1.0);
    FlowOrbit orbit(b);
    for (double s = 0.0; s <= 8.0; s += 0.37) {
      orbit.advance_to(s);
      BasisLimits loose;
      loose.max_condition = 1e12;
      EXPECT_NEAR(orbit.delta(), delta(apply_flow(b, s, loose)), flow_tolerance(s)) << s;
    }
    // The return trip from s = 8 spans 11 units of flow time.
    orbit.advance_to(-3.0);
    EXPECT_NEAR(orbit.delta(), delta(apply_flow(b, -3.0)), flow_tolerance(11.0));
  }
}

TEST(Scan, OrbitIntoTheCuspRaisesConditioningError) {
  FlowOrbit orbit(LatticeBasis::identity());
  orbit.advance_to(10.0);
  EXPECT_NEAR(orbit.delta(), 10.0, 1e-9);
  try {
    orbit.advance_to(20.0);
    FAIL() << "expected a conditioning error";
  } catch (const ConditioningError& e) {
    EXPECT_NE(std::string(e.what()).find("orbit at s ="), std::string::npos);
  }
}

// Hit components of a constant-rate scan found on a very fine grid.
std::vector<std::pair<double, double>> fine_hits(const LatticeBasis& b, double r, double lo, double hi) {
  std::vector<std::pair<double, double>> out;
  FlowOrbit orbit(b, lo);
  bool inside = false;
  double depth = 0.0;
  for (double s = lo; s <= hi; s += 1e-4) {
    orbit.advance_to(s);
    const double g = orbit.delta() - r;
    if (g <= 0.0) {
      if (!inside) out.push_back({s, s});
      inside = true;
      out.back().second = s;
      depth = std::max(depth, -g);
    } else {
      inside = false;
    }
  }
  return out;
}

TEST(Scan, RefinedScanFindsEveryHitComponent) {
  test::Gen gen(52);
  const double r = 0.15;
  for (int i = 0; i < 15; ++i) {
    const LatticeBasis b = gen.lattice(0.5);
    ScanOptions o;
    o.step = 0.2;  // deliberately coarse
    FlowOrbit orbit(b);
    const ScanResult scan = scan_hits(orbit, RateFunction::constant(r), 0.0, 10.0, o);
    EXPECT_TRUE(scan.fully_resolved());
    BasisLimits loose;
    loose.max_condition = 1e12;
    for (const HitPoint& h : scan.hits) {
      EXPECT_LE(delta(apply_flow(b, h.s, loose)), r + flow_tolerance(h.s));
    }
    for (const auto& [a, z] : fine_hits(b, r, 0.0, 10.0)) {
      bool found = false;
      for (const HitPoint& h : scan.hits) found = found || (h.s >= a - 1e-4 && h.s <= z + 1e-4);
      EXPECT_TRUE(found) << "component [" << a << ", " << z << "] missed";
    }
  }
}

TEST(Scan, UnrefinedScanReportsUncertifiedGaps) {
  ScanOptions o;
  o.step = 0.5;
  o.refine = false;
  FlowOrbit orbit(LatticeBasis::shear(0.3));
  const ScanResult scan = scan_hits(orbit, RateFunction::constant(0.05), 0.0, 5.0, o);
  EXPECT_FALSE(scan.fully_resolved());
  EXPECT_EQ(scan.gaps, scan.certified_gaps + scan.uncertified.size());
}

TEST(Scan, StopAtFirstHit) {
  ScanOptions o;
  o.stop_at_first_hit = true;
  FlowOrbit orbit(LatticeBasis::diagonal(-1.0));
  const ScanResult scan = scan_hits(orbit, RateFunction::constant(0.2), 0.0, 5.0, o);
  ASSERT_EQ(scan.hits.size(), 1u);
  EXPECT_TRUE(scan.stopped_early);
  EXPECT_NEAR(scan.hits[0].s, 0.8, 1e-9);
}

TEST(Scan, ArgumentChecks) {
  FlowOrbit orbit(LatticeBasis::identity());
  ScanOptions o;
  o.step = 0.0;
  EXPECT_THROW(scan_hits(orbit, RateFunction::constant(0.1), 0.0, 1.0, o), ArgumentError);
  o.step = 0.1;
  EXPECT_THROW(scan_hits(orbit, RateFunction::constant(0.1), 1.0, 0.0, o), ArgumentError);
}

TEST(Trajectory, IntegerLatticeDeltaIsAbsoluteFlowTime) {
  const TrajectoryRecord rec = delta_trajectory(LatticeBasis::identity(), uniform_grid(-2.0, 2.0, 0.25), "z2");
  ASSERT_EQ(rec.samples.size(), 17u);
  for (const TrajectorySample& p : rec.samples) EXPECT_NEAR(p.delta, std::abs(p.s), 1e-12);
  const auto rows = annotate(rec, RateFunction::constant(0.3, -2.0));
  for (const AnnotatedSample& a : rows) {
    EXPECT_EQ(a.hit, std::abs(a.s) <= 0.3);
    EXPECT_NEAR(a.margin, 0.3 - a.delta, 1e-15);
  }
}

TEST(Trajectory, GridChecks) {
  EXPECT_THROW(delta_trajectory(LatticeBasis::identity(), {0.0, 1.0}), ArgumentError);
  EXPECT_THROW(delta_trajectory(LatticeBasis::identity(), {0.0, 0.0}), ArgumentError);
  EXPECT_THROW(delta_trajectory(LatticeBasis::identity(), {}), ArgumentError);
  EXPECT_THROW(uniform_grid(1.0, 0.0, 0.1), ArgumentError);
  const auto g = uniform_grid(0.0, 1.0, 0.3);
  EXPECT_EQ(g.back(), 1.0);
}

TEST(Trajectory, FirstHitOnTheGrid) {
  // Delta(a_s L) = |s - 1.03| enters [0, 0.2] at 0.83; the first grid hit is 0.85.
  const FirstHit h = first_hit(LatticeBasis::diagonal(-1.03), RateFunction::constant(0.2), 5.0);
  ASSERT_TRUE(h.hit.has_value());
  EXPECT_NEAR(h.hit->s, 0.85, 1e-9);
  FirstHitOptions coarse;
  coarse.step = 0.2;
  EXPECT_THROW(first_hit(LatticeBasis::identity(), RateFunction::constant(0.2), 5.0, coarse),
               PreconditionError);
  EXPECT_THROW(first_hit(LatticeBasis::identity(), RateFunction::power(1.0), 0.5), DomainError);
}

}  // namespace
}  // namespace unimod
