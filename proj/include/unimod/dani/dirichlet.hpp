#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "unimod/dani/continued_fraction.hpp"
#include "unimod/dani/correspondence.hpp"
#include "unimod/dani/functions.hpp"
#include "unimod/dynamics/scan.hpp"
#include "unimod/error.hpp"
#include "unimod/lattice.hpp"

namespace unimod {

// One interval (q_k, q_{k+1}] of the Dirichlet test.
struct DirichletInterval {
  std::size_t k = 0;
  double q_k = 0.0;
  double q_next = 0.0;
  double error = 0.0;      // |q_k x - p_k|
  double threshold = 0.0;  // psi(q_{k+1})
  bool fails = false;      // error >= threshold
  // (1/2)|log(error / threshold)|: for psi = a/t this is the depth of the
  // excursion of Delta(a_s Lambda_x) - r(s) near s = log q_{k+1}.
  double margin = 0.0;
};

struct CfVerdict {
  bool dirichlet_so_far = true;
  std::optional<std::size_t> last_failure;
  std::vector<DirichletInterval> intervals;
  std::vector<std::size_t> failures;
  bool exact = false;  // x is rational and the expansion reached it
  ContinuedFraction cf;
};

// For t in (q_k, q_{k+1}] the smallest |q x - p| with 0 < q < t is
// |q_k x - p_k| (best approximation), and psi is smallest at q_{k+1}, so the
// inequalities |qx - p| < psi(t), |q| < t fail for some t in the interval
// exactly when |q_k x - p_k| >= psi(q_{k+1}). Every complete interval with
// q_{k+1} <= horizon is tested.
inline CfVerdict dirichlet_check_cf(const ExactRational& x, const PsiFunction& psi, double horizon) {
  if (!(horizon >= 1.0) || horizon < psi.t0()) {
    throw DomainError("dirichlet_check_cf: horizon " + detail::format_number(horizon) +
                      " is below t0 = " + detail::format_number(psi.t0()));
  }
  CfVerdict out;
  out.cf = continued_fraction_expand(x, horizon);
  out.exact = out.cf.exact;
  const auto& c = out.cf.convergents;
  for (std::size_t k = 0; k + 1 < c.size(); ++k) {
    if (c[k + 1].q_value > horizon) break;
    if (!(c[k + 1].q_value > c[k].q_value)) continue;  // empty interval
    if (c[k + 1].q_value < psi.t0()) continue;         // before the psi domain
    DirichletInterval in;
    in.k = k;
    in.q_k = c[k].q_value;
    in.q_next = c[k + 1].q_value;
    in.error = c[k].error;
    in.threshold = psi(in.q_next);
    in.fails = in.error >= in.threshold;
    in.margin = in.error > 0.0 ? 0.5 * std::abs(std::log(in.error / in.threshold))
                               : std::numeric_limits<double>::infinity();
    if (in.fails) {
      out.failures.push_back(k);
      out.last_failure = k;
    }
    out.intervals.push_back(in);
  }
  // A rational x satisfies every inequality once t passes its denominator.
  out.dirichlet_so_far = out.failures.empty() || out.exact;
  return out;
}

inline CfVerdict dirichlet_check_cf(double x, const PsiFunction& psi, double horizon) {
  return dirichlet_check_cf(ExactRational::from_double(x), psi, horizon);
}

// Flow time whose Dirichlet scale e^{s - r(s)} equals t.
inline double flow_horizon(const PsiFunction& psi, double t) {
  return 0.5 * std::log(t) - 0.5 * std::log(psi(t));
}

struct FlowHit {
  double s = 0.0;
  double margin = 0.0;
  double t = 0.0;  // e^{s - r(s)}
  std::size_t k = 0;
};

struct FlowVerdict {
  std::vector<FlowHit> hits;
  std::vector<std::size_t> hit_intervals;  // distinct k, ascending
  bool resolved = true;                    // every gap certified or refined
  double s0 = 0.0;
  double s_max = 0.0;
};

// Scans a_s Lambda_x against K_{r(s)} with r matched to psi; a hit at s is a
// failure of the Dirichlet inequalities at t = e^{s - r(s)}. Hits are
// attributed to the convergent interval containing t.
inline FlowVerdict dirichlet_check_flow(double x, const PsiFunction& psi, double s_max, double step,
                                        const ContinuedFraction* cf = nullptr) {
  const RateFunction rate = rate_from_psi(psi);
  FlowVerdict out;
  out.s0 = rate.s0();
  out.s_max = s_max;
  if (!(s_max >= out.s0)) throw DomainError("dirichlet_check_flow: s_max below s0");
  ContinuedFraction local;
  if (cf == nullptr) {
    local = continued_fraction_expand(x, std::exp(s_max) + 1.0);
    cf = &local;
  }
  ScanOptions options;
  options.step = step;
  options.refine = true;
  FlowOrbit orbit(LatticeBasis::shear(x), out.s0);
  const ScanResult scan = scan_hits(orbit, rate, out.s0, s_max, options);
  out.resolved = scan.fully_resolved();
  std::set<std::size_t> ks;
  for (const HitPoint& h : scan.hits) {
    FlowHit f;
    f.s = h.s;
    f.margin = h.margin;
    f.t = std::exp(h.s - rate(h.s));
    f.k = cf->interval_index(f.t);
    ks.insert(f.k);
    out.hits.push_back(f);
  }
  out.hit_intervals.assign(ks.begin(), ks.end());
  return out;
}

struct CrossReference {
  std::size_t agreements = 0;
  std::vector<std::size_t> boundary;      // disagreements with margin < step
  std::vector<std::size_t> disagreements; // disagreements with margin >= step
  bool verdicts_agree = true;             // same failure set up to boundary cases
  bool boundary_case = false;
};

// Compares the failure intervals found by both methods, interval by interval.
inline CrossReference cross_reference(const CfVerdict& cf, const FlowVerdict& flow, double step) {
  CrossReference out;
  const std::set<std::size_t> flow_ks(flow.hit_intervals.begin(), flow.hit_intervals.end());
  std::set<std::size_t> tested;
  for (const DirichletInterval& in : cf.intervals) {
    tested.insert(in.k);
    const bool flow_fails = flow_ks.count(in.k) > 0;
    if (flow_fails == in.fails) {
      ++out.agreements;
    } else if (in.margin < step) {
      out.boundary.push_back(in.k);
    } else {
      out.disagreements.push_back(in.k);
    }
  }
  // Flow hits in intervals the convergent test did not cover (beyond the
  // horizon) are ignored; hits in skipped empty intervals cannot occur.
  out.verdicts_agree = out.disagreements.empty();
  out.boundary_case = !out.boundary.empty();
  return out;
}

}  // namespace unimod
