#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "unimod/dani/functions.hpp"
#include "unimod/dynamics/scan.hpp"
#include "unimod/error.hpp"
#include "unimod/lattice.hpp"
#include "unimod/moments/monte_carlo.hpp"

namespace unimod {

enum class Membership { member, not_member, indeterminate };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::member: return "member";
    case Membership::not_member: return "not-member";
    case Membership::indeterminate: return "indeterminate";
  }
  return "unknown";
}

struct ThickeningResult {
  Membership status = Membership::indeterminate;
  double delta_at_zero = 0.0;
  std::optional<double> hit_time;
  ScanResult scan;
};

// Whether a_s L lies in K_r for some s in [0, 1).
inline ThickeningResult thickening_membership(const LatticeBasis& lattice, double r, double step,
                                              bool refine = true) {
  if (!(r > 0.0)) throw PreconditionError("thickening: r must be > 0");
  if (!(step > 0.0 && step <= r / 4.0 * (1.0 + 1e-12))) {
    throw PreconditionError("thickening: step must lie in (0, r/4]");
  }
  ScanOptions options;
  options.step = step;
  options.refine = refine;
  options.stop_at_first_hit = true;
  options.include_end = false;
  FlowOrbit orbit(lattice, 0.0);
  ThickeningResult out;
  out.delta_at_zero = orbit.delta();
  out.scan = scan_hits(orbit, RateFunction::constant(r), 0.0, 1.0, options);
  if (!out.scan.hits.empty()) {
    out.status = Membership::member;
    out.hit_time = out.scan.hits.front().s;
  } else {
    out.status = out.scan.fully_resolved() ? Membership::not_member : Membership::indeterminate;
  }
  return out;
}

struct ThickeningEstimate {
  double r = 0.0;
  double step = 0.0;
  FractionEstimate measure;        // certified members
  FractionEstimate indeterminate;
  FractionEstimate kr;             // members already at s = 0
  bool indeterminate_ok = true;    // indeterminate fraction < 10% of the estimate
};

inline ThickeningEstimate thickening_measure_mc(double r, double step,
                                                const MonteCarloOptions& options) {
  if (options.samples < 10000) throw PreconditionError("thickening_measure_mc: N must be >= 1e4");
  struct Acc {
    std::uint64_t n = 0, members = 0, unknown = 0, kr = 0;
    void merge(const Acc& o) {
      n += o.n;
      members += o.members;
      unknown += o.unknown;
      kr += o.kr;
    }
  };
  const Acc acc = run_haar_blocks<Acc>(options, [&](HaarSampler& s, std::size_t, Acc& a) {
    const ThickeningResult t = thickening_membership(s.sample_lattice(), r, step);
    ++a.n;
    if (t.status == Membership::member) ++a.members;
    if (t.status == Membership::indeterminate) ++a.unknown;
    if (t.delta_at_zero <= r) ++a.kr;
  });
  ThickeningEstimate out;
  out.r = r;
  out.step = step;
  out.measure = make_fraction(acc.members, acc.n);
  out.indeterminate = make_fraction(acc.unknown, acc.n);
  out.kr = make_fraction(acc.kr, acc.n);
  out.indeterminate_ok = out.indeterminate.fraction < 0.1 * out.measure.fraction ||
                         acc.unknown == 0;
  return out;
}

}  // namespace unimod
