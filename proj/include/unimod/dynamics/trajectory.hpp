#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "unimod/dani/functions.hpp"
#include "unimod/dynamics/scan.hpp"
#include "unimod/error.hpp"
#include "unimod/lattice.hpp"

namespace unimod {

struct TrajectorySample {
  double s = 0.0;
  double delta = 0.0;
};

struct TrajectoryRecord {
  std::string lattice;  // free-form identifier
  std::vector<TrajectorySample> samples;
};

// Delta(a_s L) at each grid point. The grid must increase strictly with
// steps of at most 1/2.
inline TrajectoryRecord delta_trajectory(const LatticeBasis& lattice, const std::vector<double>& grid,
                                         std::string id = {}) {
  if (grid.empty()) throw ArgumentError("delta_trajectory: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw ArgumentError("delta_trajectory: non-finite grid point");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ArgumentError("delta_trajectory: grid must be strictly increasing (index " +
                          std::to_string(i) + ")");
    }
    if (i > 0 && grid[i] - grid[i - 1] > 0.5) {
      throw ArgumentError("delta_trajectory: grid step exceeds 0.5 at index " + std::to_string(i));
    }
  }
  TrajectoryRecord record;
  record.lattice = std::move(id);
  FlowOrbit orbit(lattice, grid.front());
  for (double s : grid) {
    orbit.advance_to(s);
    record.samples.push_back({s, orbit.delta()});
  }
  return record;
}

inline std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw ArgumentError("grid: need step > 0 and hi >= lo");
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) grid.push_back(lo + static_cast<double>(i) * step);
  if (hi - grid.back() > 1e-12 * std::max(1.0, std::abs(hi))) grid.push_back(hi);
  return grid;
}

struct AnnotatedSample {
  double s = 0.0;
  double delta = 0.0;
  double rate = 0.0;
  bool hit = false;
  double margin = 0.0;  // r(s) - Delta
  // The gap to the next sample is miss-free by the Lipschitz bound.
  bool gap_certified = false;
};

inline std::vector<AnnotatedSample> annotate(const TrajectoryRecord& record, const RateFunction& rate) {
  std::vector<AnnotatedSample> out;
  const auto& xs = record.samples;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    AnnotatedSample a;
    a.s = xs[i].s;
    a.delta = xs[i].delta;
    a.rate = rate(a.s);
    a.margin = a.rate - a.delta;
    a.hit = a.delta <= a.rate;
    if (i + 1 < xs.size()) a.gap_certified = a.delta - (xs[i + 1].s - a.s) > a.rate;
    out.push_back(a);
  }
  return out;
}

struct FirstHitOptions {
  double step = 0.05;
  // Enforce step <= min(0.1, r(s_max) / 4) so the grid can certify misses.
  bool certify = true;
  // Resolve uncertified gaps by marching; off by default so the result is the
  // earliest grid hit.
  bool refine = false;
};

struct FirstHit {
  std::optional<HitPoint> hit;
  ScanResult scan;
};

// Earliest s in [s0, s_max] with Delta(a_s L) <= r(s).
inline FirstHit first_hit(const LatticeBasis& lattice, const RateFunction& rate, double s_max,
                          const FirstHitOptions& options = {}) {
  const double s0 = rate.s0();
  if (!(s_max >= s0)) throw DomainError("first_hit: s_max below the rate domain start");
  if (options.certify) {
    const double bound = std::min(0.1, rate(s_max) / 4.0);
    if (!(options.step <= bound * (1.0 + 1e-12))) {
      throw PreconditionError("first_hit: step " + detail::format_number(options.step) +
                              " exceeds min(0.1, r(s_max)/4) = " + detail::format_number(bound));
    }
  }
  ScanOptions scan;
  scan.step = options.step;
  scan.refine = options.refine;
  scan.stop_at_first_hit = true;
  FlowOrbit orbit(lattice, s0);
  FirstHit out;
  out.scan = scan_hits(orbit, rate, s0, s_max, scan);
  if (!out.scan.hits.empty()) out.hit = out.scan.hits.front();
  return out;
}

}  // namespace unimod
