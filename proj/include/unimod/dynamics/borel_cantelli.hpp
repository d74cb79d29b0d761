#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unimod/dani/correspondence.hpp"
#include "unimod/dani/functions.hpp"
#include "unimod/dynamics/scan.hpp"
#include "unimod/error.hpp"
#include "unimod/haar.hpp"
#include "unimod/moments/monte_carlo.hpp"
#include "unimod/parallel.hpp"

namespace unimod {

enum class OrbitStart { haar, translate };

inline const char* to_string(OrbitStart s) { return s == OrbitStart::haar ? "haar" : "translate"; }

struct WindowStatistics {
  double lo = 0.0;
  double hi = 0.0;
  std::uint64_t hits = 0;
  double fraction = 0.0;
  double standard_error = 0.0;
};

struct HitStatistics {
  std::string rate;
  OrbitStart start = OrbitStart::haar;
  std::uint64_t orbits = 0;
  double s0 = 0.0;
  double s_max = 0.0;
  double step = 0.0;
  std::vector<WindowStatistics> windows;  // ascending, disjoint, covering [s0, s_max)
  std::vector<std::optional<double>> first_hits;
  std::uint64_t uncertified_gaps = 0;
};

// [s_max/2, s_max), [s_max/4, s_max/2), ... down to a last window starting at
// s0; returned in ascending order.
inline std::vector<std::pair<double, double>> dyadic_windows(double s0, double s_max) {
  if (!(s_max > s0)) throw DomainError("windows: s_max must exceed the rate start s0");
  std::vector<std::pair<double, double>> w;
  double hi = s_max;
  while (hi / 2.0 > s0) {
    w.emplace_back(hi / 2.0, hi);
    hi /= 2.0;
  }
  w.emplace_back(s0, hi);
  return {w.rbegin(), w.rend()};
}

struct BcOptions {
  std::uint64_t seed = 0;
  std::size_t orbits = 500;
  double s_max = 1000.0;
  double step = 0.05;
  OrbitStart start = OrbitStart::haar;
  unsigned workers = default_workers();
};

// For each orbit and each dyadic window, whether a_s L enters K_{r(s)} for
// some s in the window. Orbits start at Haar-random lattices or at Lambda_x
// with x uniform in [0, 1); orbit i uses sampler stream i.
inline HitStatistics bc_experiment(const RateFunction& rate, const BcOptions& options) {
  if (options.orbits < 100) throw PreconditionError("bc_experiment: need at least 100 orbits");
  const ValidationReport report = validate_rate(rate);
  if (!report.ok()) throw PreconditionError("bc_experiment: invalid rate: " + report.summary());
  const auto windows = dyadic_windows(rate.s0(), options.s_max);

  struct OrbitResult {
    std::vector<char> hit;
    std::optional<double> first;
    std::uint64_t uncertified = 0;
  };
  auto results = run_blocks<OrbitResult>(
      options.orbits, 1, options.workers, [&](std::size_t i, std::size_t, std::size_t) {
        HaarSampler sampler(options.seed, i);
        const LatticeBasis start = options.start == OrbitStart::haar
                                       ? sampler.sample_lattice()
                                       : sampler.sample_translate_lattice().second;
        FlowOrbit orbit(start, rate.s0());
        OrbitResult out;
        ScanOptions scan;
        scan.step = options.step;
        scan.stop_at_first_hit = true;
        for (std::size_t w = 0; w < windows.size(); ++w) {
          scan.include_end = w + 1 == windows.size();
          orbit.advance_to(windows[w].first);
          const ScanResult r = scan_hits(orbit, rate, windows[w].first, windows[w].second, scan);
          out.hit.push_back(r.hits.empty() ? 0 : 1);
          if (!r.hits.empty() && !out.first) out.first = r.hits.front().s;
          out.uncertified += r.uncertified.size();
        }
        return out;
      });

  HitStatistics stats;
  stats.rate = rate.describe();
  stats.start = options.start;
  stats.orbits = options.orbits;
  stats.s0 = rate.s0();
  stats.s_max = options.s_max;
  stats.step = options.step;
  for (std::size_t w = 0; w < windows.size(); ++w) {
    std::uint64_t hits = 0;
    for (const auto& r : results) hits += static_cast<std::uint64_t>(r.hit[w]);
    const FractionEstimate f = make_fraction(hits, options.orbits);
    stats.windows.push_back({windows[w].first, windows[w].second, hits, f.fraction, f.standard_error});
  }
  for (const auto& r : results) {
    stats.first_hits.push_back(r.first);
    stats.uncertified_gaps += r.uncertified;
  }
  return stats;
}

}  // namespace unimod
