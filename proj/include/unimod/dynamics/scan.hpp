#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "unimod/dani/functions.hpp"
#include "unimod/error.hpp"
#include "unimod/lattice.hpp"

namespace unimod {

// Conditioning allowed along an orbit; Delta up to about 13.8 stays in range.
inline BasisLimits orbit_limits() {
  BasisLimits limits;
  limits.max_condition = 1e12;
  return limits;
}

// The orbit s -> a_s L, tracked through a reduced basis that is flowed in
// steps of at most 1/2 and re-reduced after each step.
class FlowOrbit {
 public:
  explicit FlowOrbit(const LatticeBasis& lattice, double start = 0.0,
                     BasisLimits limits = orbit_limits())
      : limits_(limits), reduced_(reduce(lattice)) {
    advance_to(start);
  }

  double time() const { return time_; }
  const Reduction& reduced() const { return reduced_; }

  double delta() {
    if (!delta_) delta_ = delta_from_reduced(reduced_);
    return *delta_;
  }

  LatticeBasis basis() const {
    BasisLimits relaxed = limits_;
    relaxed.max_condition = std::numeric_limits<double>::infinity();
    return LatticeBasis::from_columns(reduced_.u, reduced_.v, relaxed);
  }

  void advance_to(double target) {
    if (!std::isfinite(target)) throw RangeError("flow time is not finite");
    while (time_ != target) {
      const double step = std::clamp(target - time_, -kMaxStep, kMaxStep);
      const double next = std::abs(target - time_) <= kMaxStep ? target : time_ + step;
      const Vec2 u = flow_vector(reduced_.u, next - time_);
      const Vec2 v = flow_vector(reduced_.v, next - time_);
      try {
        reduced_ = reduce(LatticeBasis::from_columns(u, v, relaxed_limits()));
        const double c = LatticeBasis::condition_of(reduced_.u, reduced_.v);
        if (!(c <= limits_.max_condition)) {
          throw ConditioningError("condition number " + std::to_string(c) + " exceeds " +
                                  std::to_string(limits_.max_condition));
        }
      } catch (const ConditioningError& e) {
        throw ConditioningError("orbit at s = " + detail::format_number(next) + ": " + e.what());
      }
      time_ = next;
      delta_.reset();
    }
  }

 private:
  static constexpr double kMaxStep = 0.5;

  BasisLimits relaxed_limits() const {
    BasisLimits relaxed = limits_;
    relaxed.max_condition = std::numeric_limits<double>::infinity();
    return relaxed;
  }

  BasisLimits limits_;
  Reduction reduced_;
  double time_ = 0.0;
  std::optional<double> delta_;
};

struct ScanOptions {
  double step = 0.05;
  // Resolve gaps the grid margin cannot certify by marching with the
  // Lipschitz bound.
  bool refine = true;
  // Smallest march step; hits shallower than this may be missed.
  double resolution = 1e-9;
  bool stop_at_first_hit = false;
  // Whether s_end itself belongs to the scanned range.
  bool include_end = true;
  std::size_t max_refine_evaluations = 100000;
};

struct HitPoint {
  double s = 0.0;
  double margin = 0.0;  // r(s) - Delta(a_s L) >= 0
  bool on_grid = true;
};

struct ScanResult {
  std::vector<HitPoint> hits;
  std::size_t evaluations = 0;
  std::size_t gaps = 0;            // grid gaps examined
  std::size_t certified_gaps = 0;  // certified miss-free by a grid margin
  std::size_t refined_gaps = 0;    // resolved by refinement
  std::vector<double> uncertified; // left ends of gaps left unexamined
  bool stopped_early = false;

  bool fully_resolved() const { return uncertified.empty(); }
};

// Scans s in [s_begin, s_end] for a_s L in K_{r(s)} on the grid
// s_begin + i * step. Delta(a_s L) is 1-Lipschitz in s and r is
// non-increasing, so a grid value with gap g = Delta - r > 0 rules out hits on
// [s, s + g); the scan jumps over grid points inside that range. A gap it
// cannot certify this way is, with refinement on, marched through from
// s + g: after a miss with gap g the next candidate is g further on, and
// inside a hit with gap g < 0 the orbit stays in the target for another
// |g| / 2 (s + r(s) is non-decreasing).
inline ScanResult scan_hits(FlowOrbit& orbit, const RateFunction& rate, double s_begin,
                            double s_end, const ScanOptions& options) {
  if (!(options.step > 0.0) || !std::isfinite(options.step)) {
    throw ArgumentError("scan: step must be positive");
  }
  if (!(s_end >= s_begin)) throw ArgumentError("scan: empty range");
  ScanResult out;
  auto eval = [&](double s) {
    orbit.advance_to(s);
    ++out.evaluations;
    return orbit.delta() - rate(s);
  };
  auto grid = [&](std::size_t i) { return s_begin + static_cast<double>(i) * options.step; };
  const double tiny = 1e-12 * std::max(1.0, std::abs(s_end));

  std::size_t i = 0;
  double s = s_begin;
  while (true) {
    const bool at_end = s >= s_end - tiny;
    if (at_end && !options.include_end) break;
    const double g = eval(s);
    if (g <= 0.0) {
      out.hits.push_back({s, -g, true});
      if (options.stop_at_first_hit) {
        out.stopped_early = true;
        return out;
      }
    }
    if (at_end) break;

    // Index of the next grid point, clipped to s_end.
    auto point = [&](std::size_t k) { return std::min(grid(k), s_end); };
    std::size_t next = i + 1;
    if (g > 0.0) {
      // Skip every grid point strictly inside [s, s + g).
      while (point(next) < s + g && point(next) < s_end - tiny) ++next;
      if (next > i + 1) {
        out.gaps += next - 1 - i;
        out.certified_gaps += next - 1 - i;
        // Restart from the last certified grid point.
        i = next - 1;
        s = point(i);
        // The point itself is certified, but its own gap needs a value.
        continue;
      }
    }
    const double right = point(next);
    ++out.gaps;
    if (g > 0.0 && s + g >= right) {
      ++out.certified_gaps;
    } else if (options.refine) {
      bool resolved = true;
      std::size_t budget = options.max_refine_evaluations;
      double t = s + (g > 0.0 ? g : std::max(-0.5 * g, options.resolution));
      while (t < right) {
        if (budget-- == 0) {
          resolved = false;
          break;
        }
        const double h = eval(t);
        if (h <= 0.0) {
          out.hits.push_back({t, -h, false});
          if (options.stop_at_first_hit) {
            out.stopped_early = true;
            return out;
          }
        }
        // Steps never drop below the resolution; a hit missed inside such a
        // step is shallower than the resolution (Delta - r is 2-Lipschitz).
        t += std::max(h > 0.0 ? h : -0.5 * h, options.resolution);
      }
      if (resolved) {
        ++out.refined_gaps;
      } else {
        out.uncertified.push_back(s);
      }
    } else {
      out.uncertified.push_back(s);
    }
    i = next;
    s = right;
  }
  return out;
}

}  // namespace unimod
