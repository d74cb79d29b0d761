#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "unimod/geometry.hpp"
#include "unimod/lattice.hpp"

namespace unimod {

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based generator: the n-th output is a pure function of
// (seed, stream, n), so streams can be handed to workers without coordination.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(splitmix64(seed ^ splitmix64(stream * 0xd1b54a32d192ed03ULL + 0x8bb84b93962eacc9ULL))) {}

  std::uint64_t next() { return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * counter_++); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1p-53; }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct BasePoint {
  double x = 0.0;    // in (-1/2, 1/2]
  double y = 0.0;    // >= sqrt(3)/2, with x^2 + y^2 >= 1
  double phi = 0.0;  // in [0, 2 pi)
};

// Haar-random unimodular lattices. A point x + iy of the modular fundamental
// domain is drawn from the hyperbolic area measure, and a uniform rotation is
// applied on the left.
class HaarSampler {
 public:
  explicit HaarSampler(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream), rng_(seed, stream) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t draws() const { return draws_; }
  std::uint64_t rejections() const { return rejections_; }
  double rejection_rate() const {
    return draws_ == 0 ? 0.0 : static_cast<double>(rejections_) / static_cast<double>(draws_);
  }

  BasePoint sample_base_point() {
    static const double y_min = std::sqrt(3.0) / 2.0;
    while (true) {
      ++draws_;
      const double x = 0.5 - rng_.uniform();
      const double y = y_min / (1.0 - rng_.uniform());
      if (x * x + y * y >= 1.0) {
        return {x, y, 2.0 * kPi * rng_.uniform()};
      }
      ++rejections_;
    }
  }

  static LatticeBasis lattice_from(const BasePoint& p) {
    const double k = 1.0 / std::sqrt(p.y);
    const Vec2 c1 = rotate({k, 0.0}, p.phi);
    const Vec2 c2 = rotate({p.x * k, p.y * k}, p.phi);
    return LatticeBasis::from_columns(c1, c2, sample_limits());
  }

  LatticeBasis sample_lattice() { return lattice_from(sample_base_point()); }

  // Lambda_x for x uniform on [0, 1).
  std::pair<double, LatticeBasis> sample_translate_lattice() {
    const double x = rng_.uniform();
    return {x, LatticeBasis::shear(x)};
  }

  double uniform() { return rng_.uniform(); }

  // The cusp is sampled exactly, so y (and the condition number) can reach
  // about 1e16.
  static BasisLimits sample_limits() {
    BasisLimits limits;
    limits.max_condition = 1e18;
    return limits;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  CounterRng rng_;
  std::uint64_t draws_ = 0;
  std::uint64_t rejections_ = 0;
};

}  // namespace unimod
