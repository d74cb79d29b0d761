#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>

#include "unimod.hpp"

namespace unimod::test {

// Seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }

  // A determinant-one basis with entries of moderate size: a rotation, a
  // diagonal stretch and a shear, with condition number at most about e^{2 * spread}.
  LatticeBasis lattice(double spread = 1.5) {
    const double phi = uniform(0.0, 2.0 * kPi);
    const double s = uniform(-spread, spread);
    const double x = uniform(-2.0, 2.0);
    const Vec2 c1 = rotate({std::exp(s), 0.0}, phi);
    const Vec2 c2 = rotate({x * std::exp(s), std::exp(-s)}, phi);
    return LatticeBasis::from_columns(c1, c2);
  }

  // A random element of SL2(Z) as a product of elementary moves.
  std::array<std::int64_t, 4> sl2z(int moves) {
    std::array<std::int64_t, 4> g{1, 0, 0, 1};
    for (int i = 0; i < moves; ++i) {
      const std::int64_t k = integer(-3, 3);
      if (integer(0, 1) == 0) {
        g = {g[0], g[1] + k * g[0], g[2], g[3] + k * g[2]};  // g * [[1,k],[0,1]]
      } else {
        g = {g[0] + k * g[1], g[1], g[2] + k * g[3], g[3]};  // g * [[1,0],[k,1]]
      }
    }
    return g;
  }

 private:
  std::mt19937_64 engine_;
};

// Same lattice, different basis: [b1 b2] * g.
inline LatticeBasis rebase(const LatticeBasis& b, const std::array<std::int64_t, 4>& g) {
  const Vec2 c1 = static_cast<double>(g[0]) * b.b1() + static_cast<double>(g[2]) * b.b2();
  const Vec2 c2 = static_cast<double>(g[1]) * b.b1() + static_cast<double>(g[3]) * b.b2();
  BasisLimits loose;
  loose.max_condition = 1e12;
  return LatticeBasis::from_columns(c1, c2, loose);
}

// Smallest sup norm over all (m, n) != 0 with |m|, |n| <= k.
inline double brute_sup_norm(const LatticeBasis& b, int k = 25) {
  double best = std::numeric_limits<double>::infinity();
  for (int m = -k; m <= k; ++m) {
    for (int n = -k; n <= k; ++n) {
      if (m == 0 && n == 0) continue;
      best = std::min(best, sup_norm(b.point(m, n)));
    }
  }
  return best;
}

// Primitive points of a region with |m|, |n| <= k.
inline std::size_t brute_count(const LatticeBasis& b, const ConvexRegion& region, int k = 25) {
  std::size_t count = 0;
  for (int m = -k; m <= k; ++m) {
    for (int n = -k; n <= k; ++n) {
      if (std::gcd(m, n) != 1) continue;
      if (region.contains(b.point(m, n))) ++count;
    }
  }
  return count;
}

}  // namespace unimod::test
