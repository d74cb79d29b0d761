#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "unimod/error.hpp"
#include "unimod/geometry.hpp"
#include "unimod/regions.hpp"

namespace unimod {

struct BasisLimits {
  // Largest accepted ratio of singular values.
  double max_condition = 1e8;
  // Inputs with |det - 1| up to this are rescaled to determinant one.
  double det_tolerance = 1e-6;
};

struct LatticePoint {
  std::int64_t m = 0;
  std::int64_t n = 0;
  Vec2 coords;
};

// A unimodular lattice given by the columns b1, b2 of a determinant-one matrix.
class LatticeBasis {
 public:
  static LatticeBasis from_columns(Vec2 b1, Vec2 b2, const BasisLimits& limits = {}) {
    if (!is_finite(b1) || !is_finite(b2)) {
      throw InvalidBasisError("basis has non-finite entries");
    }
    const double det = cross(b1, b2);
    if (!(std::abs(det - 1.0) <= limits.det_tolerance)) {
      throw InvalidBasisError("basis determinant " + std::to_string(det) +
                              " is not 1 (orientation-reversing or non-unimodular)");
    }
    if (det != 1.0) {
      const double k = 1.0 / std::sqrt(det);
      b1 *= k;
      b2 *= k;
    }
    const double c = condition_of(b1, b2);
    if (!(c <= limits.max_condition)) {
      throw ConditioningError("basis condition number " + std::to_string(c) +
                              " exceeds the limit " + std::to_string(limits.max_condition));
    }
    return LatticeBasis(b1, b2, c);
  }

  // Row-major entries [[a, b], [c, d]]; the columns are (a, c) and (b, d).
  static LatticeBasis from_matrix(double a, double b, double c, double d,
                                  const BasisLimits& limits = {}) {
    return from_columns({a, c}, {b, d}, limits);
  }

  static LatticeBasis identity() { return LatticeBasis({1.0, 0.0}, {0.0, 1.0}, 1.0); }

  // Lambda_x: columns (1, 0) and (x, 1).
  static LatticeBasis shear(double x, const BasisLimits& limits = {}) {
    return from_columns({1.0, 0.0}, {x, 1.0}, limits);
  }

  // a_s Z^2.
  static LatticeBasis diagonal(double s, const BasisLimits& limits = {}) {
    return from_columns({std::exp(s), 0.0}, {0.0, std::exp(-s)}, limits);
  }

  Vec2 b1() const { return b1_; }
  Vec2 b2() const { return b2_; }
  double det() const { return cross(b1_, b2_); }
  double condition() const { return condition_; }
  Vec2 point(std::int64_t m, std::int64_t n) const {
    return static_cast<double>(m) * b1_ + static_cast<double>(n) * b2_;
  }

  // Ratio of singular values. For determinant one this is the square of the
  // largest singular value, a root of s^2 - F s + 1 with F the squared
  // Frobenius norm.
  static double condition_of(Vec2 b1, Vec2 b2) {
    const double f = norm_sq(b1) + norm_sq(b2);
    const double det = std::abs(cross(b1, b2));
    if (!(det > 0.0)) return std::numeric_limits<double>::infinity();
    const double g = f / det;
    return 0.5 * (g + std::sqrt(std::max(0.0, (g - 2.0) * (g + 2.0))));
  }

 private:
  LatticeBasis(Vec2 b1, Vec2 b2, double condition) : b1_(b1), b2_(b2), condition_(condition) {}

  Vec2 b1_;
  Vec2 b2_;
  double condition_ = 1.0;
};

// A reduced basis together with the integer matrix U (row-major) such that
// [u v] = [b1 b2] U.
struct Reduction {
  Vec2 u;
  Vec2 v;
  std::array<std::int64_t, 4> transform{1, 0, 0, 1};

  // Coefficients relative to the original basis of m*u + n*v.
  std::array<std::int64_t, 2> original_coeffs(std::int64_t m, std::int64_t n) const {
    return {transform[0] * m + transform[1] * n, transform[2] * m + transform[3] * n};
  }
};

// Lagrange reduction. Orientation is kept by swapping (u, v) -> (v, -u); the
// result satisfies |u| <= |v|, |<u,v>| <= |u|^2 / 2, and u is the first
// nonzero vector in the half plane {x > 0} or {x = 0, y > 0}.
inline Reduction reduce(const LatticeBasis& basis) {
  Reduction r{basis.b1(), basis.b2(), {1, 0, 0, 1}};
  auto swap_columns = [&r] {
    const Vec2 u = r.u;
    r.u = r.v;
    r.v = -u;
    auto& t = r.transform;
    t = {t[1], -t[0], t[3], -t[2]};
  };
  if (norm_sq(r.v) < norm_sq(r.u)) swap_columns();
  for (int iter = 0; iter < 256; ++iter) {
    const double ratio = dot(r.u, r.v) / norm_sq(r.u);
    const double mu = std::round(ratio);
    if (std::abs(mu) > 0x1p62) throw ConditioningError("reduction coefficient overflow");
    if (mu != 0.0) {
      const auto k = static_cast<std::int64_t>(mu);
      r.v -= mu * r.u;
      r.transform[1] -= k * r.transform[0];
      r.transform[3] -= k * r.transform[2];
    }
    // Relative slack keeps rounding noise from cycling between equal lengths.
    if (norm_sq(r.v) < norm_sq(r.u) * (1.0 - 1e-15)) {
      swap_columns();
    } else {
      break;
    }
  }
  if (r.u.x < 0.0 || (r.u.x == 0.0 && r.u.y < 0.0)) {
    r.u = -r.u;
    r.v = -r.v;
    for (auto& e : r.transform) e = -e;
  }
  return r;
}

inline LatticeBasis gauss_reduce(const LatticeBasis& basis) {
  const Reduction r = reduce(basis);
  BasisLimits limits;
  limits.max_condition = std::numeric_limits<double>::infinity();
  return LatticeBasis::from_columns(r.u, r.v, limits);
}

// Visits every m*u + n*v with Euclidean norm <= radius (including 0) for a
// reduced pair (u, v). The callback receives (m, n, vector).
template <class F>
void for_each_in_ball(const Reduction& r, double radius, F&& f) {
  const double uu = norm_sq(r.u);
  const double mu = dot(r.u, r.v) / uu;
  // |v*| = det / |u| with det = 1.
  const double vstar_sq = 1.0 / uu;
  const double r2 = radius * radius;
  const auto n_max = static_cast<std::int64_t>(std::floor(radius * std::sqrt(uu)));
  for (std::int64_t n = -n_max; n <= n_max; ++n) {
    const double rest = r2 - static_cast<double>(n) * static_cast<double>(n) * vstar_sq;
    if (rest < 0.0) continue;
    const double half = std::sqrt(rest / uu);
    const double centre = -static_cast<double>(n) * mu;
    const auto m_lo = static_cast<std::int64_t>(std::ceil(centre - half - 1e-9));
    const auto m_hi = static_cast<std::int64_t>(std::floor(centre + half + 1e-9));
    for (std::int64_t m = m_lo; m <= m_hi; ++m) {
      const Vec2 p = static_cast<double>(m) * r.u + static_cast<double>(n) * r.v;
      if (norm_sq(p) <= r2) f(m, n, p);
    }
  }
}

// Upper bound on the number of points for_each_in_ball visits.
inline double ball_visit_bound(const Reduction& r, double radius) {
  const double lu = norm(r.u);
  return (2.0 * radius * lu + 1.0) * (2.0 * radius / lu + 3.0);
}

struct SupNormMinimum {
  double value = 0.0;
  Vec2 vector;
};

inline SupNormMinimum shortest_sup_vector(const Reduction& r) {
  SupNormMinimum best{sup_norm(r.u), r.u};
  for (Vec2 c : {r.v, r.u + r.v, r.u - r.v}) {
    const double s = sup_norm(c);
    if (s < best.value) best = {s, c};
  }
  // The optimum has Euclidean norm at most sqrt(2) times its sup norm.
  const double radius = std::sqrt(2.0) * best.value * (1.0 + 1e-12);
  for_each_in_ball(r, radius, [&](std::int64_t m, std::int64_t n, Vec2 p) {
    if (m == 0 && n == 0) return;
    const double s = sup_norm(p);
    if (s < best.value) best = {s, p};
  });
  return best;
}

inline double shortest_sup_norm(const LatticeBasis& basis) {
  return shortest_sup_vector(reduce(basis)).value;
}

inline double delta_from_reduced(const Reduction& r) {
  const double d = -std::log(shortest_sup_vector(r).value);
  if (d < -1e-9) {
    throw ConsistencyError("computed Delta = " + std::to_string(d) +
                           " is negative beyond tolerance");
  }
  return std::max(0.0, d);
}

inline double delta(const LatticeBasis& basis) { return delta_from_reduced(reduce(basis)); }

struct KrMembership {
  bool member = false;
  double margin = 0.0;  // r - Delta
  double delta = 0.0;
};

inline KrMembership in_kr(const LatticeBasis& basis, double r) {
  if (!(r >= 0.0)) throw ArgumentError("in_kr: r must be >= 0");
  const double d = delta(basis);
  return {d <= r, r - d, d};
}

struct EnumerationLimits {
  double max_visits = 1e7;
};

// Visits the primitive lattice points in a region, in reduced coordinates.
template <class F>
void for_each_primitive_in_region(const Reduction& r, const ConvexRegion& region, F&& f,
                                  const EnumerationLimits& limits = {}) {
  const double radius = region.outer_radius() * (1.0 + 1e-12);
  const double bound = ball_visit_bound(r, radius);
  if (bound > limits.max_visits) {
    throw ResourceError("enumeration would visit about " + std::to_string(bound) +
                        " points (cap " + std::to_string(limits.max_visits) + ")");
  }
  for_each_in_ball(r, radius, [&](std::int64_t m, std::int64_t n, Vec2 p) {
    if (std::gcd(m, n) != 1) return;
    if (region.contains(p)) f(m, n, p);
  });
}

inline std::vector<LatticePoint> enumerate_primitive_in_region(
    const LatticeBasis& basis, const ConvexRegion& region, const EnumerationLimits& limits = {}) {
  const Reduction r = reduce(basis);
  std::vector<LatticePoint> out;
  for_each_primitive_in_region(
      r, region,
      [&](std::int64_t m, std::int64_t n, Vec2 p) {
        const auto c = r.original_coeffs(m, n);
        out.push_back({c[0], c[1], p});
      },
      limits);
  return out;
}

inline std::size_t count_primitive_in_region(const Reduction& r, const ConvexRegion& region,
                                             const EnumerationLimits& limits = {}) {
  std::size_t count = 0;
  for_each_primitive_in_region(
      r, region, [&](std::int64_t, std::int64_t, Vec2) { ++count; }, limits);
  return count;
}

inline std::size_t count_primitive_in_region(const LatticeBasis& basis, const ConvexRegion& region,
                                             const EnumerationLimits& limits = {}) {
  return count_primitive_in_region(reduce(basis), region, limits);
}

inline Vec2 flow_vector(Vec2 p, double s) { return {std::exp(s) * p.x, std::exp(-s) * p.y}; }

// a_s applied to the basis: first row scaled by e^s, second by e^-s.
inline LatticeBasis apply_flow(const LatticeBasis& basis, double s, const BasisLimits& limits = {}) {
  if (!std::isfinite(s)) throw RangeError("apply_flow: non-finite flow time");
  const Vec2 b1 = flow_vector(basis.b1(), s);
  const Vec2 b2 = flow_vector(basis.b2(), s);
  if (!is_finite(b1) || !is_finite(b2)) {
    throw RangeError("apply_flow: entries overflow at s = " + std::to_string(s));
  }
  return LatticeBasis::from_columns(b1, b2, limits);
}

}  // namespace unimod
