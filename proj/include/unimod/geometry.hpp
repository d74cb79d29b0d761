#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace unimod {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kZeta2 = std::numbers::pi * std::numbers::pi / 6.0;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  constexpr Vec2& operator*=(double k) { x *= k; y *= k; return *this; }

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double k) { return {k * a.x, k * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
constexpr double norm_sq(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double sup_norm(Vec2 a) { return std::max(std::abs(a.x), std::abs(a.y)); }
inline bool is_finite(Vec2 a) { return std::isfinite(a.x) && std::isfinite(a.y); }

// Rotation by angle phi (counterclockwise).
inline Vec2 rotate(Vec2 a, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}

}  // namespace unimod
