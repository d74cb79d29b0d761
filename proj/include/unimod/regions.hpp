#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "unimod/error.hpp"
#include "unimod/geometry.hpp"
#include "unimod/parse.hpp"

namespace unimod {

// Points within this distance of a region boundary are treated as lying on it.
inline constexpr double kBoundaryTolerance = 1e-12;

// Parameter interval {t : base + t * direction in region}. The canonical
// empty interval is (+inf, -inf).
struct Interval {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  static constexpr Interval empty_interval() { return {}; }
  bool empty() const { return !(lo < hi); }
  double length() const { return empty() ? 0.0 : hi - lo; }
};

// A bounded convex planar region: the squares S_r, origin-centered discs,
// axis-parallel rectangles, or strictly convex polygons.
class ConvexRegion {
 public:
  enum class Shape { square, disc, rect, polygon };

  // Open square with vertices (+-e^-r, +-e^-r).
  static ConvexRegion square(double r, bool open = true) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw ArgumentError("square: r must be finite and >= 0");
    }
    const double h = std::exp(-r);
    ConvexRegion region(Shape::square, open, {{-h, -h}, {h, -h}, {h, h}, {-h, h}});
    region.parameter_ = r;
    return region;
  }

  // Open disc of radius R centered at the origin.
  static ConvexRegion disc(double radius, bool open = true) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
      throw ArgumentError("disc: R must be finite and > 0");
    }
    ConvexRegion region;
    region.shape_ = Shape::disc;
    region.open_ = open;
    region.parameter_ = radius;
    region.area_ = kPi * radius * radius;
    region.outer_radius_ = radius;
    region.inner_radius_ = radius;
    return region;
  }

  static ConvexRegion rect(double x0, double y0, double x1, double y1, bool open = false) {
    if (!(x0 < x1) || !(y0 < y1) || !std::isfinite(x0) || !std::isfinite(x1) ||
        !std::isfinite(y0) || !std::isfinite(y1)) {
      throw ArgumentError("rect: need finite corners with x0 < x1 and y0 < y1");
    }
    return ConvexRegion(Shape::rect, open, {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
  }

  // Vertices must be listed counterclockwise and form a strictly convex polygon.
  static ConvexRegion polygon(std::vector<Vec2> vertices, bool open = false) {
    validate_polygon(vertices);
    return ConvexRegion(Shape::polygon, open, std::move(vertices));
  }

  // The closed rectangles around (0,1) and (1,0) that capture a primitive
  // vector of every lattice in K_r for small r, and the larger rectangles
  // U_r, R_r from which they are cut.
  static ConvexRegion near_vertical_rect(double r) {
    const double w = std::sqrt(std::expm1(2.0 * r));
    return rect(-w, std::exp(-r), w, std::exp(r));
  }
  static ConvexRegion near_horizontal_rect(double r) {
    const double w = std::sqrt(std::expm1(2.0 * r));
    return rect(std::exp(-r), -w, std::exp(r), w);
  }
  static ConvexRegion upper_rect(double r) {
    return rect(-std::exp(-r), std::exp(-r), std::exp(-r), std::exp(r));
  }
  static ConvexRegion right_rect(double r) {
    return rect(std::exp(-r), -std::exp(-r), std::exp(r), std::exp(-r));
  }

  Shape shape() const { return shape_; }
  bool is_open() const { return open_; }
  double area() const { return area_; }
  // Largest Euclidean norm over the closure.
  double outer_radius() const { return outer_radius_; }
  // Distance from the origin to the boundary when the origin is inside, else 0.
  double inner_radius() const { return inner_radius_; }
  // r for squares, R for discs; zero otherwise.
  double parameter() const { return parameter_; }
  std::span<const Vec2> vertices() const { return vertices_; }

  bool contains(Vec2 p) const {
    if (shape_ == Shape::disc) {
      const double d = norm(p) - parameter_;
      return open_ ? d < -kBoundaryTolerance : d <= kBoundaryTolerance;
    }
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 a = vertices_[i];
      const Vec2 edge = vertices_[(i + 1) % n] - a;
      const double d = cross(edge, p - a) / edge_lengths_[i];
      if (open_ ? d <= kBoundaryTolerance : d < -kBoundaryTolerance) return false;
    }
    return true;
  }

  bool centrally_symmetric() const {
    if (shape_ == Shape::disc || shape_ == Shape::square) return true;
    const double tol = 1e-12 * std::max(1.0, outer_radius_);
    for (const Vec2& v : vertices_) {
      const bool found = std::any_of(vertices_.begin(), vertices_.end(), [&](Vec2 w) {
        return std::abs(w.x + v.x) <= tol && std::abs(w.y + v.y) <= tol;
      });
      if (!found) return false;
    }
    return true;
  }

  // The reflection {x : -x in S}.
  ConvexRegion reflected() const {
    if (shape_ == Shape::disc || shape_ == Shape::square) return *this;
    std::vector<Vec2> v;
    v.reserve(vertices_.size());
    for (const Vec2& p : vertices_) v.push_back(-p);
    // Point reflection preserves orientation.
    ConvexRegion out(shape_ == Shape::rect ? Shape::polygon : shape_, open_, std::move(v));
    return out;
  }

  // Canonical mini-format string, e.g. "square:r=0.1".
  std::string describe() const {
    using parse::format;
    std::string out;
    switch (shape_) {
      case Shape::square: out = "square:r=" + format(parameter_); break;
      case Shape::disc: out = "disc:R=" + format(parameter_); break;
      case Shape::rect:
        out = "rect:" + format(vertices_[0].x) + ',' + format(vertices_[0].y) + ',' +
              format(vertices_[2].x) + ',' + format(vertices_[2].y);
        break;
      case Shape::polygon:
        out = "poly:";
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
          if (i) out += ';';
          out += format(vertices_[i].x) + ',' + format(vertices_[i].y);
        }
        break;
    }
    return out;
  }

  static void validate_polygon(const std::vector<Vec2>& v) {
    if (v.size() < 3) throw ArgumentError("polygon: need at least 3 vertices");
    double scale = 0.0;
    for (const Vec2& p : v) {
      if (!is_finite(p)) throw ArgumentError("polygon: non-finite vertex");
      scale = std::max(scale, sup_norm(p));
    }
    const double tol = 1e-14 * std::max(scale * scale, 1e-300);
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 e1 = v[(i + 1) % n] - v[i];
      const Vec2 e2 = v[(i + 2) % n] - v[(i + 1) % n];
      if (!(cross(e1, e2) > tol)) {
        throw ArgumentError(
            "polygon: vertices must be strictly convex and counterclockwise (vertex " +
            std::to_string((i + 1) % n) + ")");
      }
    }
    if (!(signed_area(v) > 0.0)) throw ArgumentError("polygon: zero or negative area");
    // Winding number one: the turning angles must sum to 2*pi.
    double turning = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 e1 = v[(i + 1) % n] - v[i];
      const Vec2 e2 = v[(i + 2) % n] - v[(i + 1) % n];
      turning += std::atan2(cross(e1, e2), dot(e1, e2));
    }
    if (std::abs(turning - 2.0 * kPi) > 1e-6) {
      throw ArgumentError("polygon: boundary winds more than once");
    }
  }

  static double signed_area(std::span<const Vec2> v) {
    double a = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
    return 0.5 * a;
  }

 private:
  ConvexRegion() = default;

  ConvexRegion(Shape shape, bool open, std::vector<Vec2> vertices)
      : shape_(shape), open_(open), vertices_(std::move(vertices)) {
    area_ = signed_area(vertices_);
    if (!(area_ > 0.0)) throw ArgumentError("region: degenerate (zero-area) input");
    const std::size_t n = vertices_.size();
    edge_lengths_.resize(n);
    double inner = std::numeric_limits<double>::infinity();
    bool origin_inside = true;
    for (std::size_t i = 0; i < n; ++i) {
      outer_radius_ = std::max(outer_radius_, norm(vertices_[i]));
      const Vec2 edge = vertices_[(i + 1) % n] - vertices_[i];
      edge_lengths_[i] = norm(edge);
      const double d = cross(edge, -vertices_[i]) / edge_lengths_[i];
      if (d < 0.0) origin_inside = false;
      inner = std::min(inner, d);
    }
    inner_radius_ = origin_inside ? inner : 0.0;
  }

  Shape shape_ = Shape::polygon;
  bool open_ = false;
  double parameter_ = 0.0;
  double area_ = 0.0;
  double outer_radius_ = 0.0;
  double inner_radius_ = 0.0;
  std::vector<Vec2> vertices_;
  std::vector<double> edge_lengths_;
};

// Intersection of two convex polygons (Sutherland-Hodgman); may be empty or
// degenerate, in which case the returned vertex list has zero area.
inline std::vector<Vec2> clip_convex(std::span<const Vec2> subject, std::span<const Vec2> clip) {
  std::vector<Vec2> out(subject.begin(), subject.end());
  const std::size_t m = clip.size();
  for (std::size_t j = 0; j < m && !out.empty(); ++j) {
    const Vec2 a = clip[j];
    const Vec2 edge = clip[(j + 1) % m] - a;
    std::vector<Vec2> in;
    in.swap(out);
    const std::size_t n = in.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 p = in[i];
      const Vec2 q = in[(i + 1) % n];
      const double dp = cross(edge, p - a);
      const double dq = cross(edge, q - a);
      if (dp >= 0.0) out.push_back(p);
      if ((dp >= 0.0) != (dq >= 0.0)) {
        const double t = dp / (dp - dq);
        out.push_back(p + t * (q - p));
      }
    }
  }
  return out;
}

struct AreaSymmetry {
  double area = 0.0;
  double symmetric_area = 0.0;  // area of S intersected with its reflection
};

inline AreaSymmetry area_and_symmetry(const ConvexRegion& region) {
  if (region.centrally_symmetric()) return {region.area(), region.area()};
  const ConvexRegion mirror = region.reflected();
  const std::vector<Vec2> both = clip_convex(region.vertices(), mirror.vertices());
  const double a = both.size() < 3 ? 0.0 : std::max(0.0, ConvexRegion::signed_area(both));
  // Slivers produced by touching boundaries are rounding noise.
  return {region.area(), a <= 1e-14 * region.area() ? 0.0 : a};
}

inline Interval line_interval(const ConvexRegion& region, Vec2 base, Vec2 direction) {
  if (!(norm_sq(direction) > 0.0)) throw ArgumentError("line_interval: zero direction");
  if (region.shape() == ConvexRegion::Shape::disc) {
    const double radius = region.parameter();
    const double a = norm_sq(direction);
    const double b = dot(base, direction);
    const double c = norm_sq(base) - radius * radius;
    const double disc = b * b - a * c;
    if (!(disc > 0.0)) return Interval::empty_interval();
    const double root = std::sqrt(disc);
    // Numerically stable pair of roots.
    const double q = b >= 0.0 ? -(b + root) : -(b - root);
    double t1 = q / a;
    double t2 = q != 0.0 ? c / q : -t1;
    if (t1 > t2) std::swap(t1, t2);
    return {t1, t2};
  }
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  const auto v = region.vertices();
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 edge = v[(i + 1) % n] - v[i];
    // inside: c0 + t * c1 >= 0
    const double c0 = cross(edge, base - v[i]);
    const double c1 = cross(edge, direction);
    if (c1 == 0.0) {
      if (c0 < 0.0) return Interval::empty_interval();
      continue;
    }
    const double t = -c0 / c1;
    if (c1 > 0.0) lo = std::max(lo, t);
    else hi = std::min(hi, t);
  }
  if (!(lo < hi)) return Interval::empty_interval();
  return {lo, hi};
}

// Region mini-format: "square:r=0.1", "disc:R=1.5", "rect:x0,y0,x1,y1",
// "poly:x1,y1;x2,y2;...".
inline ConvexRegion parse_region(std::string_view spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw ArgumentError("region '" + std::string(spec) + "': expected <shape>:<parameters>");
  }
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view body = spec.substr(colon + 1);
  if (kind == "square") {
    return ConvexRegion::square(parse::require(parse::key_values(body, {"r"}), "r", spec));
  }
  if (kind == "disc") {
    return ConvexRegion::disc(parse::require(parse::key_values(body, {"R"}), "R", spec));
  }
  if (kind == "rect") {
    const auto parts = parse::split(body, ',');
    if (parts.size() != 4) {
      throw ArgumentError("rect '" + std::string(body) + "': expected x0,y0,x1,y1");
    }
    return ConvexRegion::rect(parse::number(parts[0]), parse::number(parts[1]),
                              parse::number(parts[2]), parse::number(parts[3]));
  }
  if (kind == "poly") {
    std::vector<Vec2> vertices;
    for (std::string_view item : parse::split(body, ';')) {
      const auto xy = parse::split(item, ',');
      if (xy.size() != 2) {
        throw ArgumentError("poly vertex '" + std::string(item) + "': expected x,y");
      }
      vertices.push_back({parse::number(xy[0]), parse::number(xy[1])});
    }
    return ConvexRegion::polygon(std::move(vertices));
  }
  throw ArgumentError("unknown region shape '" + std::string(kind) + "'");
}

}  // namespace unimod
