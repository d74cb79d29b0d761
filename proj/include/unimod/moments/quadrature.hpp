#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <queue>
#include <string>
#include <vector>

#include "unimod/error.hpp"
#include "unimod/geometry.hpp"
#include "unimod/moments/special.hpp"
#include "unimod/regions.hpp"

namespace unimod {

struct QuadratureOptions {
  double tol = 1e-6;             // relative, on the final second moment
  std::size_t max_cells = 1000000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::int64_t cutoff = 0;           // largest |n| that can contribute
  std::vector<double> terms;         // contribution of +-n for n = 1..cutoff
  std::size_t cells = 0;
  bool symmetric = false;
};

// |I_x^n|: the length of {t : n(-x2, x1)/|x|^2 + t x in S}.
inline double interval_length(const ConvexRegion& region, Vec2 x, double n) {
  const double q = norm_sq(x);
  if (!(q > 0.0)) return 0.0;
  const Vec2 base{-n * x.y / q, n * x.x / q};
  return line_interval(region, base, x).length();
}

namespace detail {

// Degree-5 seven-point rule on a triangle (barycentric nodes).
struct TriangleRule {
  static constexpr double centre_weight = 9.0 / 40.0;
  static double a1() { return (6.0 - std::sqrt(15.0)) / 21.0; }
  static double a2() { return (6.0 + std::sqrt(15.0)) / 21.0; }
  static double w1() { return (155.0 - std::sqrt(15.0)) / 1200.0; }
  static double w2() { return (155.0 + std::sqrt(15.0)) / 1200.0; }

  template <class F>
  static double apply(const std::array<Vec2, 3>& t, F&& f) {
    static const double A1 = a1(), A2 = a2(), W1 = w1(), W2 = w2();
    const double area = 0.5 * std::abs(cross(t[1] - t[0], t[2] - t[0]));
    auto at = [&](double l0, double l1, double l2) {
      return f(l0 * t[0] + l1 * t[1] + l2 * t[2]);
    };
    const double c = at(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
    const double b1 = 1.0 - 2.0 * A1;
    const double b2 = 1.0 - 2.0 * A2;
    const double s1 = at(A1, A1, b1) + at(A1, b1, A1) + at(b1, A1, A1);
    const double s2 = at(A2, A2, b2) + at(A2, b2, A2) + at(b2, A2, A2);
    return area * (centre_weight * c + W1 * s1 + W2 * s2);
  }

  static std::array<std::array<Vec2, 3>, 4> split(const std::array<Vec2, 3>& t) {
    const Vec2 m01 = 0.5 * (t[0] + t[1]);
    const Vec2 m12 = 0.5 * (t[1] + t[2]);
    const Vec2 m20 = 0.5 * (t[2] + t[0]);
    return {{{t[0], m01, m20}, {m01, t[1], m12}, {m20, m12, t[2]}, {m01, m12, m20}}};
  }
};

// Annular sector [rho0, rho1] x [theta0, theta1], integrated with a 3 x 3
// Gauss-Legendre rule in polar coordinates.
struct PolarCell {
  double rho0, rho1, theta0, theta1;

  template <class F>
  double apply(F&& f) const {
    static const double node = std::sqrt(0.6);
    static constexpr std::array<double, 3> w{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const std::array<double, 3> x{-node, 0.0, node};
    const double rc = 0.5 * (rho0 + rho1), rh = 0.5 * (rho1 - rho0);
    const double tc = 0.5 * (theta0 + theta1), th = 0.5 * (theta1 - theta0);
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double rho = rc + rh * x[i];
      for (int j = 0; j < 3; ++j) {
        const double theta = tc + th * x[j];
        sum += w[i] * w[j] * rho * f(Vec2{rho * std::cos(theta), rho * std::sin(theta)});
      }
    }
    return sum * rh * th;
  }

  std::array<PolarCell, 2> split_radial() const {
    const double m = 0.5 * (rho0 + rho1);
    return {{{rho0, m, theta0, theta1}, {m, rho1, theta0, theta1}}};
  }
  std::array<PolarCell, 2> split_angular() const {
    const double m = 0.5 * (theta0 + theta1);
    return {{{rho0, rho1, theta0, m}, {rho0, rho1, m, theta1}}};
  }
};

struct Estimate {
  double value = 0.0;  // refined estimate
  double error = 0.0;  // |refined - coarse|
};

// Adaptive integration over a set of initial cells. A cell is refined into
// children; its estimate is the children's sum and its error the change from
// the single-cell rule. The cell with the largest error is refined first.
template <class Cell, class Refine>
Estimate adaptive(std::vector<Cell> initial, double abs_tol, std::size_t& cell_budget,
                  Refine&& refine, const char* what) {
  struct Item {
    Cell cell;
    double fine;
    double error;
    bool operator<(const Item& o) const { return error < o.error; }
  };
  std::priority_queue<Item> queue;
  double total = 0.0;
  double total_error = 0.0;
  for (const Cell& c : initial) {
    const auto [fine, err] = refine.estimate(c);
    queue.push({c, fine, err});
    total += fine;
    total_error += err;
  }
  std::size_t used = initial.size();
  while (total_error > abs_tol) {
    if (used >= cell_budget) {
      throw ConvergenceError(std::string(what) + ": cell budget exhausted with error " +
                                 std::to_string(total_error),
                             total, total_error);
    }
    const Item top = queue.top();
    queue.pop();
    total -= top.fine;
    total_error -= top.error;
    for (const Cell& child : refine.children(top.cell)) {
      const auto [fine, err] = refine.estimate(child);
      queue.push({child, fine, err});
      total += fine;
      total_error += err;
      ++used;
    }
    // Guard the running sums against drift.
    if (total_error < 0.0) total_error = 0.0;
  }
  cell_budget -= std::min(cell_budget, used);
  // Re-sum to remove accumulated rounding in the running totals.
  double sum = 0.0, err = 0.0;
  while (!queue.empty()) {
    sum += queue.top().fine;
    err += queue.top().error;
    queue.pop();
  }
  return {sum, err};
}

template <class F>
struct TriangleRefiner {
  F f;
  using Cell = std::array<Vec2, 3>;
  std::pair<double, double> estimate(const Cell& t) const {
    const double coarse = TriangleRule::apply(t, f);
    double fine = 0.0;
    for (const auto& c : TriangleRule::split(t)) fine += TriangleRule::apply(c, f);
    return {fine, std::abs(fine - coarse)};
  }
  std::array<Cell, 4> children(const Cell& t) const { return TriangleRule::split(t); }
};

template <class F>
struct PolarRefiner {
  F f;
  std::pair<double, double> estimate(const PolarCell& c) const {
    const double coarse = c.apply(f);
    double radial = 0.0, angular = 0.0;
    for (const auto& k : c.split_radial()) radial += k.apply(f);
    for (const auto& k : c.split_angular()) angular += k.apply(f);
    const double er = std::abs(radial - coarse);
    const double ea = std::abs(angular - coarse);
    return {er >= ea ? radial : angular, er + ea};
  }
  // Split along the direction whose refinement changed the estimate most.
  std::array<PolarCell, 2> children(const PolarCell& c) const {
    const double coarse = c.apply(f);
    double radial = 0.0, angular = 0.0;
    for (const auto& k : c.split_radial()) radial += k.apply(f);
    for (const auto& k : c.split_angular()) angular += k.apply(f);
    return std::abs(radial - coarse) >= std::abs(angular - coarse) ? c.split_radial()
                                                                    : c.split_angular();
  }
};

// For discs, `radial_breaks` lists radii where the integrand is not smooth;
// they become cell boundaries, since a cell whose support starts just inside
// its outer edge can show zero at every node.
template <class F>
Estimate integrate_over(const ConvexRegion& region, F&& f, double abs_tol,
                        std::size_t& cell_budget, std::vector<double> radial_breaks = {}) {
  if (region.shape() == ConvexRegion::Shape::disc) {
    const double radius = region.parameter();
    constexpr int radial = 32, angular = 16;
    std::vector<double> radii;
    for (int i = 0; i <= radial; ++i) radii.push_back(radius * i / radial);
    for (double b : radial_breaks) {
      if (b > 0.0 && b < radius) radii.push_back(b);
    }
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    std::vector<PolarCell> cells;
    for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
      for (int j = 0; j < angular; ++j) {
        cells.push_back({radii[i], radii[i + 1], 2.0 * kPi * j / angular,
                         2.0 * kPi * (j + 1) / angular});
      }
    }
    return adaptive(std::move(cells), abs_tol, cell_budget, PolarRefiner<F&>{f}, "quadrature");
  }
  const auto v = region.vertices();
  Vec2 centroid{};
  for (const Vec2& p : v) centroid += p;
  centroid *= 1.0 / static_cast<double>(v.size());
  std::vector<std::array<Vec2, 3>> cells;
  for (std::size_t i = 0; i < v.size(); ++i) {
    cells.push_back({centroid, v[i], v[(i + 1) % v.size()]});
  }
  // Start from a uniform mesh fine enough that the rule sees every feature of
  // the integrand larger than a few percent of the region.
  for (int level = 0; level < 4; ++level) {
    std::vector<std::array<Vec2, 3>> finer;
    finer.reserve(cells.size() * 4);
    for (const auto& c : cells) {
      for (const auto& k : TriangleRule::split(c)) finer.push_back(k);
    }
    cells = std::move(finer);
  }
  return adaptive(std::move(cells), abs_tol, cell_budget, TriangleRefiner<F&>{f}, "quadrature");
}

}  // namespace detail

// Second moment of the primitive counting function of a convex region:
//   (1/zeta(2)) (area(S) + area(S cap -S) + sum_{n != 0} phi(|n|)/|n| int_S |I_x^n| dx),
// with every integral evaluated by adaptive quadrature.
inline QuadratureResult second_moment_general(const ConvexRegion& region,
                                              const QuadratureOptions& options = {}) {
  if (!(options.tol >= 1e-8 && options.tol <= 1e-2)) {
    throw ArgumentError("second_moment_general: tol must lie in [1e-8, 1e-2]");
  }
  const AreaSymmetry areas = area_and_symmetry(region);
  const double outer = region.outer_radius();
  QuadratureResult result;
  result.symmetric = region.centrally_symmetric();
  result.cutoff = static_cast<std::int64_t>(std::ceil(outer * outer));
  const std::int64_t cutoff = std::max<std::int64_t>(result.cutoff, 1);
  const auto phi = totient_upto(cutoff);
  const int sides = result.symmetric ? 1 : 2;
  const double multiplicity = result.symmetric ? 2.0 : 1.0;
  const double base = areas.area + areas.symmetric_area;
  // Each of the (at most 2 * cutoff) integrals gets an equal share of the
  // absolute error allowance tol * base <= tol * zeta(2) * value.
  const double budget_per_integral = options.tol * base / (2.0 * static_cast<double>(cutoff));

  std::size_t cell_budget = options.max_cells;
  std::string exhausted;
  double sum = base;
  double error = 0.0;
  for (std::int64_t n = 1; n <= result.cutoff; ++n) {
    const double weight = multiplicity * static_cast<double>(phi[static_cast<std::size_t>(n)]) /
                          static_cast<double>(n);
    double term = 0.0;
    for (int side = 0; side < sides; ++side) {
      const double signed_n = side == 0 ? static_cast<double>(n) : -static_cast<double>(n);
      auto integrand = [&](Vec2 x) { return interval_length(region, x, signed_n); };
      detail::Estimate e;
      try {
        // The support of |I_x^n| in a disc of radius R starts at |x| = |n| / R.
        const double edge = region.shape() == ConvexRegion::Shape::disc
                                ? static_cast<double>(n) / region.parameter()
                                : 0.0;
        e = detail::integrate_over(region, integrand, budget_per_integral / weight, cell_budget,
                                   {edge});
      } catch (const ConvergenceError& failure) {
        // Keep going on the initial cells alone so the reported estimate
        // still covers every term.
        if (exhausted.empty()) exhausted = failure.what();
        e = {failure.best_estimate(), failure.error_estimate()};
      }
      term += weight * e.value;
      error += weight * e.error;
    }
    result.terms.push_back(term / kZeta2);
    sum += term;
  }
  if (!exhausted.empty()) throw ConvergenceError(exhausted, sum / kZeta2, error / kZeta2);
  result.value = sum / kZeta2;
  result.error = error / kZeta2;
  result.cells = options.max_cells - cell_budget;
  return result;
}

}  // namespace unimod
