#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "unimod/error.hpp"
#include "unimod/geometry.hpp"
#include "unimod/moments/special.hpp"
#include "unimod/regions.hpp"

namespace unimod {

// Above this r the region D_r of the square integral is empty.
inline const double kSquareTransition = 0.5 * std::numbers::ln2;

namespace detail {

// e^{-x} - 1 + x without cancellation for small x.
inline double expm1_neg_plus(double x) {
  if (std::abs(x) > 0.1) return std::expm1(-x) + x;
  double term = x * x / 2.0;
  double sum = 0.0;
  for (int k = 3; k < 40; ++k) {
    sum += term;
    term *= -x / k;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// N(r) = zeta(2) mu(K_r) for 0 <= r < (1/2) log 2, written in w = 1 - e^{-2r}
// so that every term is O(r^2):
//   N = 2 (Li2(w) - w) + 4 r (w - r) + 2 (w - 2r) log w.
inline double kr_numerator(double r) {
  if (r == 0.0) return 0.0;
  const double w = -std::expm1(-2.0 * r);
  const double w_minus_2r = -expm1_neg_plus(2.0 * r);
  double log_term;
  if (r < 1e-6) {
    // w - 2r = -2r^2 (1 - 2r/3 + ...) and log w = log 2r - r + ..., so the
    // product tends to 0 like r^2 log r; evaluate it from the series.
    const double log_w = std::log(2.0 * r) + std::log1p(-r + (2.0 / 3.0) * r * r);
    log_term = 2.0 * w_minus_2r * log_w;
  } else {
    log_term = 2.0 * w_minus_2r * std::log(w);
  }
  return 2.0 * detail::dilog_minus_identity(w) + 4.0 * r * (w - r) + log_term;
}

}  // namespace detail

// Integral over D_r = {x in (0, e^{-r})^2 : x1 + x2 > e^r} of
// e^{-r}/x1 + e^{-r}/x2 - 1/(x1 x2). Equal to 2 - zeta(2) at r = 0 and to zero
// from r = (1/2) log 2 on.
inline double dr_integral(double r) {
  if (!(r >= 0.0)) throw DomainError("dr_integral: r must be >= 0");
  if (r >= kSquareTransition) return 0.0;
  const double w = -std::expm1(-2.0 * r);
  return std::max(0.0, 2.0 - kZeta2 - 2.0 * w + detail::kr_numerator(r));
}

// The same integral by the dilogarithm expression as usually written, without
// any rearrangement. Kept as a cross-check of the stable form above.
inline double dr_integral_direct(double r) {
  if (!(r > 0.0)) throw DomainError("dr_integral_direct: r must be > 0");
  if (r >= kSquareTransition) return 0.0;
  const double e = std::exp(-2.0 * r);
  const double w = -std::expm1(-2.0 * r);
  return 2.0 * (1.0 - r) * (2.0 * e - 1.0 + r) + (2.0 - 2.0 * e - 2.0 * r) * std::log(w) -
         2.0 * r * r + dilog(w) - dilog_complement(w);
}

// Second moment of the primitive counting function of the open square S_r.
inline double second_moment_square_exact(double r) {
  if (!(r >= 0.0)) throw DomainError("second_moment_square_exact: r must be >= 0");
  return 8.0 * std::exp(-2.0 * r) / kZeta2 + 8.0 * dr_integral(r) / kZeta2;
}

// Second moment for the open disc of radius R.
inline double second_moment_disc_exact(double radius) {
  if (!(radius > 0.0)) throw DomainError("second_moment_disc_exact: R must be > 0");
  const double r2 = radius * radius;
  const double r4 = r2 * r2;
  double sum = 0.0;
  const auto n_max = static_cast<std::int64_t>(std::floor(r2));
  if (n_max >= 1) {
    const auto phi = totient_upto(n_max);
    for (std::int64_t n = 1; n <= n_max; ++n) {
      const double nd = static_cast<double>(n);
      const double root = std::sqrt(std::max(0.0, r4 - nd * nd));
      // arcsin(q) - pi/2 written as -arccos(q), which keeps precision as q -> 1.
      sum += static_cast<double>(phi[static_cast<std::size_t>(n)]) *
             (root / nd - std::acos(std::min(1.0, nd / r2)));
    }
  }
  return 12.0 * r2 / kPi + 48.0 / kPi * sum;
}

inline double siegel_mean_exact(const ConvexRegion& region) { return region.area() / kZeta2; }

// Haar measure of K_r = {Delta <= r}.
inline double kr_measure_exact(double r) {
  if (!(r >= 0.0)) throw DomainError("kr_measure_exact: r must be >= 0");
  if (std::isinf(r)) return 1.0;
  if (r >= kSquareTransition) return 1.0 - 2.0 * std::exp(-2.0 * r) / kZeta2;
  return std::clamp(detail::kr_numerator(r) / kZeta2, 0.0, 1.0);
}

// Leading small-r behaviour 4 r^2 log(1/r) / zeta(2).
inline double kr_measure_asymptotic(double r) {
  if (!(r > 0.0 && r < kSquareTransition)) {
    throw DomainError("kr_measure_asymptotic: r = " + std::to_string(r) +
                      " outside (0, log(2)/2)");
  }
  return 4.0 * r * r * std::log(1.0 / r) / kZeta2;
}

}  // namespace unimod
