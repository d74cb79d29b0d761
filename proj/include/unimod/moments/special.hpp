#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "unimod/error.hpp"
#include "unimod/geometry.hpp"

namespace unimod {

namespace detail {

// Li2(z) by its power series; intended for 0 <= z <= 1/2.
inline double dilog_series(double z) {
  double term = z;
  double sum = 0.0;
  for (int k = 1; k < 200 && term > 0.0; ++k) {
    const double add = term / (static_cast<double>(k) * k);
    sum += add;
    if (add < 1e-17 * sum) break;
    term *= z;
  }
  return sum;
}

// Li2(z) - z = sum_{k>=2} z^k / k^2, free of the leading-term cancellation.
inline double dilog_minus_identity(double z) {
  double term = z * z;
  double sum = 0.0;
  for (int k = 2; k < 200 && term > 0.0; ++k) {
    const double add = term / (static_cast<double>(k) * k);
    sum += add;
    if (add < 1e-17 * sum) break;
    term *= z;
  }
  return sum;
}

}  // namespace detail

// Li2(1 - w) for w in [0, 1], accurate when w is small and known exactly.
inline double dilog_complement(double w) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw DomainError("dilog: argument 1 - " + std::to_string(w) + " outside [0, 1]");
  }
  if (w == 0.0) return kZeta2;
  if (w >= 0.5) return detail::dilog_series(1.0 - w);
  return kZeta2 - std::log1p(-w) * std::log(w) - detail::dilog_series(w);
}

// Li2(z) = sum z^k / k^2 on [0, 1].
inline double dilog(double z) {
  if (!(z >= 0.0 && z <= 1.0)) {
    throw DomainError("dilog: argument " + std::to_string(z) + " outside [0, 1]");
  }
  if (z <= 0.5) return detail::dilog_series(z);
  return dilog_complement(1.0 - z);
}

// phi(0..n) by a sieve; entry 0 is unused and set to 0.
inline std::vector<std::int64_t> totient_upto(std::int64_t n) {
  if (n < 1) throw ArgumentError("totient_upto: N must be >= 1");
  std::vector<std::int64_t> phi(static_cast<std::size_t>(n) + 1);
  for (std::int64_t i = 0; i <= n; ++i) phi[static_cast<std::size_t>(i)] = i;
  for (std::int64_t p = 2; p <= n; ++p) {
    if (phi[static_cast<std::size_t>(p)] != p) continue;
    for (std::int64_t m = p; m <= n; m += p) {
      auto& v = phi[static_cast<std::size_t>(m)];
      v -= v / p;
    }
  }
  return phi;
}

}  // namespace unimod
