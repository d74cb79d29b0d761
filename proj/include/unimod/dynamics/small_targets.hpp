#pragma once

#include <cmath>
#include <string>

#include "unimod/error.hpp"
#include "unimod/lattice.hpp"
#include "unimod/regions.hpp"

namespace unimod {

// Upper end of the r range for the small-target covering and separation
// statements.
inline const double kSmallTargetRadius = std::log(1.01);

// For a lattice in K_r with small r: does some primitive vector lie in the
// closed rectangle around (0, 1) or the one around (1, 0)?
inline bool covering_predicate(const LatticeBasis& lattice, double r) {
  if (!(r > 0.0 && r < kSmallTargetRadius)) {
    throw PreconditionError("covering predicate: r must lie in (0, log 1.01)");
  }
  const Reduction red = reduce(lattice);
  const double d = delta_from_reduced(red);
  if (d > r) {
    throw PreconditionError("covering predicate: lattice has Delta = " + std::to_string(d) +
                            " > r = " + std::to_string(r));
  }
  bool found = false;
  for (const ConvexRegion& rect :
       {ConvexRegion::near_vertical_rect(r), ConvexRegion::near_horizontal_rect(r)}) {
    for_each_primitive_in_region(red, rect, [&](std::int64_t, std::int64_t, Vec2) { found = true; });
    if (found) return true;
  }
  return false;
}

// For a lattice in K_r and 6r <= |s| <= log 1.9: is a_s L still in K_r?
inline bool separation_predicate(const LatticeBasis& lattice, double r, double s) {
  if (!(r > 0.0 && r < kSmallTargetRadius)) {
    throw PreconditionError("separation predicate: r must lie in (0, log 1.01)");
  }
  const double a = std::abs(s);
  if (!(a >= 6.0 * r * (1.0 - 1e-12) && a <= std::log(1.9) * (1.0 + 1e-12))) {
    throw PreconditionError("separation predicate: need 6r <= |s| <= log 1.9");
  }
  const double d = delta(lattice);
  if (d > r) {
    throw PreconditionError("separation predicate: lattice has Delta = " + std::to_string(d) +
                            " > r = " + std::to_string(r));
  }
  return in_kr(apply_flow(gauss_reduce(lattice), s), r).member;
}

}  // namespace unimod
