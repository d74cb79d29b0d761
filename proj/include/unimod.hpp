#pragma once

#include "unimod/dani.hpp"
#include "unimod/dynamics.hpp"
#include "unimod/error.hpp"
#include "unimod/geometry.hpp"
#include "unimod/haar.hpp"
#include "unimod/lattice.hpp"
#include "unimod/moments.hpp"
#include "unimod/parallel.hpp"
#include "unimod/regions.hpp"

namespace unimod {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace unimod
