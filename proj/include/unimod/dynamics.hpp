#pragma once

#include "unimod/dynamics/borel_cantelli.hpp"
#include "unimod/dynamics/small_targets.hpp"
#include "unimod/dynamics/scan.hpp"
#include "unimod/dynamics/thickening.hpp"
#include "unimod/dynamics/trajectory.hpp"
