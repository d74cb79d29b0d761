#pragma once

#include "unimod/moments/closed_form.hpp"
#include "unimod/moments/monte_carlo.hpp"
#include "unimod/moments/quadrature.hpp"
#include "unimod/moments/special.hpp"
