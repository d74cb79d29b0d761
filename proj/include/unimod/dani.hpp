#pragma once

#include "unimod/dani/continued_fraction.hpp"
#include "unimod/dani/correspondence.hpp"
#include "unimod/dani/dirichlet.hpp"
#include "unimod/dani/functions.hpp"
