#pragma once

// Umbrella header for the whole library.

#include "obf/analytic.hpp"
#include "obf/channel.hpp"
#include "obf/config.hpp"
#include "obf/energy.hpp"
#include "obf/geometry.hpp"
#include "obf/modes.hpp"
#include "obf/quadrature.hpp"
#include "obf/rng.hpp"
#include "obf/sim.hpp"
#include "obf/specfun.hpp"
#include "obf/sweep.hpp"
#include "obf/units.hpp"
