#pragma once

// Umbrella header: the law, moments, simulator and validation harness of a
// one-dimensional random motion with two alternating velocities whose
// sojourn times are gamma-distributed alternating renewals.

#include "gammatel/types.hpp"
#include "gammatel/specfun.hpp"
#include "gammatel/quadrature.hpp"
#include "gammatel/law.hpp"
#include "gammatel/moments.hpp"
#include "gammatel/rng.hpp"
#include "gammatel/simulate.hpp"
#include "gammatel/harness.hpp"
