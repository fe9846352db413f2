#pragma once

#include "tendon_hand/types.hpp"
#include "tendon_hand/geometry.hpp"
#include "tendon_hand/geometry_io.hpp"
#include "tendon_hand/analytic_map.hpp"
#include "tendon_hand/compensation.hpp"
#include "tendon_hand/control.hpp"
#include "tendon_hand/plant_sim.hpp"
#include "tendon_hand/sweep_io.hpp"
#include "tendon_hand/poses.hpp"
