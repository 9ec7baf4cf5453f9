#pragma once

#include "blackchain/rng.hpp"
#include "blackchain/sim/clock.hpp"
#include "blackchain/vehicle/beacon.hpp"

namespace blackchain::vehicle {

struct MobilityParams {
    double v_max = 70.0;        // m/s
    double accel_max = 2.0;     // m/s^2, bound of the speed random walk
    double turn_max = 0.3;      // rad/s, bound of the heading random walk
    double world_w = 2000.0;    // m, vehicles reflect off the borders
    double world_h = 2000.0;
};

// Advances position by speed along heading for dt ticks, then perturbs
// speed and heading with a bounded random walk. Speed stays in [0, v_max],
// heading wraps to [0, 2*pi), position reflects at world borders. The
// straight-line displacement over dt never exceeds v_max * dt seconds,
// which is what keeps honest traffic below every plausibility threshold.
KinematicState step_mobility(const KinematicState& k, sim::Tick dt, Rng& rng,
                             const MobilityParams& p);

} // namespace blackchain::vehicle
