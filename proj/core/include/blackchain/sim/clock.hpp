#pragma once

#include <cstdint>

namespace blackchain::sim {

// One tick is 100 ms of simulated time; ten ticks make one second, so one
// beacon per vehicle per tick is the 10 Hz beaconing rate.
using Tick = std::uint64_t;

constexpr Tick kTicksPerSecond = 10;
constexpr double kSecondsPerTick = 0.1;

inline double ticks_to_seconds(Tick t) { return static_cast<double>(t) * kSecondsPerTick; }

} // namespace blackchain::sim
