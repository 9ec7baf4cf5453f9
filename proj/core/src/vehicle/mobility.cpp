#include "blackchain/vehicle/mobility.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace blackchain::vehicle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_heading(double h) {
    h = std::fmod(h, kTwoPi);
    if (h < 0) h += kTwoPi;
    return h;
}

// Reflect into [0, limit]; also mirrors the heading component.
void reflect_axis(double& coord, double limit, bool horizontal, double& heading) {
    if (coord >= 0 && coord <= limit) return;
    if (coord < 0) coord = -coord;
    if (coord > limit) coord = 2 * limit - coord;
    // clamp pathological overshoot (speed bounded, so one fold suffices)
    if (coord < 0) coord = 0;
    if (coord > limit) coord = limit;
    heading = horizontal ? wrap_heading(std::numbers::pi - heading) : wrap_heading(-heading);
}

} // namespace

KinematicState step_mobility(const KinematicState& k, sim::Tick dt, Rng& rng,
                             const MobilityParams& p) {
    if (dt < 1) throw std::invalid_argument("step_mobility: dt must be >= 1 tick");
    const double dt_s = sim::ticks_to_seconds(dt);

    KinematicState out = k;
    out.pos.x += k.speed * std::cos(k.heading) * dt_s;
    out.pos.y += k.speed * std::sin(k.heading) * dt_s;

    reflect_axis(out.pos.x, p.world_w, true, out.heading);
    reflect_axis(out.pos.y, p.world_h, false, out.heading);

    out.speed += rng.uniform(-p.accel_max, p.accel_max) * dt_s;
    if (out.speed < 0) out.speed = 0;
    if (out.speed > p.v_max) out.speed = p.v_max;

    out.heading = wrap_heading(out.heading + rng.uniform(-p.turn_max, p.turn_max) * dt_s);
    return out;
}

} // namespace blackchain::vehicle
