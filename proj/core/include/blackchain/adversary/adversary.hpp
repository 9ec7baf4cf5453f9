#pragma once

#include <optional>
#include <string>

#include "blackchain/vehicle/report.hpp"

namespace blackchain::adversary {

enum class Strategy : std::uint8_t {
    none = 0,
    false_position,     // beacons displaced by a fixed offset
    bad_mouth,          // fabricated accusations against an honest victim
    sybil_vote,         // endorse with both simultaneously valid pseudonyms
    byz_rsu_silent,     // RSU never proposes or echoes
    byz_rsu_equivocate, // RSU proposes/echoes conflicting statements
};

const char* strategy_name(Strategy s);
std::optional<Strategy> strategy_from_name(const std::string& name);

// Declared in the scenario config. Targets are node indexes: the attacker
// vehicles (or RSUs for the byz_* strategies); `victim` names the accused
// vehicle for bad_mouth.
struct AttackProfile {
    Strategy strategy = Strategy::none;
    std::vector<std::uint32_t> targets;
    std::uint32_t victim = 0;
    double offset_m = 500.0;
    sim::Tick start_tick = 0;
    sim::Tick end_tick = ~sim::Tick{0};

    bool active_at(sim::Tick t) const { return start_tick <= t && t <= end_tick; }
};

// Correctly signed beacon whose position is displaced by offset_m in a
// fixed direction (+x). The signature is genuine; only the content lies.
vehicle::Beacon false_position_beacon(const vehicle::KinematicState& true_state, double offset_m,
                                      const scms::PseudonymWithKey& cred, sim::Tick tick);

// Syntactically valid report accusing the victim with a fabricated
// computed_value over genuine signed beacons. Signatures and closure hold;
// only re-execution exposes the lie.
vehicle::MisbehaviorReport bad_mouth_report(const scms::PseudonymWithKey& attacker,
                                            const vehicle::Beacon& victim_prev,
                                            const vehicle::Beacon& victim_cur,
                                            std::uint64_t cluster_id, sim::Tick tick,
                                            const vehicle::DetectionParams& det);

} // namespace blackchain::adversary
