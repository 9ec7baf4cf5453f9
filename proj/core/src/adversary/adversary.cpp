#include "blackchain/adversary/adversary.hpp"

#include <stdexcept>

namespace blackchain::adversary {

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::none: return "none";
        case Strategy::false_position: return "false_position";
        case Strategy::bad_mouth: return "bad_mouth";
        case Strategy::sybil_vote: return "sybil_vote";
        case Strategy::byz_rsu_silent: return "byz_rsu_silent";
        case Strategy::byz_rsu_equivocate: return "byz_rsu_equivocate";
    }
    return "?";
}

std::optional<Strategy> strategy_from_name(const std::string& name) {
    for (Strategy s : {Strategy::false_position, Strategy::bad_mouth, Strategy::sybil_vote,
                       Strategy::byz_rsu_silent, Strategy::byz_rsu_equivocate}) {
        if (name == strategy_name(s)) return s;
    }
    return std::nullopt;
}

vehicle::Beacon false_position_beacon(const vehicle::KinematicState& true_state, double offset_m,
                                      const scms::PseudonymWithKey& cred, sim::Tick tick) {
    if (offset_m <= 0) throw std::invalid_argument("offset_m must be > 0");
    vehicle::KinematicState lie = true_state;
    lie.pos.x += offset_m;
    return vehicle::make_beacon(cred, tick, lie);
}

vehicle::MisbehaviorReport bad_mouth_report(const scms::PseudonymWithKey& attacker,
                                            const vehicle::Beacon& victim_prev,
                                            const vehicle::Beacon& victim_cur,
                                            std::uint64_t cluster_id, sim::Tick tick,
                                            const vehicle::DetectionParams& det) {
    vehicle::TrustStatement st;
    st.suspect = victim_cur.p_id();
    st.check = vehicle::CheckKind::speed_bound;
    st.inputs = {victim_prev.hash(), victim_cur.hash()};
    st.verdict = vehicle::kVerdictImplausible;
    // the fabrication: a computed value far over threshold that the honest
    // beacons do not reproduce
    st.threshold = det.v_max * (1.0 + det.tol);
    st.computed_value = st.threshold * 10.0;

    auto built = vehicle::build_report({st}, {victim_prev, victim_cur}, attacker, cluster_id, tick);
    // closure holds by construction
    return *built.report;
}

} // namespace blackchain::adversary
