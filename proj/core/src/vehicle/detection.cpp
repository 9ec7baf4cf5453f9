#include "blackchain/vehicle/detection.hpp"

#include <cmath>

namespace blackchain::vehicle {

const char* check_name(CheckKind c) {
    switch (c) {
        case CheckKind::speed_bound: return "speed_bound";
        case CheckKind::teleport: return "teleport";
        case CheckKind::beacon_rate: return "beacon_rate";
    }
    return "?";
}

void TrustStatement::encode(ByteWriter& w) const {
    w.u64(suspect.value);
    w.u8(static_cast<std::uint8_t>(check));
    w.u32(static_cast<std::uint32_t>(inputs.size()));
    for (const auto& h : inputs) w.hash(h);
    w.u8(verdict);
    w.f64(computed_value);
    w.f64(threshold);
}

TrustStatement TrustStatement::decode(ByteReader& r) {
    TrustStatement st;
    st.suspect.value = r.u64();
    std::uint8_t c = r.u8();
    if (c > 2) throw DecodeError("bad check kind");
    st.check = static_cast<CheckKind>(c);
    std::uint32_t n = r.u32();
    st.inputs.reserve(n);
    for (std::uint32_t i = 0; i < n; i++) st.inputs.push_back(r.hash());
    st.verdict = r.u8();
    st.computed_value = r.f64();
    st.threshold = r.f64();
    return st;
}

void BeaconHistory::observe(const Beacon& b) {
    auto& log = tick_log_[b.p_id()];
    if (!log.empty() && log.front().tick != b.tick) log.clear();
    log.push_back(b);
    last_.insert_or_assign(b.p_id(), b);
}

const Beacon* BeaconHistory::last_of(scms::PseudonymId p) const {
    auto it = last_.find(p);
    return it == last_.end() ? nullptr : &it->second;
}

const std::vector<Beacon>* BeaconHistory::same_tick(scms::PseudonymId p, sim::Tick t) const {
    auto it = tick_log_.find(p);
    if (it == tick_log_.end() || it->second.empty() || it->second.front().tick != t)
        return nullptr;
    return &it->second;
}

namespace {

struct PairCheck {
    double computed = 0;
    double threshold = 0;
};

PairCheck eval_speed_bound(const Beacon& prev, const Beacon& cur, const DetectionParams& p) {
    const double dt_s = sim::ticks_to_seconds(cur.tick - prev.tick);
    PairCheck r;
    r.computed = sim::distance(prev.state.pos, cur.state.pos) / dt_s;
    r.threshold = p.v_max * (1.0 + p.tol);
    return r;
}

PairCheck eval_teleport(const Beacon& prev, const Beacon& cur, const DetectionParams& p) {
    const double dt_s = sim::ticks_to_seconds(cur.tick - prev.tick);
    PairCheck r;
    r.computed = sim::distance(prev.state.pos, cur.state.pos);
    r.threshold = p.v_max * dt_s + p.jump_slack;
    return r;
}

} // namespace

std::optional<Detection> detect_misbehavior(const BeaconHistory& history, const Beacon& incoming,
                                            const DetectionParams& params) {
    const Beacon* prev = history.last_of(incoming.p_id());
    if (prev == nullptr) return std::nullopt; // no history, nothing to compare

    if (prev->tick == incoming.tick) {
        // beacon_rate: more than one beacon in the same tick from one pseudonym
        const auto* log = history.same_tick(incoming.p_id(), incoming.tick);
        std::vector<Beacon> inputs = log ? *log : std::vector<Beacon>{*prev};
        // exact duplicates are replays, not a second beacon
        for (const auto& b : inputs) {
            if (b.sig == incoming.sig) return std::nullopt;
        }
        inputs.push_back(incoming);

        Detection d;
        d.statement.suspect = incoming.p_id();
        d.statement.check = CheckKind::beacon_rate;
        for (const auto& b : inputs) d.statement.inputs.push_back(b.hash());
        d.statement.verdict = kVerdictImplausible;
        d.statement.computed_value = static_cast<double>(inputs.size());
        d.statement.threshold = 1.0;
        d.evidence = std::move(inputs);
        return d;
    }
    if (prev->tick > incoming.tick) return std::nullopt; // stale replay, ignore

    auto fire_pair = [&](CheckKind kind, const PairCheck& pc) {
        Detection d;
        d.statement.suspect = incoming.p_id();
        d.statement.check = kind;
        d.statement.inputs = {prev->hash(), incoming.hash()};
        d.statement.verdict = kVerdictImplausible;
        d.statement.computed_value = pc.computed;
        d.statement.threshold = pc.threshold;
        d.evidence = {*prev, incoming};
        return d;
    };

    PairCheck sb = eval_speed_bound(*prev, incoming, params);
    if (sb.computed > sb.threshold) return fire_pair(CheckKind::speed_bound, sb);

    PairCheck tp = eval_teleport(*prev, incoming, params);
    if (tp.computed > tp.threshold) return fire_pair(CheckKind::teleport, tp);

    return std::nullopt;
}

ReExecResult re_execute_statement(const TrustStatement& st, const std::vector<Beacon>& inputs,
                                  const DetectionParams& params) {
    ReExecResult r;
    if (inputs.size() != st.inputs.size()) return r;

    switch (st.check) {
        case CheckKind::speed_bound:
        case CheckKind::teleport: {
            if (inputs.size() != 2) return r;
            const Beacon& prev = inputs[0];
            const Beacon& cur = inputs[1];
            if (prev.p_id() != st.suspect || cur.p_id() != st.suspect) return r;
            if (cur.tick <= prev.tick) return r;
            PairCheck pc = st.check == CheckKind::speed_bound
                               ? eval_speed_bound(prev, cur, params)
                               : eval_teleport(prev, cur, params);
            r.computed_value = pc.computed;
            r.threshold = pc.threshold;
            r.verdict = pc.computed > pc.threshold ? kVerdictImplausible : 0;
            break;
        }
        case CheckKind::beacon_rate: {
            if (inputs.size() < 2) return r;
            const sim::Tick t = inputs.front().tick;
            for (const auto& b : inputs) {
                if (b.p_id() != st.suspect || b.tick != t) return r;
            }
            // distinct beacons required, otherwise one beacon repeated would count
            for (std::size_t i = 0; i < st.inputs.size(); i++)
                for (std::size_t j = i + 1; j < st.inputs.size(); j++)
                    if (st.inputs[i] == st.inputs[j]) return r;
            r.computed_value = static_cast<double>(inputs.size());
            r.threshold = 1.0;
            r.verdict = r.computed_value > r.threshold ? kVerdictImplausible : 0;
            break;
        }
    }

    // exact reproduction, bit-for-bit on the doubles
    r.ok = r.computed_value == st.computed_value && r.threshold == st.threshold &&
           r.verdict == st.verdict && st.verdict == kVerdictImplausible;
    return r;
}

} // namespace blackchain::vehicle
