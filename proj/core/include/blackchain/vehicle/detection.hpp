#pragma once

#include <map>
#include <optional>
#include <vector>

#include "blackchain/vehicle/beacon.hpp"

namespace blackchain::vehicle {

enum class CheckKind : std::uint8_t {
    speed_bound = 0, // implied speed between consecutive beacons
    teleport = 1,    // single-hop position jump
    beacon_rate = 2, // more than one beacon per tick per pseudonym
};

const char* check_name(CheckKind c);

// Globally agreed detection parameters. Validators re-derive thresholds
// from these, so a report cannot smuggle in its own.
struct DetectionParams {
    double v_max = 70.0;
    double tol = 0.1;        // speed_bound headroom, absorbs tick discretization
    double jump_slack = 5.0; // meters
};

constexpr std::uint8_t kVerdictImplausible = 1;

// Publicly re-executable detection result: anyone holding the referenced
// beacons and the detection parameters reproduces computed_value, threshold
// and verdict bit-for-bit.
struct TrustStatement {
    scms::PseudonymId suspect;
    CheckKind check = CheckKind::speed_bound;
    std::vector<Hash256> inputs; // beacon hashes, in check-defined order
    std::uint8_t verdict = kVerdictImplausible;
    double computed_value = 0;
    double threshold = 0;

    void encode(ByteWriter& w) const;
    static TrustStatement decode(ByteReader& r);
};

struct Detection {
    TrustStatement statement;
    std::vector<Beacon> evidence; // the referenced beacons, same order as inputs
};

// Per-observer log of received beacons, keyed by pseudonym.
class BeaconHistory {
  public:
    // Record a beacon after detection has looked at it.
    void observe(const Beacon& b);

    const Beacon* last_of(scms::PseudonymId p) const;
    // Beacons already seen this tick for this pseudonym (for beacon_rate).
    const std::vector<Beacon>* same_tick(scms::PseudonymId p, sim::Tick t) const;

    std::size_t tracked_pseudonyms() const { return last_.size(); }

  private:
    std::map<scms::PseudonymId, Beacon> last_;
    std::map<scms::PseudonymId, std::vector<Beacon>> tick_log_; // current tick only
};

// Runs the plausibility checks on an incoming beacon against the observer's
// history. Checks run in a fixed order: beacon_rate when the pseudonym
// already beaconed this tick, else speed_bound then teleport. The caller
// must have verified the beacon signature; the first beacon of a pseudonym
// never fires (no history).
std::optional<Detection> detect_misbehavior(const BeaconHistory& history, const Beacon& incoming,
                                            const DetectionParams& params);

struct ReExecResult {
    bool ok = false;          // inputs well-formed and statement reproduced exactly
    double computed_value = 0;
    double threshold = 0;
    std::uint8_t verdict = 0;
};

// Re-executes a statement's check over the resolved input beacons and
// compares value, threshold and verdict against the claimed ones. This is
// the bad-mouthing defense: fabricated statements fail here.
ReExecResult re_execute_statement(const TrustStatement& st, const std::vector<Beacon>& inputs,
                                  const DetectionParams& params);

} // namespace blackchain::vehicle
