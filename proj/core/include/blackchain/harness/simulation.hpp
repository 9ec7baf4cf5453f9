#pragma once

#include <memory>
#include <ostream>
#include <variant>

#include "blackchain/cluster/block.hpp"
#include "blackchain/harness/config.hpp"
#include "blackchain/harness/metrics.hpp"
#include "blackchain/ledger/chain.hpp"
#include "blackchain/rsubft/engine.hpp"
#include "blackchain/sim/event_loop.hpp"
#include "blackchain/vehicle/mobility.hpp"

namespace blackchain::harness {

// A beacon broadcast once, shared by every receiver; hash, encoded size and
// validity are pure functions of the bytes, computed once.
struct SharedBeacon {
    vehicle::Beacon beacon;
    Hash256 hash;
    std::size_t encoded_size = 0;
    bool valid = false;
};
using SharedBeaconPtr = std::shared_ptr<const SharedBeacon>;

struct BeaconMsg {
    SharedBeaconPtr beacon;
};
struct ReportMsg {
    std::shared_ptr<const vehicle::MisbehaviorReport> report;
};
struct RevVoteMsg {
    scms::PseudonymId suspect;
    std::uint64_t cluster_id = 0;
    scms::PseudonymCert voter;
    Signature sig;
};
struct ClusterProposeMsg {
    cluster::ClusterBlock candidate;        // endorsements empty
    cluster::Endorsement head_endorsement;  // also authenticates the proposer
};
struct ClusterEndorseMsg {
    std::uint64_t cluster_id = 0;
    std::uint64_t height = 0;
    Hash256 candidate_hash;
    cluster::Endorsement endorsement;
};
struct ClusterCommitMsg {
    std::shared_ptr<const cluster::ClusterBlock> block; // with endorsements
};
struct BlockSubmitMsg {
    std::shared_ptr<const cluster::ClusterBlock> block;
};
struct BftProposeMsg {
    std::shared_ptr<const rsubft::BftPropose> propose;
};
struct BftEchoMsg {
    rsubft::BftEcho echo;
};
struct BftConfirmMsg {
    std::shared_ptr<const rsubft::BftConfirm> confirm;
};
struct StatementMsg {
    std::shared_ptr<const rsubft::AggregatedStatement> stmt;
};
struct ApprovalReqMsg {
    ledger::IntroductionTx draft;
};
struct ApprovalRespMsg {
    std::vector<std::uint8_t> subject;
    ledger::Approval approval;
};
struct ChainMsg {
    std::shared_ptr<const std::vector<ledger::GlobalBlock>> chain;
};

using Message =
    std::variant<BeaconMsg, ReportMsg, RevVoteMsg, ClusterProposeMsg, ClusterEndorseMsg,
                 ClusterCommitMsg, BlockSubmitMsg, BftProposeMsg, BftEchoMsg, BftConfirmMsg,
                 StatementMsg, ApprovalReqMsg, ApprovalRespMsg, ChainMsg>;

struct Envelope {
    sim::NodeId from;
    Message msg;
};

struct VehicleNode {
    sim::NodeId id;
    std::uint32_t region = 0;
    scms::LtId lt;
    std::vector<scms::PseudonymWithKey> pool;
    vehicle::KinematicState kin;
    vehicle::BeaconHistory history;
    const adversary::AttackProfile* attack = nullptr;

    // cluster membership (assigned at formation)
    std::uint64_t cluster_id = 0;
    std::vector<scms::PseudonymId> cluster_members;
    std::map<scms::PseudonymId, scms::PseudonymCert> member_certs;
    scms::PseudonymId cluster_head;
    std::vector<scms::PseudonymId> my_identities; // 1, or 2 for sybil in overlap
    std::uint64_t next_height = 0;
    Hash256 prev_hash;
    std::set<std::uint64_t> endorsed_heights;

    // head role
    std::map<Hash256, std::shared_ptr<const vehicle::MisbehaviorReport>> pending_reports;
    std::map<scms::PseudonymId, std::set<scms::PseudonymId>> pending_votes;
    std::optional<cluster::ClusterBlock> current_candidate;
    Hash256 current_candidate_hash;
    std::map<scms::PseudonymId, cluster::Endorsement> collected;
    std::vector<std::shared_ptr<const cluster::ClusterBlock>> rsu_buffer;

    // report bookkeeping
    std::map<Hash256, std::pair<std::shared_ptr<const vehicle::MisbehaviorReport>, int>>
        unacked_reports; // hash -> (report, resend budget)
    std::set<scms::PseudonymId> voted_suspects;
    std::set<scms::PseudonymId> bad_mouthed; // victim pseudonyms already accused

    std::vector<Envelope> inbox;

    // stats
    std::uint64_t beacons_emitted = 0;
    std::uint64_t covered_ticks = 0; // ticks with a usable pseudonym
    std::uint64_t edr_bytes = 0;
    std::optional<sim::Tick> first_false_beacon;
};

struct RsuNode {
    sim::NodeId id;
    std::uint32_t region = 0;
    sim::Position pos;
    KeyPair key;
    rsubft::BftMember engine;
    adversary::Strategy byz = adversary::Strategy::none;

    std::map<std::uint64_t, std::pair<std::uint64_t, Hash256>> cluster_tip; // next height, hash
    std::set<Hash256> seen_blocks;
    std::vector<Envelope> inbox;
};

struct MaNode {
    sim::NodeId id;
    std::uint32_t region = 0;
    KeyPair key;
    std::vector<ledger::GlobalBlock> chain;
    std::map<Hash256, ledger::Transaction> mempool;
    std::map<Hash256, std::shared_ptr<const rsubft::AggregatedStatement>> pending_statements;
    std::set<Hash256> seen_statements;
    std::map<std::vector<std::uint8_t>, ledger::IntroductionTx> pending_intros; // by subject
    std::set<Hash256> applied_blocks;
    sim::Tick next_mine = 0;
    std::vector<Envelope> inbox;
};

struct SimulationResult {
    RunMetrics metrics;
    std::vector<ledger::GlobalBlock> chain; // best chain at run end
    ledger::GenesisConfig genesis;
};

// One scenario instance: owns the event loop, the SCMS regions and every
// node; shares nothing, so instances can run in parallel threads.
class Simulation {
  public:
    explicit Simulation(const ScenarioConfig& cfg, std::ostream* event_log = nullptr);

    SimulationResult run();

    // single-step access for tests
    void step(sim::Tick t);
    const std::vector<VehicleNode>& vehicles() const { return vehicles_; }
    const std::vector<RsuNode>& rsus() const { return rsus_; }
    const std::vector<MaNode>& mas() const { return mas_; }
    std::vector<scms::ScmsService*> region_services();
    const ledger::GenesisConfig& genesis() const { return genesis_; }
    const vehicle::VerifyContext& verify_context() const { return vctx_; }
    const RunMetrics& metrics() const { return metrics_; }
    scms::LtId lt_of_vehicle(std::uint32_t index) const { return vehicles_[index].lt; }

    // oracle: endorsements per long-term id in a committed block (Sybil bound)
    std::map<scms::LtId, std::size_t> endorsements_per_lt(const cluster::ClusterBlock& b) const;

    const std::vector<cluster::ClusterBlock>& committed_cluster_blocks() const {
        return committed_blocks_log_;
    }

  private:
    void setup();
    void bootstrap_introductions();
    void do_recluster(sim::Tick t);
    void vehicle_phase(sim::Tick t);
    void process_vehicle_inbox(VehicleNode& v, sim::Tick t);
    void cluster_epoch_phase(sim::Tick t);
    void emit_beacons(sim::Tick t);
    void rsu_phase(sim::Tick t);
    void ma_phase(sim::Tick t);
    void sample_metrics(sim::Tick t);

    void head_try_commit(VehicleNode& v, sim::Tick t);
    void handle_committed_cluster_block(VehicleNode& v,
                                        const std::shared_ptr<const cluster::ClusterBlock>& block,
                                        sim::Tick t);
    void rsu_handle_block(RsuNode& r, const std::shared_ptr<const cluster::ClusterBlock>& block,
                          sim::Tick t);
    void rsu_drain_committed(RsuNode& r, sim::Tick t);
    void ma_adopt_chain(MaNode& ma, const std::vector<ledger::GlobalBlock>& chain, sim::Tick t);
    void ma_apply_new_blocks(MaNode& ma, sim::Tick t);
    void ma_try_build_txs(MaNode& ma, sim::Tick t);
    void ma_mine(MaNode& ma, sim::Tick t);

    // messaging
    void deliver_at(sim::Tick at, sim::NodeId to, Envelope env);
    void radio_broadcast_vehicles(const VehicleNode& from, const Message& msg, sim::Tick t);
    void send_to_rsu(sim::NodeId rsu, Envelope env, sim::Tick t);
    void send_to_ma(sim::NodeId ma, Envelope env, sim::Tick t);
    void send_to_group(const RsuNode& from, const Message& msg, sim::Tick t);

    bool pseudonym_revoked(scms::PseudonymId p) const;
    bool pseudonym_revoked_at(scms::PseudonymId p, sim::Tick t) const;
    bool report_settled_by(const cluster::ClusterBlock& block,
                           const vehicle::MisbehaviorReport& r) const;
    std::vector<scms::PseudonymWithKey> active_creds(const VehicleNode& v, sim::Tick t) const;
    const scms::PseudonymWithKey* selected_cred(const VehicleNode& v, sim::Tick t) const;
    bool sybil_active(const VehicleNode& v, sim::Tick t) const;

    void log_event(sim::Tick t, sim::NodeId node, const std::string& ev,
                   const std::string& detail);

    ScenarioConfig cfg_;
    std::ostream* event_log_;
    RngHub rng_;
    sim::EventLoop loop_;
    sim::RadioModel radio_;
    vehicle::MobilityParams mobility_;
    vehicle::VerifyContext vctx_;
    ledger::GenesisConfig genesis_;

    std::vector<std::unique_ptr<scms::ScmsService>> regions_;
    std::vector<VehicleNode> vehicles_;
    std::vector<RsuNode> rsus_;
    std::vector<MaNode> mas_;
    std::vector<rsubft::RsuGroup> groups_;
    std::map<sim::NodeId, PublicKey> rsu_keys_;
    std::map<sim::NodeId, sim::Position> rsu_positions_;

    bool recluster_needed_ = false;
    std::map<Hash256, bool> report_verify_memo_;
    std::set<Hash256> committed_report_hashes_;
    std::set<Hash256> aggregated_report_hashes_;
    std::set<std::pair<std::uint64_t, std::uint64_t>> bft_proposed_;
    std::set<std::pair<std::uint64_t, std::uint64_t>> bft_committed_;
    std::map<std::uint32_t, std::size_t> attacker_index_; // vehicle -> metrics slot
    std::vector<cluster::ClusterBlock> committed_blocks_log_;
    std::map<scms::PseudonymId, scms::LtId> pseudonym_owner_oracle_; // ground truth
    RunMetrics metrics_;

    bool report_verifies(const vehicle::MisbehaviorReport& r);
};

} // namespace blackchain::harness
