#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "blackchain/rsubft/statement.hpp"

namespace blackchain::rsubft {

struct BftPropose {
    std::uint64_t group_id = 0;
    std::uint64_t height = 0;
    AggregatedStatement stmt; // cert empty
    std::vector<cluster::ClusterBlock> blocks;
};

struct BftEcho {
    std::uint64_t group_id = 0;
    std::uint64_t height = 0;
    Hash256 stmt_hash;
    sim::NodeId from;
    Signature sig;
};

struct BftConfirm {
    std::uint64_t group_id = 0;
    std::uint64_t height = 0;
    AggregatedStatement stmt; // cert populated
};

// One RSU's view of its group's statement consensus. Rotating-leader,
// three-phase (propose / echo / confirm), no view change: heights are bound
// to round slots by the caller, an undecided round just carries its blocks
// to the next height. A member echoes at most one statement hash per
// height, which is what quorum intersection needs for safety.
class BftMember {
  public:
    BftMember() = default;
    BftMember(sim::NodeId self, KeyPair key, RsuGroup group,
              std::map<sim::NodeId, PublicKey> rsu_keys)
        : self_(self), key_(key), group_(std::move(group)), rsu_keys_(std::move(rsu_keys)) {}

    const RsuGroup& group() const { return group_; }
    sim::NodeId self() const { return self_; }

    // Caller validated the block already; keeps it until some committed
    // statement includes it.
    void add_block(const cluster::ClusterBlock& block);
    std::size_t pool_size() const { return pool_.size(); }
    std::vector<cluster::ClusterBlock> pool_blocks() const {
        std::vector<cluster::ClusterBlock> out;
        out.reserve(pool_.size());
        for (const auto& [h, b] : pool_) out.push_back(b);
        return out;
    }

    bool is_leader(std::uint64_t height) const { return group_.leader_at(height) == self_; }

    // Leader path: propose the aggregate of everything pending.
    std::optional<BftPropose> start_round(std::uint64_t height);

    // Member path: validate the carried blocks, recompute the aggregate and
    // echo its hash if everything checks out and we have not echoed at this
    // height yet.
    std::optional<BftEcho> on_propose(const BftPropose& msg, const vehicle::VerifyContext& ctx,
                                      const RevokedAtFn& revoked_at);

    // Collect an echo; returns a confirm when this member just assembled a
    // quorum certificate.
    std::optional<BftConfirm> on_echo(const BftEcho& msg);

    // Adopt a quorum-certified statement received from a peer.
    bool on_confirm(const BftConfirm& msg);

    bool committed_at(std::uint64_t height) const { return committed_.count(height) > 0; }
    const AggregatedStatement* committed_statement(std::uint64_t height) const;

    // Statements committed since the last drain, for reporting to the MAs.
    std::vector<AggregatedStatement> take_newly_committed();

  private:
    std::optional<BftConfirm> try_assemble(std::uint64_t height);
    void commit(const AggregatedStatement& stmt);

    sim::NodeId self_;
    KeyPair key_;
    RsuGroup group_;
    std::map<sim::NodeId, PublicKey> rsu_keys_;

    std::map<Hash256, cluster::ClusterBlock> pool_;
    std::map<Hash256, bool> block_valid_memo_;

    std::set<std::uint64_t> echoed_;
    std::map<std::uint64_t, std::map<Hash256, AggregatedStatement>> proposals_;
    std::map<std::uint64_t, std::map<Hash256, std::map<sim::NodeId, Signature>>> echoes_;
    std::map<std::uint64_t, AggregatedStatement> committed_;
    std::vector<AggregatedStatement> newly_committed_;
};

} // namespace blackchain::rsubft
