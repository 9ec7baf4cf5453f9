#include "blackchain/rsubft/engine.hpp"

#include <algorithm>

namespace blackchain::rsubft {

void BftMember::add_block(const cluster::ClusterBlock& block) {
    pool_.emplace(block.candidate_hash(), block);
}

std::optional<BftPropose> BftMember::start_round(std::uint64_t height) {
    if (!is_leader(height)) return std::nullopt;
    if (pool_.empty()) return std::nullopt;
    if (committed_.count(height) > 0) return std::nullopt;

    BftPropose p;
    p.group_id = group_.group_id;
    p.height = height;
    for (const auto& [h, b] : pool_) p.blocks.push_back(b);
    p.stmt = aggregate(group_.group_id, height, p.blocks);

    // leader echoes its own proposal
    BftEcho self_echo;
    self_echo.group_id = group_.group_id;
    self_echo.height = height;
    self_echo.stmt_hash = p.stmt.statement_hash();
    self_echo.from = self_;
    self_echo.sig = sign_statement(key_, self_echo.stmt_hash);
    proposals_[height].emplace(self_echo.stmt_hash, p.stmt);
    echoed_.insert(height);
    echoes_[height][self_echo.stmt_hash][self_] = self_echo.sig;
    try_assemble(height); // f = 0 groups reach quorum on the self-echo alone

    return p;
}

std::optional<BftEcho> BftMember::on_propose(const BftPropose& msg,
                                             const vehicle::VerifyContext& ctx,
                                             const RevokedAtFn& revoked_at) {
    if (msg.group_id != group_.group_id) return std::nullopt;
    if (msg.blocks.empty()) return std::nullopt;

    // full independent re-validation of every carried block
    for (const auto& b : msg.blocks) {
        const Hash256 h = b.candidate_hash();
        auto memo = block_valid_memo_.find(h);
        bool ok;
        if (memo != block_valid_memo_.end()) {
            ok = memo->second;
        } else {
            ok = validate_cluster_block(b, ctx, revoked_at, std::nullopt).ok;
            block_valid_memo_.emplace(h, ok);
        }
        if (!ok) return std::nullopt;
    }

    // the statement must be exactly the aggregate of the carried blocks
    AggregatedStatement derived = aggregate(msg.group_id, msg.height, msg.blocks);
    const Hash256 derived_hash = derived.statement_hash();
    if (derived_hash != msg.stmt.statement_hash()) return std::nullopt;

    proposals_[msg.height].emplace(derived_hash, derived);

    std::optional<BftEcho> out;
    if (echoed_.count(msg.height) == 0) {
        echoed_.insert(msg.height);
        BftEcho e;
        e.group_id = group_.group_id;
        e.height = msg.height;
        e.stmt_hash = derived_hash;
        e.from = self_;
        e.sig = sign_statement(key_, e.stmt_hash);
        echoes_[msg.height][derived_hash][self_] = e.sig;
        out = e;
    }
    return out;
}

std::optional<BftConfirm> BftMember::on_echo(const BftEcho& msg) {
    if (msg.group_id != group_.group_id) return std::nullopt;
    if (!group_.contains(msg.from)) return std::nullopt;
    auto key = rsu_keys_.find(msg.from);
    if (key == rsu_keys_.end()) return std::nullopt;
    if (!schnorr::verify(key->second, SigDomain::rsu_echo, msg.stmt_hash.bytes.data(),
                         msg.stmt_hash.bytes.size(), msg.sig))
        return std::nullopt;

    echoes_[msg.height][msg.stmt_hash][msg.from] = msg.sig;
    return try_assemble(msg.height);
}

std::optional<BftConfirm> BftMember::try_assemble(std::uint64_t height) {
    if (committed_.count(height) > 0) return std::nullopt;
    auto he = echoes_.find(height);
    auto hp = proposals_.find(height);
    if (he == echoes_.end() || hp == proposals_.end()) return std::nullopt;

    for (const auto& [stmt_hash, sigs] : he->second) {
        if (sigs.size() < group_.quorum()) continue;
        auto prop = hp->second.find(stmt_hash);
        if (prop == hp->second.end()) continue; // no content to certify

        AggregatedStatement stmt = prop->second;
        for (const auto& [id, sig] : sigs) stmt.cert.sigs.emplace_back(id, sig);
        commit(stmt);

        BftConfirm c;
        c.group_id = group_.group_id;
        c.height = height;
        c.stmt = std::move(stmt);
        return c;
    }
    return std::nullopt;
}

bool BftMember::on_confirm(const BftConfirm& msg) {
    if (msg.group_id != group_.group_id) return false;
    if (committed_.count(msg.height) > 0) return false;
    if (!verify_quorum_cert(msg.stmt, group_, rsu_keys_)) return false;
    commit(msg.stmt);
    return true;
}

void BftMember::commit(const AggregatedStatement& stmt) {
    committed_.emplace(stmt.height, stmt);
    newly_committed_.push_back(stmt);
    for (const auto& h : stmt.included_blocks) pool_.erase(h);
}

const AggregatedStatement* BftMember::committed_statement(std::uint64_t height) const {
    auto it = committed_.find(height);
    return it == committed_.end() ? nullptr : &it->second;
}

std::vector<AggregatedStatement> BftMember::take_newly_committed() {
    std::vector<AggregatedStatement> out;
    out.swap(newly_committed_);
    return out;
}

} // namespace blackchain::rsubft
