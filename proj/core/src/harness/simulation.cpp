#include "blackchain/harness/simulation.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <numbers>

#include "blackchain/cluster/cluster.hpp"
#include "blackchain/sha256.hpp"

namespace blackchain::harness {

namespace {

std::vector<std::uint8_t> rev_vote_bytes(scms::PseudonymId suspect, std::uint64_t cluster_id) {
    ByteWriter w;
    w.u64(suspect.value);
    w.u64(cluster_id);
    return w.take();
}

bool vehicle_strategy(adversary::Strategy s) {
    return s == adversary::Strategy::false_position || s == adversary::Strategy::bad_mouth ||
           s == adversary::Strategy::sybil_vote;
}

} // namespace

// A report is settled by a block when each of its suspects either already
// stands revoked or carries a positive local revocation decision in that
// block. Unsettled reports stay pending so later blocks pair them with a
// fuller vote tally; the revocation candidate needs both in one statement.
bool Simulation::report_settled_by(const cluster::ClusterBlock& block,
                                   const vehicle::MisbehaviorReport& r) const {
    for (const auto& suspect : r.suspects) {
        if (pseudonym_revoked(suspect)) continue;
        if (!cluster::local_revocation_decision(block, suspect)) return false;
    }
    return true;
}

Simulation::Simulation(const ScenarioConfig& cfg, std::ostream* event_log)
    : cfg_(cfg), event_log_(event_log), rng_(cfg.seed) {
    setup();
}

std::vector<scms::ScmsService*> Simulation::region_services() {
    std::vector<scms::ScmsService*> out;
    out.reserve(regions_.size());
    for (auto& r : regions_) out.push_back(r.get());
    return out;
}

void Simulation::log_event(sim::Tick t, sim::NodeId node, const std::string& ev,
                           const std::string& detail) {
    if (!event_log_) return;
    (*event_log_) << "tick=" << t << " node=" << sim::to_string(node) << " event=" << ev;
    if (!detail.empty()) (*event_log_) << ' ' << detail;
    (*event_log_) << '\n';
}

void Simulation::setup() {
    radio_.range_m = cfg_.radio_range_m;
    mobility_.v_max = cfg_.v_max_mps;
    mobility_.world_w = cfg_.world_m;
    mobility_.world_h = cfg_.world_m;

    metrics_.seed = cfg_.seed;
    metrics_.ticks = cfg_.ticks;

    for (std::uint32_t r = 0; r < cfg_.regions; r++) {
        regions_.push_back(
            std::make_unique<scms::ScmsService>(r, rng_.stream("scms/" + std::to_string(r))));
        vctx_.anchors.pca_keys[r] = regions_.back()->pca_key();
    }
    vctx_.det.v_max = cfg_.v_max_mps;
    vctx_.det.tol = cfg_.detect_tol;
    vctx_.det.jump_slack = cfg_.jump_slack_m;

    // vehicles: enroll + full-run pseudonym pools
    Rng& place = rng_.stream("placement");
    vehicles_.resize(cfg_.vehicles);
    for (std::uint32_t i = 0; i < cfg_.vehicles; i++) {
        VehicleNode& v = vehicles_[i];
        v.id = sim::vehicle_id(i);
        v.region = i % cfg_.regions;
        auto cert = regions_[v.region]->enroll(v.id);
        v.lt = cert.lt_id;
        auto issued = regions_[v.region]->issue_pseudonyms(
            v.lt, 0, cfg_.ticks + cfg_.pseudonym_window_ticks, cfg_.pseudonym_window_ticks,
            cfg_.pseudonym_overlap_ticks);
        assert(issued.ok());
        v.pool = std::move(issued.issued);
        for (const auto& cred : v.pool) pseudonym_owner_oracle_[cred.cert.p_id] = v.lt;

        v.kin.pos.x = place.uniform(0, cfg_.world_m);
        v.kin.pos.y = place.uniform(0, cfg_.world_m);
        v.kin.speed = place.uniform(5.0, std::min(20.0, cfg_.v_max_mps));
        v.kin.heading = place.uniform(0, 2.0 * std::numbers::pi);
    }

    // attacker wiring
    for (const auto& profile : cfg_.attacks) {
        if (!vehicle_strategy(profile.strategy)) continue;
        for (auto target : profile.targets) {
            if (target < vehicles_.size() && vehicles_[target].attack == nullptr) {
                vehicles_[target].attack = &profile;
                attacker_index_[target] = metrics_.attackers.size();
                AttackerOutcome outcome;
                outcome.vehicle_index = target;
                metrics_.attackers.push_back(outcome);
            }
        }
    }

    // RSUs, groups, engines
    std::map<sim::NodeId, sim::Position> rsu_positions;
    for (std::uint32_t i = 0; i < cfg_.rsu_positions.size(); i++) {
        RsuNode r;
        r.id = sim::rsu_id(i);
        r.region = i % cfg_.regions;
        r.pos = cfg_.rsu_positions[i];
        r.key = schnorr::keypair_from_seed(rng_.stream("keys/rsu/" + std::to_string(i)).next_u64());
        rsu_positions[r.id] = r.pos;
        rsu_keys_[r.id] = r.key.pk;
        rsus_.push_back(std::move(r));
    }
    for (const auto& profile : cfg_.attacks) {
        if (profile.strategy != adversary::Strategy::byz_rsu_silent &&
            profile.strategy != adversary::Strategy::byz_rsu_equivocate)
            continue;
        for (auto target : profile.targets) {
            if (target < rsus_.size()) rsus_[target].byz = profile.strategy;
        }
    }
    rsu_positions_ = rsu_positions;
    groups_ = rsubft::group_rsus(rsu_positions, cfg_.rsu_cell_m);
    for (const auto& g : groups_) {
        if (g.degenerate()) metrics_.degenerate_groups++;
        for (const auto& member : g.members) {
            auto& node = rsus_[member.index];
            node.engine = rsubft::BftMember(member, node.key, g, rsu_keys_);
        }
    }

    // MAs: one per region; they are the genesis participants
    for (std::uint32_t r = 0; r < cfg_.regions; r++) {
        MaNode ma;
        ma.id = sim::ma_id(r);
        ma.region = r;
        ma.key = schnorr::keypair_from_seed(rng_.stream("keys/ma/" + std::to_string(r)).next_u64());
        ma.next_mine = 1 + rng_.stream("mining/" + std::to_string(r))
                               .next_below(cfg_.ma_mine_interval_ticks);
        mas_.push_back(std::move(ma));
    }

    genesis_.difficulty_bits = cfg_.pow_difficulty_bits;
    for (const auto& ma : mas_) genesis_.genesis_participants.push_back(ma.key.pk);
    genesis_.anchors = vctx_.anchors;
    genesis_.det = vctx_.det;
    for (const auto& r : rsus_) genesis_.rsu_registry[r.id] = {r.key.pk, r.pos};
    genesis_.rsu_cell_m = cfg_.rsu_cell_m;
}

// ---------------------------------------------------------------------------
// messaging

void Simulation::deliver_at(sim::Tick at, sim::NodeId to, Envelope env) {
    loop_.schedule(at, [this, to, env = std::move(env)]() mutable {
        switch (to.kind) {
            case sim::NodeKind::vehicle: vehicles_[to.index].inbox.push_back(std::move(env)); break;
            case sim::NodeKind::rsu: rsus_[to.index].inbox.push_back(std::move(env)); break;
            case sim::NodeKind::ma: mas_[to.index].inbox.push_back(std::move(env)); break;
        }
    });
}

void Simulation::radio_broadcast_vehicles(const VehicleNode& from, const Message& msg,
                                          sim::Tick t) {
    for (const auto& v : vehicles_) {
        if (v.id == from.id) continue;
        if (sim::distance(from.kin.pos, v.kin.pos) <= radio_.range_m)
            deliver_at(t + 1, v.id, Envelope{from.id, msg});
    }
}

void Simulation::send_to_rsu(sim::NodeId rsu, Envelope env, sim::Tick t) {
    deliver_at(t + 1, rsu, std::move(env)); // radio hop, next tick
}

void Simulation::send_to_ma(sim::NodeId ma, Envelope env, sim::Tick t) {
    deliver_at(t + cfg_.rsu_link_delay_ticks, ma, std::move(env));
}

void Simulation::send_to_group(const RsuNode& from, const Message& msg, sim::Tick t) {
    for (const auto& member : from.engine.group().members) {
        if (member == from.id) continue;
        deliver_at(t + cfg_.rsu_link_delay_ticks, member, Envelope{from.id, msg});
    }
}

// ---------------------------------------------------------------------------
// credentials

bool Simulation::pseudonym_revoked(scms::PseudonymId p) const {
    for (const auto& r : regions_) {
        if (r->is_revoked_pseudonym(p)) return true;
    }
    return false;
}

bool Simulation::pseudonym_revoked_at(scms::PseudonymId p, sim::Tick t) const {
    for (const auto& r : regions_) {
        auto since = r->revoked_since(p);
        if (since && *since <= t) return true;
    }
    return false;
}

std::vector<scms::PseudonymWithKey> Simulation::active_creds(const VehicleNode& v,
                                                             sim::Tick t) const {
    std::vector<scms::PseudonymWithKey> out;
    for (const auto& cred : v.pool) {
        if (cred.cert.valid_at(t) && !pseudonym_revoked(cred.cert.p_id)) out.push_back(cred);
    }
    return out;
}

const scms::PseudonymWithKey* Simulation::selected_cred(const VehicleNode& v, sim::Tick t) const {
    // the active pseudonym with the latest valid_from; switches once per window
    const scms::PseudonymWithKey* best = nullptr;
    for (const auto& cred : v.pool) {
        if (!cred.cert.valid_at(t) || pseudonym_revoked(cred.cert.p_id)) continue;
        if (!best || cred.cert.valid_from > best->cert.valid_from) best = &cred;
    }
    return best;
}

bool Simulation::sybil_active(const VehicleNode& v, sim::Tick t) const {
    return v.attack && v.attack->strategy == adversary::Strategy::sybil_vote &&
           v.attack->active_at(t);
}

bool Simulation::report_verifies(const vehicle::MisbehaviorReport& r) {
    const Hash256 h = r.hash();
    auto it = report_verify_memo_.find(h);
    if (it != report_verify_memo_.end()) return it->second;
    bool ok = vehicle::verify_report(r, vctx_).ok;
    report_verify_memo_.emplace(h, ok);
    return ok;
}

// ---------------------------------------------------------------------------
// clustering

void Simulation::do_recluster(sim::Tick t) {
    std::map<scms::PseudonymId, sim::Position> positions;
    std::map<scms::PseudonymId, std::uint32_t> owner;
    std::map<scms::PseudonymId, scms::PseudonymCert> certs;

    for (std::uint32_t i = 0; i < vehicles_.size(); i++) {
        VehicleNode& v = vehicles_[i];
        auto creds = active_creds(v, t);
        if (creds.empty()) continue;
        if (sybil_active(v, t)) {
            for (const auto& c : creds) {
                positions[c.cert.p_id] = v.kin.pos;
                owner[c.cert.p_id] = i;
                certs[c.cert.p_id] = c.cert;
            }
        } else {
            const auto* sel = selected_cred(v, t);
            positions[sel->cert.p_id] = v.kin.pos;
            owner[sel->cert.p_id] = i;
            certs[sel->cert.p_id] = sel->cert;
        }
    }

    for (auto& v : vehicles_) {
        v.cluster_id = 0;
        v.cluster_members.clear();
        v.member_certs.clear();
        v.cluster_head = scms::PseudonymId{};
        v.my_identities.clear();
        v.next_height = 0;
        v.prev_hash = Hash256{};
        v.endorsed_heights.clear();
        v.pending_reports.clear();
        v.pending_votes.clear();
        v.current_candidate.reset();
        v.collected.clear();
        v.voted_suspects.clear();
        // rsu_buffer and unacked_reports survive re-clustering
    }

    auto clusters = cluster::form_clusters(positions, radio_, t);
    for (const auto& c : clusters) {
        for (const auto& p : c.members) {
            VehicleNode& v = vehicles_[owner[p]];
            if (v.cluster_id == 0) {
                v.cluster_id = c.cluster_id;
                v.cluster_members = c.members;
                v.cluster_head = c.head;
                for (const auto& m : c.members) v.member_certs[m] = certs[m];
            }
            v.my_identities.push_back(p);
        }
        log_event(t, sim::vehicle_id(owner[c.head]), "cluster_formed",
                  "cluster=" + std::to_string(c.cluster_id) +
                      " members=" + std::to_string(c.members.size()));
    }

    // reports not yet seen in a committed block get another try in the new cluster
    for (auto& v : vehicles_) {
        if (v.cluster_id == 0) continue;
        for (auto& [h, entry] : v.unacked_reports) {
            if (entry.second <= 0) continue;
            entry.second--;
            radio_broadcast_vehicles(v, ReportMsg{entry.first}, t);
        }
    }
    recluster_needed_ = false;
}

// ---------------------------------------------------------------------------
// vehicle behavior

void Simulation::vehicle_phase(sim::Tick) {
    for (std::uint32_t i = 0; i < vehicles_.size(); i++) {
        VehicleNode& v = vehicles_[i];
        v.kin = vehicle::step_mobility(v.kin, 1, rng_.stream("mobility/" + std::to_string(i)),
                                       mobility_);
    }
}

void Simulation::process_vehicle_inbox(VehicleNode& v, sim::Tick t) {
    std::vector<Envelope> batch;
    batch.swap(v.inbox);
    for (auto& env : batch) {
        if (auto* bm = std::get_if<BeaconMsg>(&env.msg)) {
            const SharedBeacon& sb = *bm->beacon;
            if (!sb.valid) continue; // invalid signatures are silently dropped
            const vehicle::Beacon& b = sb.beacon;
            metrics_.beacons_delivered++;
            v.edr_bytes += sb.encoded_size;

            auto det = vehicle::detect_misbehavior(v.history, b, vctx_.det);
            if (det) {
                metrics_.detections_fired++;
                const auto* cred = selected_cred(v, t);
                if (cred) {
                    auto built = vehicle::build_report({det->statement}, det->evidence, *cred,
                                                       v.cluster_id, t);
                    if (built.ok()) {
                        auto rp = std::make_shared<const vehicle::MisbehaviorReport>(
                            std::move(*built.report));
                        metrics_.reports_generated++;
                        const Hash256 rh = rp->hash();
                        v.unacked_reports.emplace(rh, std::make_pair(rp, 50));
                        radio_broadcast_vehicles(v, ReportMsg{rp}, t);
                        log_event(t, v.id, "detect",
                                  std::string("check=") + vehicle::check_name(det->statement.check) +
                                      " suspect=" + std::to_string(det->statement.suspect.value));
                        // vote to locally revoke the suspect
                        if (v.cluster_id != 0 &&
                            v.voted_suspects.insert(det->statement.suspect).second) {
                            for (const auto& c : v.pool) {
                                bool mine = false;
                                for (const auto& p : v.my_identities) mine |= (c.cert.p_id == p);
                                if (!mine) continue;
                                RevVoteMsg vote;
                                vote.suspect = det->statement.suspect;
                                vote.cluster_id = v.cluster_id;
                                vote.voter = c.cert;
                                vote.sig =
                                    schnorr::sign(c.sk, c.cert.pk, SigDomain::revocation_vote,
                                                  rev_vote_bytes(vote.suspect, vote.cluster_id));
                                radio_broadcast_vehicles(v, vote, t);
                            }
                        }
                    }
                }
            }

            // bad-mouthing: fabricate an accusation over the victim's
            // genuine beacons
            if (v.attack && v.attack->strategy == adversary::Strategy::bad_mouth &&
                v.attack->active_at(t)) {
                auto owner = pseudonym_owner_oracle_.find(b.p_id());
                if (owner != pseudonym_owner_oracle_.end() &&
                    owner->second == vehicles_[v.attack->victim].lt &&
                    v.bad_mouthed.count(b.p_id()) == 0) {
                    const vehicle::Beacon* prev = v.history.last_of(b.p_id());
                    const auto* cred = selected_cred(v, t);
                    if (prev && prev->tick < b.tick && cred) {
                        auto rp = std::make_shared<const vehicle::MisbehaviorReport>(
                            adversary::bad_mouth_report(*cred, *prev, b, v.cluster_id, t,
                                                        vctx_.det));
                        metrics_.reports_generated++;
                        v.bad_mouthed.insert(b.p_id());
                        v.unacked_reports.emplace(rp->hash(), std::make_pair(rp, 50));
                        radio_broadcast_vehicles(v, ReportMsg{rp}, t);
                        log_event(t, v.id, "bad_mouth",
                                  "victim=" + std::to_string(b.p_id().value));
                        if (v.cluster_id != 0 && v.voted_suspects.insert(b.p_id()).second) {
                            for (const auto& c : v.pool) {
                                bool mine = false;
                                for (const auto& p : v.my_identities) mine |= (c.cert.p_id == p);
                                if (!mine) continue;
                                RevVoteMsg vote;
                                vote.suspect = b.p_id();
                                vote.cluster_id = v.cluster_id;
                                vote.voter = c.cert;
                                vote.sig =
                                    schnorr::sign(c.sk, c.cert.pk, SigDomain::revocation_vote,
                                                  rev_vote_bytes(vote.suspect, vote.cluster_id));
                                radio_broadcast_vehicles(v, vote, t);
                            }
                        }
                    }
                }
            }

            v.history.observe(b);
        } else if (auto* rm = std::get_if<ReportMsg>(&env.msg)) {
            const auto& report = *rm->report;
            if (!report_verifies(report)) {
                bool head = v.cluster_id != 0 &&
                            std::find(v.my_identities.begin(), v.my_identities.end(),
                                      v.cluster_head) != v.my_identities.end();
                if (head) {
                    metrics_.reports_excluded++;
                    log_event(t, v.id, "report_excluded",
                              "hash=" + to_hex(report.hash()).substr(0, 12));
                }
                continue;
            }
            if (v.cluster_id == 0) continue;

            bool is_head = std::find(v.my_identities.begin(), v.my_identities.end(),
                                     v.cluster_head) != v.my_identities.end();
            if (is_head) v.pending_reports.emplace(report.hash(), rm->report);

            // verified accusation: vote to locally revoke each suspect
            for (const auto& suspect : report.suspects) {
                bool self = std::find(v.my_identities.begin(), v.my_identities.end(), suspect) !=
                            v.my_identities.end();
                if (self) continue;
                if (!v.voted_suspects.insert(suspect).second) continue;
                for (const auto& c : v.pool) {
                    bool mine = false;
                    for (const auto& p : v.my_identities) mine |= (c.cert.p_id == p);
                    if (!mine) continue;
                    RevVoteMsg vote;
                    vote.suspect = suspect;
                    vote.cluster_id = v.cluster_id;
                    vote.voter = c.cert;
                    vote.sig = schnorr::sign(c.sk, c.cert.pk, SigDomain::revocation_vote,
                                             rev_vote_bytes(vote.suspect, vote.cluster_id));
                    radio_broadcast_vehicles(v, vote, t);
                }
            }
        } else if (auto* vm = std::get_if<RevVoteMsg>(&env.msg)) {
            // only the head tallies
            bool is_head = v.cluster_id != 0 &&
                           std::find(v.my_identities.begin(), v.my_identities.end(),
                                     v.cluster_head) != v.my_identities.end();
            if (!is_head || vm->cluster_id != v.cluster_id) continue;
            if (std::find(v.cluster_members.begin(), v.cluster_members.end(), vm->voter.p_id) ==
                v.cluster_members.end())
                continue;
            if (vm->voter.p_id == vm->suspect) continue; // self-vote discarded
            if (!vctx_.anchors.verify_cert(vm->voter)) continue;
            if (!schnorr::verify(vm->voter.pk, SigDomain::revocation_vote,
                                 rev_vote_bytes(vm->suspect, vm->cluster_id), vm->sig))
                continue;
            v.pending_votes[vm->suspect].insert(vm->voter.p_id);
        } else if (auto* pm = std::get_if<ClusterProposeMsg>(&env.msg)) {
            const auto& cand = pm->candidate;
            if (v.cluster_id == 0 || cand.cluster_id != v.cluster_id) continue;
            if (cand.height != v.next_height || cand.prev_hash != v.prev_hash) continue;
            if (v.endorsed_heights.count(cand.height) > 0) continue;
            // proposer must be the head; its endorsement signs the candidate
            if (pm->head_endorsement.voter.p_id != v.cluster_head) continue;
            const Hash256 ch = cand.candidate_hash();
            if (!cluster::verify_endorsement(pm->head_endorsement, ch)) continue;
            // membership must match this member's view
            if (cand.member_certs.size() != v.cluster_members.size()) continue;
            bool members_match = true;
            for (std::size_t k = 0; k < cand.member_certs.size(); k++) {
                if (cand.member_certs[k].p_id != v.cluster_members[k]) {
                    members_match = false;
                    break;
                }
            }
            if (!members_match) continue;
            // independent re-validation of every report
            bool all_valid = true;
            for (const auto& r : cand.reports) {
                if (!report_verifies(r)) {
                    all_valid = false;
                    break;
                }
            }
            if (!all_valid) continue;
            // tally sanity: voters are members, no self-votes
            bool votes_ok = true;
            for (const auto& tally : cand.revocation_votes) {
                for (const auto& voter : tally.voters) {
                    if (voter == tally.suspect ||
                        std::find(v.cluster_members.begin(), v.cluster_members.end(), voter) ==
                            v.cluster_members.end()) {
                        votes_ok = false;
                        break;
                    }
                }
            }
            if (!votes_ok) continue;

            v.endorsed_heights.insert(cand.height);
            for (const auto& p : v.my_identities) {
                for (const auto& c : v.pool) {
                    if (c.cert.p_id != p) continue;
                    ClusterEndorseMsg em;
                    em.cluster_id = v.cluster_id;
                    em.height = cand.height;
                    em.candidate_hash = ch;
                    em.endorsement.voter = c.cert;
                    em.endorsement.sig = cluster::sign_endorsement(c, ch);
                    radio_broadcast_vehicles(v, em, t);
                }
            }

            // re-validated accusations in the candidate are votes too: a
            // member that never saw the original report broadcast still
            // backs local revocation of its suspects
            for (const auto& r : cand.reports) {
                for (const auto& suspect : r.suspects) {
                    bool self = std::find(v.my_identities.begin(), v.my_identities.end(),
                                          suspect) != v.my_identities.end();
                    if (self) continue;
                    if (!v.voted_suspects.insert(suspect).second) continue;
                    for (const auto& c : v.pool) {
                        bool mine = false;
                        for (const auto& p : v.my_identities) mine |= (c.cert.p_id == p);
                        if (!mine) continue;
                        RevVoteMsg vote;
                        vote.suspect = suspect;
                        vote.cluster_id = v.cluster_id;
                        vote.voter = c.cert;
                        vote.sig = schnorr::sign(c.sk, c.cert.pk, SigDomain::revocation_vote,
                                                 rev_vote_bytes(vote.suspect, vote.cluster_id));
                        radio_broadcast_vehicles(v, vote, t);
                    }
                }
            }
        } else if (auto* em = std::get_if<ClusterEndorseMsg>(&env.msg)) {
            if (!v.current_candidate || em->cluster_id != v.cluster_id) continue;
            if (em->candidate_hash != v.current_candidate_hash ||
                em->height != v.current_candidate->height)
                continue;
            if (std::find(v.cluster_members.begin(), v.cluster_members.end(),
                          em->endorsement.voter.p_id) == v.cluster_members.end())
                continue;
            if (!cluster::verify_endorsement(em->endorsement, v.current_candidate_hash)) continue;
            v.collected.emplace(em->endorsement.voter.p_id, em->endorsement);
            head_try_commit(v, t);
        } else if (auto* cm = std::get_if<ClusterCommitMsg>(&env.msg)) {
            handle_committed_cluster_block(v, cm->block, t);
        }
    }
}

void Simulation::head_try_commit(VehicleNode& v, sim::Tick t) {
    if (!v.current_candidate) return;
    if (v.collected.size() < cluster::quorum_size(v.cluster_members.size())) return;

    cluster::ClusterBlock block = *v.current_candidate;
    for (const auto& [p, e] : v.collected) block.endorsements.push_back(e);

    const Hash256 bh = v.current_candidate_hash;
    const std::uint64_t height = block.height;
    metrics_.cluster_blocks_committed++;
    committed_blocks_log_.push_back(block);
    for (const auto& r : block.reports) {
        committed_report_hashes_.insert(r.hash());
        if (report_settled_by(block, r)) {
            v.unacked_reports.erase(r.hash());
            v.pending_reports.erase(r.hash());
        }
    }
    v.next_height = height + 1;
    v.prev_hash = bh;
    v.current_candidate.reset();
    v.collected.clear();

    auto shared = std::make_shared<const cluster::ClusterBlock>(std::move(block));
    radio_broadcast_vehicles(v, ClusterCommitMsg{shared}, t);
    v.rsu_buffer.push_back(shared);
    log_event(t, v.id, "cluster_commit",
              "cluster=" + std::to_string(v.cluster_id) + " height=" + std::to_string(height) +
                  " reports=" + std::to_string(shared->reports.size()));
}

void Simulation::handle_committed_cluster_block(
    VehicleNode& v, const std::shared_ptr<const cluster::ClusterBlock>& block, sim::Tick t) {
    // a committed block acknowledges the reports it settles
    for (const auto& r : block->reports) {
        if (report_settled_by(*block, r)) v.unacked_reports.erase(r.hash());
    }

    if (v.cluster_id == 0 || block->cluster_id != v.cluster_id) return;
    if (block->height != v.next_height || block->prev_hash != v.prev_hash) return;
    if (!cluster::has_commit_quorum(*block)) return;
    v.next_height = block->height + 1;
    v.prev_hash = block->candidate_hash();
    for (const auto& r : block->reports) {
        if (report_settled_by(*block, r)) v.pending_reports.erase(r.hash());
    }
    (void)t;
}

void Simulation::cluster_epoch_phase(sim::Tick t) {
    const bool epoch_tick = (t % cfg_.cluster_epoch_ticks == 0);
    for (auto& v : vehicles_) {
        if (v.cluster_id == 0) continue;
        bool is_head = std::find(v.my_identities.begin(), v.my_identities.end(), v.cluster_head) !=
                       v.my_identities.end();
        if (!is_head) continue;

        if (epoch_tick) {
            // drop an uncommitted candidate from the previous epoch
            if (v.current_candidate) {
                log_event(t, v.id, "cluster_propose_timeout",
                          "cluster=" + std::to_string(v.cluster_id));
                v.current_candidate.reset();
                v.collected.clear();
            }

            cluster::ClusterBlock cand;
            cand.cluster_id = v.cluster_id;
            cand.height = v.next_height;
            cand.prev_hash = v.prev_hash;
            cand.tick = t;
            for (const auto& [p, cert] : v.member_certs) cand.member_certs.push_back(cert);
            for (const auto& [h, rp] : v.pending_reports) cand.reports.push_back(*rp);
            for (const auto& [suspect, voters] : v.pending_votes) {
                cluster::RevocationTally tally;
                tally.suspect = suspect;
                for (const auto& voter : voters) {
                    if (voter == suspect) continue;
                    if (std::find(v.cluster_members.begin(), v.cluster_members.end(), voter) !=
                        v.cluster_members.end())
                        tally.voters.push_back(voter);
                }
                if (!tally.voters.empty()) cand.revocation_votes.push_back(std::move(tally));
            }

            const Hash256 ch = cand.candidate_hash();
            v.current_candidate = cand;
            v.current_candidate_hash = ch;
            v.collected.clear();
            v.endorsed_heights.insert(cand.height);

            // the head (and its second sybil identity) endorse immediately
            cluster::Endorsement head_endorsement;
            for (const auto& p : v.my_identities) {
                for (const auto& c : v.pool) {
                    if (c.cert.p_id != p) continue;
                    cluster::Endorsement e;
                    e.voter = c.cert;
                    e.sig = cluster::sign_endorsement(c, ch);
                    if (p == v.cluster_head) head_endorsement = e;
                    v.collected.emplace(p, e);
                }
            }

            ClusterProposeMsg pm;
            pm.candidate = std::move(cand);
            pm.head_endorsement = head_endorsement;
            radio_broadcast_vehicles(v, pm, t);
            head_try_commit(v, t); // singleton clusters commit immediately
        }

        // forward committed blocks to the nearest RSU in range; buffered
        // blocks wait for intermittent connectivity, order preserved
        if (!v.rsu_buffer.empty()) {
            auto nearest = cluster::nearest_rsu_in_range(v.kin.pos, rsu_positions_, radio_);
            if (nearest) {
                for (auto& blk : v.rsu_buffer) {
                    send_to_rsu(*nearest, Envelope{v.id, BlockSubmitMsg{blk}}, t);
                    log_event(t, v.id, "block_to_rsu",
                              "rsu=" + sim::to_string(*nearest) +
                                  " cluster=" + std::to_string(blk->cluster_id) +
                                  " height=" + std::to_string(blk->height));
                }
                v.rsu_buffer.clear();
            }
        }
    }
}

void Simulation::emit_beacons(sim::Tick t) {
    for (std::uint32_t i = 0; i < vehicles_.size(); i++) {
        VehicleNode& v = vehicles_[i];
        auto creds = active_creds(v, t);
        if (creds.empty()) continue; // revoked or uncovered: silent
        v.covered_ticks++;

        std::vector<const scms::PseudonymWithKey*> to_emit;
        if (sybil_active(v, t)) {
            for (const auto& c : creds) to_emit.push_back(&c);
        } else {
            to_emit.push_back(selected_cred(v, t));
        }

        for (const auto* cred : to_emit) {
            vehicle::Beacon b;
            bool lied = false;
            if (v.attack && v.attack->strategy == adversary::Strategy::false_position &&
                v.attack->active_at(t)) {
                b = adversary::false_position_beacon(v.kin, v.attack->offset_m, *cred, t);
                lied = true;
            } else {
                b = vehicle::make_beacon(*cred, t, v.kin);
            }
            auto sb = std::make_shared<SharedBeacon>();
            sb->beacon = std::move(b);
            sb->encoded_size = sb->beacon.encoded().size();
            sb->valid = true; // constructed through the signing path
            if (lied && !v.first_false_beacon) {
                v.first_false_beacon = t;
                auto slot = attacker_index_.find(i);
                if (slot != attacker_index_.end())
                    metrics_.attackers[slot->second].first_false_beacon = t;
                log_event(t, v.id, "false_beacon", "offset=" + std::to_string(v.attack->offset_m));
            }

            v.beacons_emitted++;
            metrics_.beacons_sent++;
            v.edr_bytes += sb->encoded_size; // own log
            radio_broadcast_vehicles(v, BeaconMsg{SharedBeaconPtr(sb)}, t);
        }
    }
}

// ---------------------------------------------------------------------------
// RSU behavior

void Simulation::rsu_handle_block(RsuNode& r,
                                  const std::shared_ptr<const cluster::ClusterBlock>& block,
                                  sim::Tick t) {
    const Hash256 h = block->candidate_hash();
    if (r.seen_blocks.count(h) > 0) return;

    std::optional<Hash256> expected;
    auto rec = r.cluster_tip.find(block->cluster_id);
    if (rec != r.cluster_tip.end()) {
        auto [next_height, tip] = rec->second;
        if (block->height == next_height) {
            expected = tip;
        } else if (block->height < next_height) {
            log_event(t, r.id, "block_rejected", "reason=stale_or_conflicting_height");
            return;
        }
        // heights beyond the record mean earlier blocks went to another RSU;
        // the quorum certificate carries the trust, accept on content
    }

    auto revoked_at = [this](scms::PseudonymId p, sim::Tick at) {
        return pseudonym_revoked_at(p, at);
    };
    auto verdict = rsubft::validate_cluster_block(*block, vctx_, revoked_at, expected);
    if (!verdict.ok) {
        log_event(t, r.id, "block_rejected",
                  std::string("reason=") + rsubft::block_fail_name(verdict.reason));
        return;
    }
    r.seen_blocks.insert(h);
    r.cluster_tip[block->cluster_id] = {block->height + 1, h};
    r.engine.add_block(*block);
    log_event(t, r.id, "block_validated", "cluster=" + std::to_string(block->cluster_id) +
                                              " height=" + std::to_string(block->height));
}

void Simulation::rsu_drain_committed(RsuNode& r, sim::Tick t) {
    for (auto& stmt : r.engine.take_newly_committed()) {
        auto key = std::make_pair(stmt.group_id, stmt.height);
        if (bft_committed_.insert(key).second) {
            log_event(t, r.id, "bft_commit",
                      "group=" + std::to_string(stmt.group_id) +
                          " height=" + std::to_string(stmt.height) +
                          " candidates=" + std::to_string(stmt.candidates.size()));
            for (const auto& rep : stmt.evidence_bundle)
                aggregated_report_hashes_.insert(rep.hash());
        }
        auto shared = std::make_shared<const rsubft::AggregatedStatement>(std::move(stmt));
        for (const auto& ma : mas_) {
            if (ma.region == r.region)
                send_to_ma(ma.id, Envelope{r.id, StatementMsg{shared}}, t);
        }
    }
}

void Simulation::rsu_phase(sim::Tick t) {
    auto revoked_at = [this](scms::PseudonymId p, sim::Tick at) {
        return pseudonym_revoked_at(p, at);
    };

    for (auto& r : rsus_) {
        std::vector<Envelope> batch;
        batch.swap(r.inbox);
        for (auto& env : batch) {
            if (auto* bs = std::get_if<BlockSubmitMsg>(&env.msg)) {
                rsu_handle_block(r, bs->block, t);
            } else if (auto* bp = std::get_if<BftProposeMsg>(&env.msg)) {
                if (r.byz == adversary::Strategy::byz_rsu_silent) continue;
                auto echo = r.engine.on_propose(*bp->propose, vctx_, revoked_at);
                if (echo) {
                    send_to_group(r, BftEchoMsg{*echo}, t);
                    if (r.byz == adversary::Strategy::byz_rsu_equivocate) {
                        // also sign a conflicting hash
                        rsubft::BftEcho forged = *echo;
                        forged.stmt_hash = sha256(echo->stmt_hash.bytes.data(), 32);
                        forged.sig = rsubft::sign_statement(r.key, forged.stmt_hash);
                        send_to_group(r, BftEchoMsg{forged}, t);
                    }
                }
            } else if (auto* be = std::get_if<BftEchoMsg>(&env.msg)) {
                if (r.byz == adversary::Strategy::byz_rsu_silent) continue;
                auto confirm = r.engine.on_echo(be->echo);
                if (confirm) {
                    auto shared = std::make_shared<const rsubft::BftConfirm>(std::move(*confirm));
                    send_to_group(r, BftConfirmMsg{shared}, t);
                }
                rsu_drain_committed(r, t);
            } else if (auto* bc = std::get_if<BftConfirmMsg>(&env.msg)) {
                r.engine.on_confirm(*bc->confirm);
                rsu_drain_committed(r, t);
            }
        }
    }

    // round slots: height = slot index; the slot leader proposes its pool
    if (t % cfg_.bft_round_ticks == 0) {
        const std::uint64_t height = t / cfg_.bft_round_ticks;
        for (auto& r : rsus_) {
            if (!r.engine.is_leader(height)) continue;
            if (r.byz == adversary::Strategy::byz_rsu_silent) continue;

            if (r.byz == adversary::Strategy::byz_rsu_equivocate) {
                auto blocks = r.engine.pool_blocks();
                if (blocks.empty()) continue;
                rsubft::BftPropose a;
                a.group_id = r.engine.group().group_id;
                a.height = height;
                a.blocks = blocks;
                a.stmt = rsubft::aggregate(a.group_id, height, blocks);
                rsubft::BftPropose b = a;
                if (b.blocks.size() >= 2) {
                    b.blocks.pop_back();
                    b.stmt = rsubft::aggregate(b.group_id, height, b.blocks);
                } else {
                    b.stmt.included_blocks.push_back(Hash256{}); // junk variant
                }
                bft_proposed_.insert({a.group_id, height});
                metrics_.bft_rounds_proposed++;

                auto pa = std::make_shared<const rsubft::BftPropose>(std::move(a));
                auto pb = std::make_shared<const rsubft::BftPropose>(std::move(b));
                const auto& members = r.engine.group().members;
                bool flip = false;
                for (const auto& m : members) {
                    if (m == r.id) continue;
                    const auto& pick = flip ? pb : pa;
                    deliver_at(t + cfg_.rsu_link_delay_ticks, m,
                               Envelope{r.id, BftProposeMsg{pick}});
                    rsubft::BftEcho e;
                    e.group_id = pick->group_id;
                    e.height = height;
                    e.stmt_hash = pick->stmt.statement_hash();
                    e.from = r.id;
                    e.sig = rsubft::sign_statement(r.key, e.stmt_hash);
                    deliver_at(t + cfg_.rsu_link_delay_ticks, m, Envelope{r.id, BftEchoMsg{e}});
                    flip = !flip;
                }
                log_event(t, r.id, "bft_equivocate", "height=" + std::to_string(height));
                continue;
            }

            auto proposal = r.engine.start_round(height);
            if (!proposal) continue;
            bft_proposed_.insert({proposal->group_id, height});
            metrics_.bft_rounds_proposed++;
            log_event(t, r.id, "bft_propose",
                      "height=" + std::to_string(height) +
                          " blocks=" + std::to_string(proposal->blocks.size()));

            const Hash256 sh = proposal->stmt.statement_hash();
            auto shared = std::make_shared<const rsubft::BftPropose>(std::move(*proposal));
            send_to_group(r, BftProposeMsg{shared}, t);
            // the leader's own echo travels with the proposal
            rsubft::BftEcho e;
            e.group_id = shared->group_id;
            e.height = height;
            e.stmt_hash = sh;
            e.from = r.id;
            e.sig = rsubft::sign_statement(r.key, e.stmt_hash);
            send_to_group(r, BftEchoMsg{e}, t);
            // degenerate (f = 0) groups commit on the self-echo; let the
            // peers adopt the certificate
            if (r.engine.committed_at(height)) {
                const auto* stmt = r.engine.committed_statement(height);
                auto confirm = std::make_shared<const rsubft::BftConfirm>(
                    rsubft::BftConfirm{shared->group_id, height, *stmt});
                send_to_group(r, BftConfirmMsg{confirm}, t);
            }
            rsu_drain_committed(r, t);
        }
    }
}

// ---------------------------------------------------------------------------
// MA behavior

void Simulation::bootstrap_introductions() {
    // the lowest-indexed MA drives the introduction of every RSU; approvals
    // come from all genesis participants
    MaNode& introducer = mas_[0];
    for (const auto& r : rsus_) {
        ledger::IntroductionTx draft;
        draft.kind = ledger::ParticipantKind::rsu;
        draft.subject_id = r.id;
        draft.subject_pk = r.key.pk;
        ledger::Approval self;
        self.approver = introducer.key.pk;
        self.sig = ledger::sign_approval(introducer.key, draft);
        draft.approvals.push_back(self);

        if (draft.approvals.size() >= ledger::introduction_threshold(mas_.size())) {
            introducer.mempool.emplace(ledger::tx_hash(ledger::Transaction{draft}),
                                       ledger::Transaction{draft});
            continue;
        }
        introducer.pending_intros.emplace(draft.subject_bytes(), draft);
        for (const auto& other : mas_) {
            if (other.id == introducer.id) continue;
            deliver_at(1, other.id, Envelope{introducer.id, ApprovalReqMsg{draft}});
        }
    }
}

void Simulation::ma_adopt_chain(MaNode& ma, const std::vector<ledger::GlobalBlock>& chain,
                                sim::Tick t) {
    if (!ledger::chain_preferred(chain, ma.chain, genesis_)) return;
    if (!ledger::verify_chain(chain, genesis_).ok) return;
    ma.chain = chain;
    // prune mempool of transactions already on the adopted chain
    for (const auto& b : ma.chain)
        for (const auto& tx : b.txs) ma.mempool.erase(ledger::tx_hash(tx));
    log_event(t, ma.id, "chain_adopted", "blocks=" + std::to_string(ma.chain.size()));
    ma_apply_new_blocks(ma, t);
}

void Simulation::ma_apply_new_blocks(MaNode& ma, sim::Tick t) {
    auto regions = region_services();
    for (const auto& b : ma.chain) {
        if (ma.applied_blocks.count(b.pow_hash) > 0) continue;
        ma.applied_blocks.insert(b.pow_hash);
        auto outcome = ledger::apply_revocations(b, regions, t);
        for (const auto& lt : outcome.newly_revoked)
            log_event(t, ma.id, "revoked", "lt=" + std::to_string(lt.value));

        // attacker bookkeeping
        for (const auto& tx : b.txs) {
            if (!std::holds_alternative<ledger::RevocationTx>(tx)) continue;
            const auto& rev = std::get<ledger::RevocationTx>(tx);
            for (const auto& suspect : rev.decided) {
                auto owner = pseudonym_owner_oracle_.find(suspect);
                if (owner == pseudonym_owner_oracle_.end()) continue;
                for (auto& [vidx, slot] : attacker_index_) {
                    if (vehicles_[vidx].lt == owner->second &&
                        !metrics_.attackers[slot].revocation_tx_committed)
                        metrics_.attackers[slot].revocation_tx_committed = t;
                }
            }
        }
    }
    // cross-region blacklist completion per attacker
    for (auto& [vidx, slot] : attacker_index_) {
        auto& outcome = metrics_.attackers[slot];
        if (outcome.blacklisted_all_regions) continue;
        bool all = true;
        for (const auto& r : regions_)
            all = all && r->is_blacklisted(vehicles_[vidx].lt);
        if (all) outcome.blacklisted_all_regions = t;
    }
}

void Simulation::ma_try_build_txs(MaNode& ma, sim::Tick t) {
    if (ma.pending_statements.empty()) return;
    auto view = ledger::view_of_chain(ma.chain, genesis_);
    for (auto it = ma.pending_statements.begin(); it != ma.pending_statements.end();) {
        // suspects already dealt with need no second transaction
        bool all_revoked = true;
        for (const auto& cand : it->second->candidates)
            all_revoked = all_revoked && pseudonym_revoked(cand.suspect);
        if (all_revoked) {
            it = ma.pending_statements.erase(it);
            continue;
        }
        auto built = ledger::build_revocation_tx(*it->second, view, genesis_);
        if (built.tx) {
            ledger::Transaction tx{std::move(*built.tx)};
            ma.mempool.emplace(ledger::tx_hash(tx), std::move(tx));
            log_event(t, ma.id, "revocation_tx_built",
                      "statement=" + to_hex(it->first).substr(0, 12));
            it = ma.pending_statements.erase(it);
        } else {
            ++it; // waiting for introductions to land on-chain
        }
    }
}

void Simulation::ma_mine(MaNode& ma, sim::Tick t) {
    if (t < ma.next_mine) return;
    if (ma.mempool.empty() && !cfg_.heartbeat_mining) return;

    auto view = ledger::view_of_chain(ma.chain, genesis_);
    std::vector<ledger::Transaction> valid;
    for (auto it = ma.mempool.begin(); it != ma.mempool.end();) {
        auto tv = ledger::validate_tx(it->second, view, genesis_);
        if (tv.ok) {
            valid.push_back(it->second);
            ++it;
        } else if (tv.reason == ledger::ChainFail::intro_duplicate) {
            it = ma.mempool.erase(it); // already introduced on-chain
        } else {
            ++it; // not yet valid (e.g. signer introduction still pending)
        }
    }
    if (valid.empty() && !cfg_.heartbeat_mining) return;

    Hash256 prev = ma.chain.empty() ? Hash256{} : ma.chain.back().pow_hash;
    auto block =
        ledger::mine_block(std::move(valid), ma.chain.size(), prev, genesis_.difficulty_bits);
    for (const auto& tx : block.txs) ma.mempool.erase(ledger::tx_hash(tx));
    log_event(t, ma.id, "block_mined",
              "height=" + std::to_string(block.height) + " txs=" + std::to_string(block.txs.size()));
    ma.chain.push_back(std::move(block));
    ma_apply_new_blocks(ma, t);

    auto shared = std::make_shared<const std::vector<ledger::GlobalBlock>>(ma.chain);
    for (const auto& other : mas_) {
        if (other.id == ma.id) continue;
        deliver_at(t + cfg_.rsu_link_delay_ticks, other.id, Envelope{ma.id, ChainMsg{shared}});
    }
    ma.next_mine =
        t + 1 + rng_.stream("mining/" + std::to_string(ma.id.index))
                    .next_below(cfg_.ma_mine_interval_ticks);
}

void Simulation::ma_phase(sim::Tick t) {
    if (t == 0) bootstrap_introductions();

    for (auto& ma : mas_) {
        std::vector<Envelope> batch;
        batch.swap(ma.inbox);
        for (auto& env : batch) {
            if (auto* req = std::get_if<ApprovalReqMsg>(&env.msg)) {
                // approve only subjects we can check against the registry
                const auto& draft = req->draft;
                bool known = false;
                if (draft.kind == ledger::ParticipantKind::rsu) {
                    auto it = genesis_.rsu_registry.find(draft.subject_id);
                    known = it != genesis_.rsu_registry.end() &&
                            it->second.first == draft.subject_pk;
                }
                if (!known) continue;
                ApprovalRespMsg resp;
                resp.subject = draft.subject_bytes();
                resp.approval.approver = ma.key.pk;
                resp.approval.sig = ledger::sign_approval(ma.key, draft);
                deliver_at(t + cfg_.rsu_link_delay_ticks, env.from,
                           Envelope{ma.id, std::move(resp)});
            } else if (auto* resp = std::get_if<ApprovalRespMsg>(&env.msg)) {
                auto it = ma.pending_intros.find(resp->subject);
                if (it == ma.pending_intros.end()) continue;
                auto& draft = it->second;
                if (!schnorr::verify(resp->approval.approver, SigDomain::participant_approval,
                                     resp->subject, resp->approval.sig))
                    continue;
                bool dup = false;
                for (const auto& a : draft.approvals)
                    dup = dup || a.approver == resp->approval.approver;
                if (dup) continue;
                draft.approvals.push_back(resp->approval);
                std::sort(draft.approvals.begin(), draft.approvals.end(),
                          [](const auto& a, const auto& b) { return a.approver < b.approver; });
                if (draft.approvals.size() >=
                    ledger::introduction_threshold(genesis_.genesis_participants.size())) {
                    ledger::Transaction tx{draft};
                    ma.mempool.emplace(ledger::tx_hash(tx), std::move(tx));
                    log_event(t, ma.id, "introduction_ready",
                              "subject=" + sim::to_string(draft.subject_id));
                    ma.pending_intros.erase(it);
                }
            } else if (auto* sm = std::get_if<StatementMsg>(&env.msg)) {
                const auto& stmt = *sm->stmt;
                const Hash256 sh = stmt.statement_hash();
                if (!ma.seen_statements.insert(sh).second) continue; // duplicate delivery
                // full verification before anything else
                const rsubft::RsuGroup* group = nullptr;
                for (const auto& g : groups_)
                    if (g.group_id == stmt.group_id) group = &g;
                if (group == nullptr) continue;
                if (!rsubft::verify_quorum_cert(stmt, *group, rsu_keys_)) {
                    log_event(t, ma.id, "statement_rejected", "reason=quorum_cert");
                    continue;
                }
                log_event(t, ma.id, "statement_accepted",
                          "group=" + std::to_string(stmt.group_id) +
                              " height=" + std::to_string(stmt.height) +
                              " candidates=" + std::to_string(stmt.candidates.size()));
                if (!stmt.candidates.empty()) ma.pending_statements.emplace(sh, sm->stmt);
            } else if (auto* cm = std::get_if<ChainMsg>(&env.msg)) {
                ma_adopt_chain(ma, *cm->chain, t);
            }
        }

        ma_try_build_txs(ma, t);
        ma_mine(ma, t);
    }
}

// ---------------------------------------------------------------------------

void Simulation::sample_metrics(sim::Tick t) {
    for (auto& v : vehicles_) {
        auto active = regions_[v.region]->active_pseudonyms(v.lt, t);
        std::uint32_t live = 0;
        for (const auto& cert : active)
            if (!pseudonym_revoked(cert.p_id)) live++;
        if (static_cast<std::uint32_t>(active.size()) > metrics_.max_active_pseudonyms)
            metrics_.max_active_pseudonyms = static_cast<std::uint32_t>(active.size());

        // membership changes require re-clustering: a member's beaconing
        // identity rotated, or a member got revoked
        if (v.cluster_id != 0) {
            bool mine_ok = false;
            if (live > 0) {
                const auto* sel = selected_cred(v, t);
                if (sel) {
                    for (const auto& p : v.my_identities) mine_ok |= (p == sel->cert.p_id);
                }
            }
            if (!mine_ok) recluster_needed_ = true;
            for (const auto& m : v.cluster_members) {
                if (pseudonym_revoked(m)) {
                    recluster_needed_ = true;
                    break;
                }
            }
        }
    }
}

void Simulation::step(sim::Tick t) {
    loop_.run_until(t);
    vehicle_phase(t);
    if (t % cfg_.recluster_interval_ticks == 0 || recluster_needed_) do_recluster(t);
    for (auto& v : vehicles_) process_vehicle_inbox(v, t);
    cluster_epoch_phase(t);
    emit_beacons(t);
    rsu_phase(t);
    ma_phase(t);
    sample_metrics(t);
}

std::map<scms::LtId, std::size_t>
Simulation::endorsements_per_lt(const cluster::ClusterBlock& b) const {
    std::map<scms::LtId, std::size_t> counts;
    std::set<scms::PseudonymId> seen;
    for (const auto& e : b.endorsements) {
        if (!seen.insert(e.voter.p_id).second) continue;
        auto owner = pseudonym_owner_oracle_.find(e.voter.p_id);
        if (owner != pseudonym_owner_oracle_.end()) counts[owner->second]++;
    }
    return counts;
}

SimulationResult Simulation::run() {
    for (sim::Tick t = 0; t < cfg_.ticks; t++) step(t);

    // converge on the best chain
    const std::vector<ledger::GlobalBlock>* best = &mas_[0].chain;
    for (const auto& ma : mas_) {
        if (ledger::chain_preferred(ma.chain, *best, genesis_)) best = &ma.chain;
    }

    metrics_.reports_committed = committed_report_hashes_.size();
    metrics_.reports_aggregated = aggregated_report_hashes_.size();
    metrics_.bft_rounds_committed = bft_committed_.size();
    std::uint64_t failed = 0;
    for (const auto& key : bft_proposed_)
        if (bft_committed_.count(key) == 0) failed++;
    metrics_.bft_rounds_failed = failed;
    metrics_.chain_blocks = best->size();
    for (const auto& b : *best) {
        for (const auto& tx : b.txs) {
            if (std::holds_alternative<ledger::IntroductionTx>(tx))
                metrics_.introduction_txs++;
            else
                metrics_.revocation_txs++;
        }
    }

    metrics_.ledger_bytes = ledger::chain_file_bytes(*best).size();
    metrics_.naive_edr_bytes = 0;
    for (const auto& v : vehicles_) metrics_.naive_edr_bytes += v.edr_bytes;
    metrics_.dedup_ratio =
        metrics_.naive_edr_bytes == 0
            ? 0.0
            : static_cast<double>(metrics_.ledger_bytes) /
                  static_cast<double>(metrics_.naive_edr_bytes);

    // ground truth: only vehicles that actually emitted false data may be
    // blacklisted
    std::set<scms::LtId> legitimate;
    for (const auto& v : vehicles_) {
        if (v.first_false_beacon) legitimate.insert(v.lt);
    }
    std::set<scms::LtId> blacklisted;
    for (const auto& r : regions_) {
        for (const auto& lt : r->revocation_state().ra_blacklist) blacklisted.insert(lt);
    }
    for (const auto& lt : blacklisted) {
        if (legitimate.count(lt) == 0) metrics_.false_revocations++;
    }

    SimulationResult result;
    result.metrics = metrics_;
    result.chain = *best;
    result.genesis = genesis_;
    return result;
}

} // namespace blackchain::harness
