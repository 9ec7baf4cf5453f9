#pragma once

#include "blackchain/ledger/tx.hpp"

namespace blackchain::ledger {

// Proof-of-work block of the public permissionless chain. pow_hash is the
// hash of every preceding field and must clear the configured number of
// leading zero bits.
struct GlobalBlock {
    std::uint64_t height = 0;
    Hash256 prev_hash;
    std::vector<Transaction> txs; // canonical order: sorted by tx_hash
    std::uint64_t nonce = 0;
    Hash256 pow_hash;

    std::vector<std::uint8_t> pow_bytes() const; // everything except pow_hash
    Hash256 compute_pow_hash() const;
    void encode(ByteWriter& w) const;
    static GlobalBlock decode(ByteReader& r);
    std::vector<std::uint8_t> encoded() const {
        ByteWriter w;
        encode(w);
        return w.take();
    }
};

unsigned leading_zero_bits(const Hash256& h);
inline bool meets_difficulty(const Hash256& h, std::uint32_t bits) {
    return leading_zero_bits(h) >= bits;
}

// Deterministic search from nonce 0 upward; difficulty 0 accepts the first
// nonce. Transactions are sorted into canonical order.
GlobalBlock mine_block(std::vector<Transaction> txs, std::uint64_t height, const Hash256& prev,
                       std::uint32_t difficulty_bits);

} // namespace blackchain::ledger
