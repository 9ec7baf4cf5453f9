#include "blackchain/ledger/block.hpp"

#include <algorithm>

#include "blackchain/sha256.hpp"

namespace blackchain::ledger {

std::vector<std::uint8_t> GlobalBlock::pow_bytes() const {
    ByteWriter w;
    w.u64(height);
    w.hash(prev_hash);
    w.u32(static_cast<std::uint32_t>(txs.size()));
    for (const auto& tx : txs) encode_tx(tx, w);
    w.u64(nonce);
    return w.take();
}

Hash256 GlobalBlock::compute_pow_hash() const { return sha256(pow_bytes()); }

void GlobalBlock::encode(ByteWriter& w) const {
    auto body = pow_bytes();
    w.raw(body.data(), body.size());
    w.hash(pow_hash);
}

GlobalBlock GlobalBlock::decode(ByteReader& r) {
    GlobalBlock b;
    b.height = r.u64();
    b.prev_hash = r.hash();
    std::uint32_t n = r.u32();
    b.txs.reserve(n);
    for (std::uint32_t i = 0; i < n; i++) b.txs.push_back(decode_tx(r));
    b.nonce = r.u64();
    b.pow_hash = r.hash();
    return b;
}

unsigned leading_zero_bits(const Hash256& h) {
    unsigned bits = 0;
    for (auto byte : h.bytes) {
        if (byte == 0) {
            bits += 8;
            continue;
        }
        for (int i = 7; i >= 0; i--) {
            if (byte & (1u << i)) return bits;
            bits++;
        }
    }
    return bits;
}

GlobalBlock mine_block(std::vector<Transaction> txs, std::uint64_t height, const Hash256& prev,
                       std::uint32_t difficulty_bits) {
    std::vector<std::pair<Hash256, Transaction>> keyed;
    keyed.reserve(txs.size());
    for (auto& tx : txs) keyed.emplace_back(tx_hash(tx), std::move(tx));
    std::sort(keyed.begin(), keyed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    GlobalBlock b;
    b.height = height;
    b.prev_hash = prev;
    b.txs.reserve(keyed.size());
    for (auto& [h, tx] : keyed) b.txs.push_back(std::move(tx));

    // hash the body once, then clone the midstate per nonce
    ByteWriter w;
    w.u64(b.height);
    w.hash(b.prev_hash);
    w.u32(static_cast<std::uint32_t>(b.txs.size()));
    for (const auto& tx : b.txs) encode_tx(tx, w);
    Sha256 prefix;
    prefix.update(w.data());

    for (b.nonce = 0;; b.nonce++) {
        Sha256 h = prefix;
        std::uint8_t nb[8];
        for (int i = 0; i < 8; i++) nb[i] = static_cast<std::uint8_t>(b.nonce >> (8 * i));
        h.update(nb, 8);
        b.pow_hash = h.finish();
        if (meets_difficulty(b.pow_hash, difficulty_bits)) return b;
    }
}

} // namespace blackchain::ledger
