// Schnorr signatures over the order-q subgroup of Z_p*, p = 2q + 1 a safe
// prime. Verification needs only the message bytes, the public key and the
// signature, so persisted artifacts (beacons, blocks, chain files) stay
// independently checkable by any process. The 62-bit group is sized for
// simulation throughput, not real-world security.

#pragma once

#include <cstdint>
#include <vector>

#include "blackchain/bytes.hpp"

namespace blackchain {

// Every signed payload is prefixed with a domain tag so signatures cannot
// be replayed across message kinds.
enum class SigDomain : std::uint8_t {
    beacon = 1,
    report = 2,
    cluster_endorse = 3,
    revocation_vote = 4,
    pca_cert = 5,
    rsu_echo = 6,
    participant_approval = 7,
};

struct PublicKey {
    std::uint64_t y = 0;
    bool operator==(const PublicKey&) const = default;
    bool operator<(const PublicKey& o) const { return y < o.y; }
};

struct PrivateKey {
    std::uint64_t x = 0;
};

struct KeyPair {
    PrivateKey sk;
    PublicKey pk;
};

struct Signature {
    std::uint64_t e = 0;
    std::uint64_t s = 0;
    bool operator==(const Signature&) const = default;
};

namespace schnorr {

// p = 2q + 1, both prime; g = 4 generates the order-q subgroup.
constexpr std::uint64_t P = 4611686018427394499ull;
constexpr std::uint64_t Q = 2305843009213697249ull;
constexpr std::uint64_t G = 4;

// Derives the keypair from 64 bits of seed material.
KeyPair keypair_from_seed(std::uint64_t seed);

Signature sign(const PrivateKey& sk, const PublicKey& pk, SigDomain domain,
               const std::uint8_t* msg, std::size_t len);
bool verify(const PublicKey& pk, SigDomain domain, const std::uint8_t* msg, std::size_t len,
            const Signature& sig);

inline Signature sign(const PrivateKey& sk, const PublicKey& pk, SigDomain domain,
                      const std::vector<std::uint8_t>& msg) {
    return sign(sk, pk, domain, msg.data(), msg.size());
}
inline bool verify(const PublicKey& pk, SigDomain domain, const std::vector<std::uint8_t>& msg,
                   const Signature& sig) {
    return verify(pk, domain, msg.data(), msg.size(), sig);
}

} // namespace schnorr

} // namespace blackchain
