#include "blackchain/schnorr.hpp"

#include "blackchain/sha256.hpp"

namespace blackchain::schnorr {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t r = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Hash to a nonzero scalar mod Q.
std::uint64_t hash_scalar(const Sha256& partial) {
    Sha256 h = partial;
    Hash256 d = h.finish();
    std::uint64_t v = 0;
    for (int i = 0; i < 8; i++) v = (v << 8) | d.bytes[i];
    v %= Q;
    return v == 0 ? 1 : v;
}

Sha256 challenge_prefix(std::uint64_t r, const PublicKey& pk, SigDomain domain,
                        const std::uint8_t* msg, std::size_t len) {
    ByteWriter w;
    w.u64(r);
    w.u64(pk.y);
    w.u8(static_cast<std::uint8_t>(domain));
    Sha256 h;
    h.update(w.data());
    h.update(msg, len);
    return h;
}

} // namespace

KeyPair keypair_from_seed(std::uint64_t seed) {
    ByteWriter w;
    w.str("schnorr-key");
    w.u64(seed);
    Hash256 d = sha256(w.data());
    std::uint64_t x = 0;
    for (int i = 0; i < 8; i++) x = (x << 8) | d.bytes[i];
    x %= (Q - 1);
    x += 1; // x in [1, Q-1]
    KeyPair kp;
    kp.sk.x = x;
    kp.pk.y = powmod(G, x, P);
    return kp;
}

Signature sign(const PrivateKey& sk, const PublicKey& pk, SigDomain domain,
               const std::uint8_t* msg, std::size_t len) {
    // deterministic nonce: k = H(sk || domain || msg)
    ByteWriter nw;
    nw.str("schnorr-nonce");
    nw.u64(sk.x);
    nw.u8(static_cast<std::uint8_t>(domain));
    Sha256 nh;
    nh.update(nw.data());
    nh.update(msg, len);
    std::uint64_t k = hash_scalar(nh);

    std::uint64_t r = powmod(G, k, P);
    std::uint64_t e = hash_scalar(challenge_prefix(r, pk, domain, msg, len));
    std::uint64_t s = (k + mulmod(e, sk.x, Q)) % Q;
    return Signature{e, s};
}

bool verify(const PublicKey& pk, SigDomain domain, const std::uint8_t* msg, std::size_t len,
            const Signature& sig) {
    if (pk.y <= 1 || pk.y >= P) return false;
    if (sig.e == 0 || sig.e >= Q || sig.s >= Q) return false;
    // r' = g^s * pk^(-e) = g^s * pk^(q - e)
    std::uint64_t r = mulmod(powmod(G, sig.s, P), powmod(pk.y, Q - sig.e, P), P);
    std::uint64_t e = hash_scalar(challenge_prefix(r, pk, domain, msg, len));
    return e == sig.e;
}

} // namespace blackchain::schnorr
