#include "blackchain/rng.hpp"

#include "blackchain/bytes.hpp"
#include "blackchain/sha256.hpp"

namespace blackchain {

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
} // namespace

Rng::Rng(std::uint64_t seed, const std::string& label) {
    ByteWriter w;
    w.str("rng-stream");
    w.u64(seed);
    w.str(label);
    Hash256 d = sha256(w.data());
    for (int i = 0; i < 4; i++) {
        std::uint64_t v = 0;
        for (int j = 0; j < 8; j++) v = (v << 8) | d.bytes[8 * i + j];
        s_[i] = v;
    }
    // xoshiro state must not be all-zero; the hash makes that negligible,
    // but guard anyway
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t Rng::next_u64() {
    std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

std::uint64_t Rng::next_below(std::uint64_t n) {
    if (n == 0) return 0;
    // rejection sampling to avoid modulo bias
    std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % n;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_below(span));
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

} // namespace blackchain
