// Deterministic, named random streams. Every stream is seeded from
// H(seed || label), so draws on one stream never depend on how much another
// stream has consumed, and identical (seed, label) pairs replay identically
// on any platform.

#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace blackchain {

// xoshiro256** 1.0
class Rng {
  public:
    Rng() : Rng(0, "") {}
    Rng(std::uint64_t seed, const std::string& label);

    std::uint64_t next_u64();
    // uniform in [0, n)
    std::uint64_t next_below(std::uint64_t n);
    // uniform in [lo, hi]
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    // uniform in [0, 1)
    double uniform();
    // uniform in [lo, hi)
    double uniform(double lo, double hi);

  private:
    std::uint64_t s_[4];
};

class RngHub {
  public:
    explicit RngHub(std::uint64_t seed) : seed_(seed) {}

    // Same label twice returns the same underlying stream.
    Rng& stream(const std::string& label) {
        auto it = streams_.find(label);
        if (it == streams_.end()) it = streams_.emplace(label, Rng(seed_, label)).first;
        return it->second;
    }

    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
    std::map<std::string, Rng> streams_;
};

} // namespace blackchain
