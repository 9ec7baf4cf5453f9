#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "blackchain/bytes.hpp"

namespace blackchain {

// Incremental SHA-256 (FIPS 180-4).
class Sha256 {
  public:
    Sha256();
    void update(const std::uint8_t* data, std::size_t len);
    void update(const std::vector<std::uint8_t>& v) { update(v.data(), v.size()); }
    Hash256 finish();

  private:
    void compress(const std::uint8_t* block);
    std::uint32_t state_[8];
    std::uint8_t buf_[64];
    std::size_t buf_len_ = 0;
    std::uint64_t total_len_ = 0;
};

Hash256 sha256(const std::uint8_t* data, std::size_t len);
inline Hash256 sha256(const std::vector<std::uint8_t>& v) { return sha256(v.data(), v.size()); }

} // namespace blackchain
