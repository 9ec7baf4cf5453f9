// Canonical byte encoding: fixed field order, little-endian fixed-width
// integers, u32 length prefixes. Every hash and signature in the system is
// computed over bytes produced by ByteWriter, so encodings must stay
// platform-stable.

#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace blackchain {

struct Hash256 {
    std::array<std::uint8_t, 32> bytes{};

    bool operator==(const Hash256&) const = default;
    bool operator<(const Hash256& o) const { return bytes < o.bytes; }
    bool is_zero() const {
        for (auto b : bytes)
            if (b != 0) return false;
        return true;
    }
};

inline std::string to_hex(const std::uint8_t* data, std::size_t n) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(n * 2);
    for (std::size_t i = 0; i < n; i++) {
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0xf]);
    }
    return out;
}

inline std::string to_hex(const Hash256& h) { return to_hex(h.bytes.data(), h.bytes.size()); }

// First 8 bytes of a hash as a little-endian u64, used for derived ids.
inline std::uint64_t fold64(const Hash256& h) {
    std::uint64_t v = 0;
    std::memcpy(&v, h.bytes.data(), sizeof(v));
    return v;
}

class ByteWriter {
  public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u16(std::uint16_t v) { append_le(v); }
    void u32(std::uint32_t v) { append_le(v); }
    void u64(std::uint64_t v) { append_le(v); }
    // IEEE-754 bit pattern, little-endian
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        append_le(bits);
    }
    void raw(const std::uint8_t* data, std::size_t n) { buf_.insert(buf_.end(), data, data + n); }
    void hash(const Hash256& h) { raw(h.bytes.data(), h.bytes.size()); }
    // u32 length prefix + raw bytes
    void bytes(const std::vector<std::uint8_t>& b) {
        u32(static_cast<std::uint32_t>(b.size()));
        raw(b.data(), b.size());
    }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        raw(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
    }

    const std::vector<std::uint8_t>& data() const { return buf_; }
    std::vector<std::uint8_t> take() { return std::move(buf_); }
    std::size_t size() const { return buf_.size(); }

  private:
    template <typename T>
    void append_le(T v) {
        for (std::size_t i = 0; i < sizeof(T); i++)
            buf_.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
    }
    std::vector<std::uint8_t> buf_;
};

// Thrown on truncated or malformed input; callers that parse untrusted
// bytes (chain files) translate this into a parse-failure verdict.
struct DecodeError : std::runtime_error {
    explicit DecodeError(const std::string& what) : std::runtime_error(what) {}
};

// Non-owning view; the buffer must outlive the reader.
class ByteReader {
  public:
    ByteReader(const std::uint8_t* data, std::size_t n) : data_(data), size_(n) {}
    explicit ByteReader(const std::vector<std::uint8_t>& v) : ByteReader(v.data(), v.size()) {}
    explicit ByteReader(std::vector<std::uint8_t>&&) = delete;

    std::uint8_t u8() { return take(1)[0]; }
    std::uint16_t u16() { return read_le<std::uint16_t>(); }
    std::uint32_t u32() { return read_le<std::uint32_t>(); }
    std::uint64_t u64() { return read_le<std::uint64_t>(); }
    double f64() {
        std::uint64_t bits = read_le<std::uint64_t>();
        double v;
        std::memcpy(&v, &bits, sizeof(v));
        return v;
    }
    Hash256 hash() {
        Hash256 h;
        const std::uint8_t* p = take(32);
        std::memcpy(h.bytes.data(), p, 32);
        return h;
    }
    std::vector<std::uint8_t> bytes() {
        std::uint32_t n = u32();
        const std::uint8_t* p = take(n);
        return std::vector<std::uint8_t>(p, p + n);
    }
    std::string str() {
        std::uint32_t n = u32();
        const std::uint8_t* p = take(n);
        return std::string(reinterpret_cast<const char*>(p), n);
    }

    std::size_t remaining() const { return size_ - pos_; }
    bool done() const { return pos_ == size_; }

  private:
    template <typename T>
    T read_le() {
        const std::uint8_t* p = take(sizeof(T));
        T v = 0;
        for (std::size_t i = 0; i < sizeof(T); i++)
            v |= static_cast<T>(p[i]) << (8 * i);
        return v;
    }
    const std::uint8_t* take(std::size_t n) {
        if (pos_ + n > size_) throw DecodeError("unexpected end of input");
        const std::uint8_t* p = data_ + pos_;
        pos_ += n;
        return p;
    }
    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

} // namespace blackchain
