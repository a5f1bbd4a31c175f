#pragma once

// Canonical encoding shared by every signed or persisted structure.
//
//   integers   big-endian, fixed width (u8 / u32 / u64)
//   bytes      u32 big-endian length, then the raw bytes
//   strings    encoded exactly like bytes (UTF-8, no terminator)
//   optional   u8 presence flag (0 or 1), then the value when present
//   lists      u32 big-endian element count, then each element
//
// Fields are always written in declaration order. The encoding is injective:
// two different field sequences never produce the same byte string.

#include <cstdint>
#include <string>
#include <string_view>

#include "metasim/bytes.hpp"

namespace metasim {

class Encoder {
  public:
    Encoder& u8(std::uint8_t v);
    Encoder& u32(std::uint32_t v);
    Encoder& u64(std::uint64_t v);
    Encoder& bytes(ByteView v);
    Encoder& str(std::string_view v) { return bytes(as_view(v)); }
    // Appends pre-encoded material verbatim (no length prefix).
    Encoder& raw(ByteView v);

    const Bytes& data() const { return buf_; }
    // Moves the buffer out, leaving the encoder empty.
    Bytes take() { return std::move(buf_); }

  private:
    Bytes buf_;
};

// Reads a canonical encoding. Every malformed read throws Error("decode-error").
class Decoder {
  public:
    explicit Decoder(ByteView data) : data_(data) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    Bytes bytes();
    std::string str();
    bool flag();

    bool at_end() const { return pos_ == data_.size(); }
    void expect_end() const;

  private:
    ByteView take(std::size_t n);

    ByteView data_;
    std::size_t pos_ = 0;
};

}  // namespace metasim
