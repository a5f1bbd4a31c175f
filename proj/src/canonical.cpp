#include "metasim/canonical.hpp"

#include <limits>

#include "metasim/error.hpp"

namespace metasim {

Encoder& Encoder::u8(std::uint8_t v) {
    buf_.push_back(v);
    return *this;
}

Encoder& Encoder::u32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8)
        buf_.push_back(static_cast<std::uint8_t>(v >> shift));
    return *this;
}

Encoder& Encoder::u64(std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8)
        buf_.push_back(static_cast<std::uint8_t>(v >> shift));
    return *this;
}

Encoder& Encoder::bytes(ByteView v) {
    if (v.size() > std::numeric_limits<std::uint32_t>::max())
        throw Error("encode-error", "field too large");
    u32(static_cast<std::uint32_t>(v.size()));
    return raw(v);
}

Encoder& Encoder::raw(ByteView v) {
    buf_.insert(buf_.end(), v.begin(), v.end());
    return *this;
}

ByteView Decoder::take(std::size_t n) {
    if (data_.size() - pos_ < n)
        throw Error("decode-error", "truncated input");
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
}

std::uint8_t Decoder::u8() {
    return take(1)[0];
}

std::uint32_t Decoder::u32() {
    std::uint32_t v = 0;
    for (auto b : take(4))
        v = (v << 8) | b;
    return v;
}

std::uint64_t Decoder::u64() {
    std::uint64_t v = 0;
    for (auto b : take(8))
        v = (v << 8) | b;
    return v;
}

Bytes Decoder::bytes() {
    auto n = u32();
    auto v = take(n);
    return Bytes(v.begin(), v.end());
}

std::string Decoder::str() {
    auto n = u32();
    auto v = take(n);
    return std::string(v.begin(), v.end());
}

bool Decoder::flag() {
    auto v = u8();
    if (v > 1)
        throw Error("decode-error", "bad flag byte");
    return v == 1;
}

void Decoder::expect_end() const {
    if (!at_end())
        throw Error("decode-error", "trailing bytes");
}

}  // namespace metasim
