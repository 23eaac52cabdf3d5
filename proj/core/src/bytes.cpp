// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#include "hybridsplit/bytes.hpp"

#include "hybridsplit/error.hpp"
#include "hybridsplit/word.hpp"

namespace hybridsplit {

namespace {

int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::string to_hex(ByteView data) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (hex.size() % 2 != 0) throw HexError("odd-length hex string");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int hi = nibble(hex[2 * i]);
        const int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw HexError("invalid hex digit");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

void throw_width_mismatch(std::size_t expected, std::size_t actual) {
    throw HexError("expected " + std::to_string(expected) + " bytes, got " + std::to_string(actual));
}

std::string selector_hex(const Selector& sel) { return to_hex(ByteView{sel.data(), sel.size()}); }

std::array<std::uint8_t, 32> to_be32(const Word& w) {
    std::array<std::uint8_t, 32> out{};
    Word v = w;
    for (int i = 31; i >= 0 && v != 0; --i) {
        out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xff);
        v >>= 8;
    }
    return out;
}

Bytes to_be_minimal(const Word& w) {
    const auto full = to_be32(w);
    auto first = std::find_if(full.begin(), full.end(), [](std::uint8_t b) { return b != 0; });
    return {first, full.end()};
}

Word word_from_be(ByteView data) {
    if (data.size() > 32) throw DecodeError("word wider than 32 bytes");
    Word w = 0;
    for (std::uint8_t b : data) w = (w << 8) | b;
    return w;
}

Word word_from_address(const Address& a) { return word_from_be(a.view()); }

Address address_from_word(const Word& w) {
    const auto full = to_be32(w);
    Address a;
    std::copy(full.begin() + 12, full.end(), a.bytes.begin());
    return a;
}

Word word_from_hash(const Hash32& h) { return word_from_be(h.view()); }

Hash32 hash_from_word(const Word& w) {
    Hash32 h;
    h.bytes = to_be32(w);
    return h;
}

std::string to_decimal(const Word& w) { return w.str(); }

Word parse_decimal(std::string_view text) {
    if (text.empty() || text.size() > 78) throw ConfigError("invalid decimal integer: '" + std::string(text) + "'");
    Word w = 0;
    for (char c : text) {
        if (c < '0' || c > '9') throw ConfigError("invalid decimal integer: '" + std::string(text) + "'");
        const Word next = w * 10 + static_cast<unsigned>(c - '0');
        if (next / 10 != w) throw ConfigError("decimal integer out of range: '" + std::string(text) + "'");
        w = next;
    }
    return w;
}

}  // namespace hybridsplit
