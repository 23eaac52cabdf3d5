// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hybridsplit {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// Lowercase hex, no prefix.
std::string to_hex(ByteView data);

// Accepts an optional "0x" prefix and either case. Throws HexError.
Bytes from_hex(std::string_view hex);

inline ByteView as_bytes(std::string_view text) {
    return {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()};
}

// Fixed-width byte identity (hashes, addresses, keys). The tag keeps
// unrelated identities of equal width from mixing.
template <std::size_t N, class Tag>
struct FixedBytes {
    static constexpr std::size_t size = N;
    std::array<std::uint8_t, N> bytes{};

    constexpr auto operator<=>(const FixedBytes&) const = default;

    [[nodiscard]] ByteView view() const { return {bytes.data(), bytes.size()}; }
    [[nodiscard]] std::string hex() const { return to_hex(view()); }
    [[nodiscard]] bool is_zero() const {
        return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
    }

    static FixedBytes from_view(ByteView data);
    static FixedBytes from_hex(std::string_view hex) { return from_view(hybridsplit::from_hex(hex)); }
};

void throw_width_mismatch(std::size_t expected, std::size_t actual);

template <std::size_t N, class Tag>
FixedBytes<N, Tag> FixedBytes<N, Tag>::from_view(ByteView data) {
    if (data.size() != N) throw_width_mismatch(N, data.size());
    FixedBytes out;
    std::copy(data.begin(), data.end(), out.bytes.begin());
    return out;
}

struct Hash32Tag;
struct AddressTag;

using Hash32 = FixedBytes<32, Hash32Tag>;
using Address = FixedBytes<20, AddressTag>;

// First 4 bytes of a function signature hash.
using Selector = std::array<std::uint8_t, 4>;

std::string selector_hex(const Selector& sel);

}  // namespace hybridsplit
