// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>

#include "hybridsplit/crypto.hpp"

namespace hybridsplit::crypto {

namespace {

constexpr std::array<std::uint64_t, 24> kRoundConstants = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL, 0x8000000080008000ULL,
    0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

constexpr std::array<int, 25> kRotations = {
    0, 1, 62, 28, 27, 36, 44, 6, 55, 20, 3, 10, 43, 25, 39, 41, 45, 15, 21, 8, 18, 2, 61, 56, 14,
};

void keccak_f1600(std::array<std::uint64_t, 25>& a) {
    for (std::uint64_t rc : kRoundConstants) {
        // theta
        std::array<std::uint64_t, 5> c{};
        for (int x = 0; x < 5; ++x) c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
        for (int x = 0; x < 5; ++x) {
            const std::uint64_t d = c[(x + 4) % 5] ^ std::rotl(c[(x + 1) % 5], 1);
            for (int y = 0; y < 25; y += 5) a[y + x] ^= d;
        }
        // rho + pi
        std::array<std::uint64_t, 25> b{};
        for (int x = 0; x < 5; ++x) {
            for (int y = 0; y < 5; ++y) {
                b[y + 5 * ((2 * x + 3 * y) % 5)] = std::rotl(a[x + 5 * y], kRotations[x + 5 * y]);
            }
        }
        // chi
        for (int y = 0; y < 25; y += 5) {
            for (int x = 0; x < 5; ++x) a[y + x] = b[y + x] ^ (~b[y + (x + 1) % 5] & b[y + (x + 2) % 5]);
        }
        // iota
        a[0] ^= rc;
    }
}

std::uint64_t load_le64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

}  // namespace

Hash32 keccak256(ByteView data) {
    constexpr std::size_t kRate = 136;
    std::array<std::uint64_t, 25> state{};

    std::size_t offset = 0;
    while (data.size() - offset >= kRate) {
        for (std::size_t i = 0; i < kRate / 8; ++i) state[i] ^= load_le64(data.data() + offset + 8 * i);
        keccak_f1600(state);
        offset += kRate;
    }

    std::array<std::uint8_t, kRate> block{};
    const std::size_t tail = data.size() - offset;
    if (tail > 0) std::memcpy(block.data(), data.data() + offset, tail);
    block[tail] ^= 0x01;
    block[kRate - 1] ^= 0x80;
    for (std::size_t i = 0; i < kRate / 8; ++i) state[i] ^= load_le64(block.data() + 8 * i);
    keccak_f1600(state);

    Hash32 out;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 8; ++j) out.bytes[8 * i + j] = static_cast<std::uint8_t>(state[i] >> (8 * j));
    }
    return out;
}

Hash32 keccak256(std::string_view text) { return keccak256(as_bytes(text)); }

}  // namespace hybridsplit::crypto
