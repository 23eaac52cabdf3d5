// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "hybridsplit/crypto.hpp"
#include "hybridsplit/error.hpp"
#include "hybridsplit/test_vectors.hpp"
#include "hybridsplit/word.hpp"

namespace hybridsplit::crypto {
namespace {

const TestVectors& vectors() {
    static const TestVectors v = load_test_vectors(HYBRIDSPLIT_VECTORS_PATH);
    return v;
}

Hash32 random_hash(std::mt19937_64& rng) {
    Hash32 h;
    for (auto& b : h.bytes) b = static_cast<std::uint8_t>(rng());
    return h;
}

TEST(Keccak, PublishedVectors) {
    ASSERT_GE(vectors().keccak.size(), 10U);
    for (const auto& v : vectors().keccak) EXPECT_EQ(keccak256(ByteView(v.input)), v.digest) << to_hex(v.input);
}

TEST(Keccak, EmptyInputAndText) {
    EXPECT_EQ(keccak256(std::string_view{}).hex(), "c5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470");
    EXPECT_EQ(keccak256(std::string_view("abc")), keccak256(ByteView(from_hex("616263"))));
}

TEST(Keccak, RateBoundaries) {
    // Inputs around the 136-byte rate exercise the padding paths.
    std::set<Hash32> seen;
    for (std::size_t len : {134, 135, 136, 137, 271, 272, 273}) {
        Bytes data(len, 0x61);
        seen.insert(keccak256(ByteView(data)));
    }
    EXPECT_EQ(seen.size(), 7U);
}

TEST(Ecdsa, MatchesIndependentSignatures) {
    ASSERT_FALSE(vectors().ecdsa.empty());
    for (const auto& v : vectors().ecdsa) {
        EXPECT_EQ(ecsign(v.digest, v.key), v.sig) << v.key.hex();
        EXPECT_EQ(ecrecover(v.digest, v.sig), keypair_from_secret(v.key).address);
    }
}

TEST(Address, KnownKeys) {
    for (const auto& v : vectors().addresses) EXPECT_EQ(keypair_from_secret(v.key).address, v.address) << v.key.hex();
    EXPECT_EQ(keypair_from_secret(PrivateKey::from_hex("01")).address.hex(), "7e5f4552091a69125d5dfcb7b8c2659029395bdf");
}

TEST(Address, ContractAddressVectors) {
    for (const auto& v : vectors().creates) EXPECT_EQ(contract_address(v.creator, v.nonce), v.address) << v.nonce;
}

TEST(Address, ContractAddressInjective) {
    std::set<Address> seen;
    std::size_t count = 0;
    for (std::uint64_t k = 1; k <= 8; ++k) {
        const Address creator = derive_keypair({static_cast<std::uint8_t>(k)}).address;
        for (std::uint64_t nonce = 0; nonce < 300; ++nonce, ++count) seen.insert(contract_address(creator, nonce));
    }
    EXPECT_EQ(seen.size(), count);
}

TEST(Ecdsa, RoundTripAndLowS) {
    std::mt19937_64 rng(7);
    const Word half = word_from_be(curve_order()) / 2;
    for (int i = 0; i < 200; ++i) {
        std::array<std::uint8_t, 32> seed{};
        for (auto& b : seed) b = static_cast<std::uint8_t>(rng());
        const auto keys = derive_keypair(seed);
        const auto digest = random_hash(rng);
        const auto sig = ecsign(digest, keys.secret);
        EXPECT_TRUE(sig.v == 27 || sig.v == 28);
        EXPECT_LE(word_from_be(sig.s), half);
        EXPECT_EQ(ecrecover(digest, sig), keys.address);
    }
}

TEST(Ecdsa, DeterministicNonce) {
    const auto key = PrivateKey::from_hex("0123456789abcdef0123456789abcdef0123456789abcdef0123456789abcdef");
    const auto digest = keccak256(std::string_view("message"));
    EXPECT_EQ(ecsign(digest, key), ecsign(digest, key));
}

TEST(Ecdsa, RejectsMalformedSignatures) {
    const auto keys = derive_keypair({9});
    const auto digest = keccak256(std::string_view("x"));
    const auto sig = ecsign(digest, keys.secret);

    auto bad_v = sig;
    bad_v.v = 29;
    EXPECT_FALSE(ecrecover(digest, bad_v));
    bad_v.v = 0;
    EXPECT_FALSE(ecrecover(digest, bad_v));

    auto zero_r = sig;
    zero_r.r = {};
    EXPECT_FALSE(ecrecover(digest, zero_r));

    auto zero_s = sig;
    zero_s.s = {};
    EXPECT_FALSE(ecrecover(digest, zero_s));

    // The high-s twin of a valid signature is not accepted.
    auto high_s = sig;
    high_s.s = to_be32(word_from_be(curve_order()) - word_from_be(sig.s));
    high_s.v = sig.v == 27 ? 28 : 27;
    EXPECT_FALSE(ecrecover(digest, high_s));

    auto r_at_order = sig;
    r_at_order.r = curve_order();
    EXPECT_FALSE(ecrecover(digest, r_at_order));
}

TEST(Ecdsa, OtherDigestRecoversSomeoneElse) {
    const auto keys = derive_keypair({3});
    const auto sig = ecsign(keccak256(std::string_view("a")), keys.secret);
    const auto other = ecrecover(keccak256(std::string_view("b")), sig);
    if (other) EXPECT_NE(*other, keys.address);
}

TEST(Keys, RangeChecks) {
    EXPECT_THROW(PrivateKey::from_hex("00"), CryptoError);
    EXPECT_THROW(PrivateKey::from_bytes(curve_order()), CryptoError);
    EXPECT_THROW(derive_keypair({}), CryptoError);
    EXPECT_THROW(derive_keypair(curve_order()), CryptoError);
    std::array<std::uint8_t, 32> high{};
    high.fill(0xff);
    EXPECT_NO_THROW(derive_keypair(high));
}

TEST(Keys, SingleByteFlipChangesSigner) {
    std::mt19937_64 rng(11);
    const auto keys = derive_keypair({42});
    Bytes message(300);
    for (auto& b : message) b = static_cast<std::uint8_t>(rng());
    const auto sig = ecsign(keccak256(ByteView(message)), keys.secret);
    for (int i = 0; i < 100; ++i) {
        Bytes flipped = message;
        flipped[rng() % flipped.size()] ^= static_cast<std::uint8_t>(1 + rng() % 255);
        const auto digest = keccak256(ByteView(flipped));
        EXPECT_NE(digest, keccak256(ByteView(message)));
        EXPECT_NE(ecrecover(digest, sig), keys.address);
    }
}

TEST(TestVectors, RoundTripAndErrors) {
    std::stringstream out;
    write_test_vectors(out, vectors());
    const auto again = read_test_vectors(out);
    EXPECT_EQ(again.keccak.size(), vectors().keccak.size());
    EXPECT_EQ(again.ecdsa.size(), vectors().ecdsa.size());
    EXPECT_EQ(again.creates.size(), vectors().creates.size());

    std::stringstream bad("keccak256,zz,00\n");
    EXPECT_THROW(read_test_vectors(bad), DecodeError);
    std::stringstream unknown("sha256,00,00\n");
    EXPECT_THROW(read_test_vectors(unknown), DecodeError);
}

TEST(Hex, ParsingAndWords) {
    EXPECT_EQ(from_hex("0xAbCd"), (Bytes{0xab, 0xcd}));
    EXPECT_THROW(from_hex("abc"), HexError);
    EXPECT_THROW(from_hex("zz"), HexError);
    EXPECT_EQ(to_decimal(parse_decimal("115792089237316195423570985008687907853269984665640564039457584007913129639935")),
              "115792089237316195423570985008687907853269984665640564039457584007913129639935");
    EXPECT_THROW(parse_decimal("115792089237316195423570985008687907853269984665640564039457584007913129639936"),
                 ConfigError);
    EXPECT_THROW(parse_decimal("-1"), ConfigError);
    EXPECT_TRUE(to_be_minimal(Word{0}).empty());
    EXPECT_EQ(word_from_be(to_be_minimal(Word{0x1234})), Word{0x1234});
}

}  // namespace
}  // namespace hybridsplit::crypto
