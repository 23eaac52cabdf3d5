// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "hybridsplit/bytes.hpp"

/// Hashing, secp256k1 keys and recoverable signatures, Ethereum-style
/// address derivation. Every function here is pure and thread-safe.
namespace hybridsplit::crypto {

/// Keccak-256 with the original Keccak padding (0x01), as used by Ethereum.
/// This is not FIPS-202 SHA3-256.
Hash32 keccak256(ByteView data);
Hash32 keccak256(std::string_view text);

/// Secret scalar in [1, n-1] for the secp256k1 group order n.
class PrivateKey {
  public:
    /// Throws CryptoError when the value is zero or not below the order.
    static PrivateKey from_bytes(ByteView be32);
    static PrivateKey from_hex(std::string_view hex);

    [[nodiscard]] const std::array<std::uint8_t, 32>& bytes() const { return bytes_; }
    [[nodiscard]] std::string hex() const { return to_hex(bytes_); }

    auto operator<=>(const PrivateKey&) const = default;

  private:
    PrivateKey() = default;
    std::array<std::uint8_t, 32> bytes_{};
};

/// Uncompressed point X || Y, without the 0x04 tag.
struct PublicKey {
    std::array<std::uint8_t, 64> bytes{};
    auto operator<=>(const PublicKey&) const = default;
};

/// Recoverable ECDSA signature. v is 27 or 28.
struct Signature {
    std::uint8_t v = 0;
    std::array<std::uint8_t, 32> r{};
    std::array<std::uint8_t, 32> s{};
    auto operator<=>(const Signature&) const = default;
};

struct KeyPair {
    PrivateKey secret;
    PublicKey pub;
    Address address;
};

PublicKey public_key(const PrivateKey& key);

/// Last 20 bytes of keccak256(X || Y).
Address address_of(const PublicKey& pub);

/// Deterministic identity from a 32-byte seed: the seed reduced modulo the
/// group order becomes the secret. Throws CryptoError if it reduces to zero.
KeyPair derive_keypair(const std::array<std::uint8_t, 32>& seed);
KeyPair keypair_from_secret(const PrivateKey& key);

/// Signs the raw digest (no message prefix) with an RFC 6979 HMAC-SHA256
/// nonce. The result is low-s normalized.
Signature ecsign(const Hash32& digest, const PrivateKey& key);

/// Recovers the signer address. Returns nullopt when v is not 27/28, r or s
/// is zero or not below the order, s is in the upper half, or no curve point
/// has x = r. A well-formed signature over a different digest recovers to
/// some unrelated address.
std::optional<Address> ecrecover(const Hash32& digest, const Signature& sig);

/// keccak256(rlp([creator, nonce]))[12:].
Address contract_address(const Address& creator, std::uint64_t nonce);

/// secp256k1 group order n, big-endian.
const std::array<std::uint8_t, 32>& curve_order();

}  // namespace hybridsplit::crypto
