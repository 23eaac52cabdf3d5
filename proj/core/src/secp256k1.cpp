// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

// secp256k1 arithmetic is delegated to OpenSSL's EC_GROUP/EC_POINT and
// BIGNUM. Nonce generation, low-s normalization and public-key recovery are
// implemented here.

#include <memory>

#include <openssl/bn.h>
#include <openssl/ec.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/obj_mac.h>

#include "hybridsplit/crypto.hpp"
#include "hybridsplit/error.hpp"

namespace hybridsplit::crypto {

namespace {

struct BnFree {
    void operator()(BIGNUM* p) const { BN_clear_free(p); }
};
struct BnCtxFree {
    void operator()(BN_CTX* p) const { BN_CTX_free(p); }
};
struct PointFree {
    void operator()(EC_POINT* p) const { EC_POINT_free(p); }
};
struct GroupFree {
    void operator()(EC_GROUP* p) const { EC_GROUP_free(p); }
};

using Bn = std::unique_ptr<BIGNUM, BnFree>;
using BnCtx = std::unique_ptr<BN_CTX, BnCtxFree>;
using Point = std::unique_ptr<EC_POINT, PointFree>;

[[noreturn]] void fail(const char* what) { throw CryptoError(std::string("secp256k1: ") + what); }

const EC_GROUP* group() {
    static const std::unique_ptr<EC_GROUP, GroupFree> g{EC_GROUP_new_by_curve_name(NID_secp256k1)};
    if (!g) fail("curve unavailable");
    return g.get();
}

const BIGNUM* order() { return EC_GROUP_get0_order(group()); }

Bn new_bn() {
    Bn b{BN_new()};
    if (!b) fail("allocation");
    return b;
}

Bn bn_from(const std::uint8_t* be, std::size_t len) {
    Bn b{BN_bin2bn(be, static_cast<int>(len), nullptr)};
    if (!b) fail("allocation");
    return b;
}

Bn bn_from(const std::array<std::uint8_t, 32>& be) { return bn_from(be.data(), be.size()); }

std::array<std::uint8_t, 32> bn_to32(const BIGNUM* b) {
    std::array<std::uint8_t, 32> out{};
    if (BN_bn2binpad(b, out.data(), 32) != 32) fail("scalar wider than 32 bytes");
    return out;
}

BnCtx new_ctx() {
    BnCtx c{BN_CTX_new()};
    if (!c) fail("allocation");
    return c;
}

Point new_point() {
    Point p{EC_POINT_new(group())};
    if (!p) fail("allocation");
    return p;
}

PublicKey encode_point(const EC_POINT* p, BN_CTX* ctx) {
    std::array<std::uint8_t, 65> raw{};
    if (EC_POINT_point2oct(group(), p, POINT_CONVERSION_UNCOMPRESSED, raw.data(), raw.size(), ctx) != raw.size()) {
        fail("point encoding");
    }
    PublicKey pub;
    std::copy(raw.begin() + 1, raw.end(), pub.bytes.begin());
    return pub;
}

using Block32 = std::array<std::uint8_t, 32>;

Block32 hmac_sha256(const Block32& key, std::initializer_list<ByteView> parts) {
    Bytes msg;
    for (ByteView p : parts) msg.insert(msg.end(), p.begin(), p.end());
    Block32 out{};
    unsigned int len = 0;
    if (!HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), msg.data(), msg.size(), out.data(), &len) ||
        len != out.size()) {
        fail("HMAC-SHA256");
    }
    return out;
}

ByteView view(const Block32& b) { return {b.data(), b.size()}; }

// RFC 6979 deterministic nonce stream for qlen = hlen = 256.
class NonceStream {
  public:
    NonceStream(const Block32& secret, const Block32& h1) {
        v_.fill(0x01);
        k_.fill(0x00);
        const std::uint8_t zero = 0x00;
        const std::uint8_t one = 0x01;
        k_ = hmac_sha256(k_, {view(v_), ByteView{&zero, 1}, view(secret), view(h1)});
        v_ = hmac_sha256(k_, {view(v_)});
        k_ = hmac_sha256(k_, {view(v_), ByteView{&one, 1}, view(secret), view(h1)});
        v_ = hmac_sha256(k_, {view(v_)});
    }

    // Next candidate in [1, n-1].
    Bn next() {
        while (true) {
            if (started_) {
                const std::uint8_t zero = 0x00;
                k_ = hmac_sha256(k_, {view(v_), ByteView{&zero, 1}});
                v_ = hmac_sha256(k_, {view(v_)});
            }
            started_ = true;
            v_ = hmac_sha256(k_, {view(v_)});
            Bn k = bn_from(v_);
            if (!BN_is_zero(k.get()) && BN_cmp(k.get(), order()) < 0) return k;
        }
    }

  private:
    Block32 k_{};
    Block32 v_{};
    bool started_ = false;
};

Bn half_order() {
    Bn half = new_bn();
    if (!BN_rshift1(half.get(), order())) fail("shift");
    return half;
}

}  // namespace

const std::array<std::uint8_t, 32>& curve_order() {
    static const std::array<std::uint8_t, 32> n = bn_to32(order());
    return n;
}

PrivateKey PrivateKey::from_bytes(ByteView be32) {
    if (be32.size() != 32) throw CryptoError("private key must be 32 bytes");
    Bn d = bn_from(be32.data(), be32.size());
    if (BN_is_zero(d.get()) || BN_cmp(d.get(), order()) >= 0) throw CryptoError("private key out of range");
    PrivateKey key;
    std::copy(be32.begin(), be32.end(), key.bytes_.begin());
    return key;
}

// Short encodings such as "01" are left-padded to 32 bytes.
PrivateKey PrivateKey::from_hex(std::string_view hex) {
    Bytes raw = hybridsplit::from_hex(hex);
    if (raw.size() < 32) raw.insert(raw.begin(), 32 - raw.size(), 0);
    return from_bytes(raw);
}

PublicKey public_key(const PrivateKey& key) {
    BnCtx ctx = new_ctx();
    Bn d = bn_from(key.bytes());
    Point p = new_point();
    if (!EC_POINT_mul(group(), p.get(), d.get(), nullptr, nullptr, ctx.get())) fail("scalar multiplication");
    return encode_point(p.get(), ctx.get());
}

Address address_of(const PublicKey& pub) {
    const Hash32 h = keccak256(ByteView{pub.bytes.data(), pub.bytes.size()});
    Address a;
    std::copy(h.bytes.begin() + 12, h.bytes.end(), a.bytes.begin());
    return a;
}

KeyPair keypair_from_secret(const PrivateKey& key) {
    PublicKey pub = public_key(key);
    return KeyPair{key, pub, address_of(pub)};
}

KeyPair derive_keypair(const std::array<std::uint8_t, 32>& seed) {
    BnCtx ctx = new_ctx();
    Bn s = bn_from(seed);
    Bn reduced = new_bn();
    if (!BN_nnmod(reduced.get(), s.get(), order(), ctx.get())) fail("reduction");
    if (BN_is_zero(reduced.get())) throw CryptoError("invalid seed: reduces to the zero scalar");
    const auto be = bn_to32(reduced.get());
    return keypair_from_secret(PrivateKey::from_bytes(ByteView{be.data(), be.size()}));
}

Signature ecsign(const Hash32& digest, const PrivateKey& key) {
    BnCtx ctx = new_ctx();
    Bn d = bn_from(key.bytes());
    Bn z = bn_from(digest.bytes);
    Bn z_mod = new_bn();
    if (!BN_nnmod(z_mod.get(), z.get(), order(), ctx.get())) fail("reduction");

    NonceStream nonces(key.bytes(), bn_to32(z_mod.get()));
    Point big_r = new_point();
    Bn rx = new_bn();
    Bn ry = new_bn();
    Bn r = new_bn();
    Bn s = new_bn();
    Bn tmp = new_bn();
    const Bn half = half_order();

    while (true) {
        Bn k = nonces.next();
        if (!EC_POINT_mul(group(), big_r.get(), k.get(), nullptr, nullptr, ctx.get()) ||
            !EC_POINT_get_affine_coordinates(group(), big_r.get(), rx.get(), ry.get(), ctx.get())) {
            fail("nonce point");
        }
        // R.x >= n would need recovery ids 2/3, which v in {27, 28} cannot carry.
        if (BN_cmp(rx.get(), order()) >= 0) continue;
        if (!BN_copy(r.get(), rx.get())) fail("copy");
        if (BN_is_zero(r.get())) continue;

        // s = k^-1 (z + r d) mod n
        Bn kinv{BN_mod_inverse(nullptr, k.get(), order(), ctx.get())};
        if (!kinv) fail("inverse");
        if (!BN_mod_mul(tmp.get(), r.get(), d.get(), order(), ctx.get()) ||
            !BN_mod_add(tmp.get(), tmp.get(), z_mod.get(), order(), ctx.get()) ||
            !BN_mod_mul(s.get(), kinv.get(), tmp.get(), order(), ctx.get())) {
            fail("signature arithmetic");
        }
        if (BN_is_zero(s.get())) continue;

        int recid = BN_is_odd(ry.get()) ? 1 : 0;
        if (BN_cmp(s.get(), half.get()) > 0) {
            if (!BN_sub(s.get(), order(), s.get())) fail("negate");
            recid ^= 1;
        }
        Signature sig;
        sig.v = static_cast<std::uint8_t>(27 + recid);
        sig.r = bn_to32(r.get());
        sig.s = bn_to32(s.get());
        return sig;
    }
}

std::optional<Address> ecrecover(const Hash32& digest, const Signature& sig) {
    if (sig.v != 27 && sig.v != 28) return std::nullopt;
    Bn r = bn_from(sig.r);
    Bn s = bn_from(sig.s);
    if (BN_is_zero(r.get()) || BN_is_zero(s.get())) return std::nullopt;
    if (BN_cmp(r.get(), order()) >= 0 || BN_cmp(s.get(), order()) >= 0) return std::nullopt;
    if (BN_cmp(s.get(), half_order().get()) > 0) return std::nullopt;

    BnCtx ctx = new_ctx();
    Point big_r = new_point();
    if (!EC_POINT_set_compressed_coordinates(group(), big_r.get(), r.get(), sig.v - 27, ctx.get())) {
        return std::nullopt;
    }

    // Q = r^-1 (s R - z G) = (-z r^-1) G + (s r^-1) R
    Bn z = bn_from(digest.bytes);
    Bn rinv{BN_mod_inverse(nullptr, r.get(), order(), ctx.get())};
    if (!rinv) return std::nullopt;
    Bn u1 = new_bn();
    Bn u2 = new_bn();
    Bn zero = new_bn();
    BN_zero(zero.get());
    if (!BN_mod_sub(u1.get(), zero.get(), z.get(), order(), ctx.get()) ||
        !BN_mod_mul(u1.get(), u1.get(), rinv.get(), order(), ctx.get()) ||
        !BN_mod_mul(u2.get(), s.get(), rinv.get(), order(), ctx.get())) {
        fail("recovery arithmetic");
    }
    Point q = new_point();
    if (!EC_POINT_mul(group(), q.get(), u1.get(), big_r.get(), u2.get(), ctx.get())) fail("recovery multiplication");
    if (EC_POINT_is_at_infinity(group(), q.get())) return std::nullopt;
    return address_of(encode_point(q.get(), ctx.get()));
}

Address contract_address(const Address& creator, std::uint64_t nonce) {
    Bytes payload;
    payload.push_back(0x80 + 20);
    payload.insert(payload.end(), creator.bytes.begin(), creator.bytes.end());
    if (nonce == 0) {
        payload.push_back(0x80);
    } else if (nonce < 0x80) {
        payload.push_back(static_cast<std::uint8_t>(nonce));
    } else {
        Bytes be;
        for (std::uint64_t n = nonce; n != 0; n >>= 8) be.insert(be.begin(), static_cast<std::uint8_t>(n & 0xff));
        payload.push_back(static_cast<std::uint8_t>(0x80 + be.size()));
        payload.insert(payload.end(), be.begin(), be.end());
    }
    Bytes encoded;
    encoded.push_back(static_cast<std::uint8_t>(0xc0 + payload.size()));
    encoded.insert(encoded.end(), payload.begin(), payload.end());

    const Hash32 h = keccak256(encoded);
    Address a;
    std::copy(h.bytes.begin() + 12, h.bytes.end(), a.bytes.begin());
    return a;
}

}  // namespace hybridsplit::crypto
