// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <gtest/gtest.h>

#include "hybridsplit/abi.hpp"
#include "hybridsplit/betting.hpp"
#include "hybridsplit/bytecode.hpp"
#include "hybridsplit/error.hpp"
#include "hybridsplit/ir.hpp"
#include "hybridsplit/spec_json.hpp"
#include "hybridsplit/split.hpp"

namespace hybridsplit {
namespace {

using ir::Op;

std::vector<ir::Contract> sample_contracts() {
    betting::SpecOptions heavy{.reveal_params = from_hex("abcdef"), .reveal_work = 9};
    const auto spec = betting::make_spec(heavy);
    const auto parts = split::split_and_pad(split::classify(spec));
    const auto six = split::split_and_pad(split::classify(betting::make_six_function_spec()), betting::six_function_padding());
    return {spec, parts.onchain, parts.offchain, betting::make_six_function_spec(), six.onchain, six.offchain};
}

TEST(Ir, SelectorMatchesKeccak) {
    EXPECT_EQ(selector_hex(ir::selector_of("transfer(address,uint256)")), "a9059cbb");
    EXPECT_EQ(selector_hex(ir::selector_of("deposit()")), "d0e30db0");
}

TEST(Ir, ValidateRejectsBadOperands) {
    auto c = betting::make_spec(betting::SpecOptions{});
    auto bad_var = c;
    bad_var.functions[0].body.push_back({.op = Op::Load, .a = 999});
    EXPECT_THROW(ir::validate(bad_var), ConfigError);

    auto bad_dup = c;
    bad_dup.functions[0].body.insert(bad_dup.functions[0].body.begin(), {.op = Op::Dup, .a = 17});
    EXPECT_THROW(ir::validate(bad_dup), ConfigError);

    auto dup_selector = c;
    dup_selector.functions.push_back(dup_selector.functions[0]);
    EXPECT_THROW(ir::validate(dup_selector), ConfigError);

    auto bad_guard = c;
    bad_guard.functions[0].modifiers.push_back({ir::GuardKind::Before, 500, 0});
    EXPECT_THROW(ir::validate(bad_guard), ConfigError);
}

TEST(Ir, MappingSlotLayout) {
    const Word key{0x1234};
    Bytes preimage;
    const auto k = to_be32(key);
    const auto v = to_be32(Word{7});
    preimage.insert(preimage.end(), k.begin(), k.end());
    preimage.insert(preimage.end(), v.begin(), v.end());
    EXPECT_EQ(ir::mapping_slot(key, 7), word_from_hash(crypto::keccak256(ByteView(preimage))));
}

TEST(Bytecode, RoundTripWithNames) {
    for (const auto& c : sample_contracts()) {
        const Bytes code = bytecode::encode(c);
        ASSERT_TRUE(std::equal(bytecode::kMagic.begin(), bytecode::kMagic.end(), code.begin()));
        EXPECT_EQ(bytecode::decode(code), c);
        EXPECT_EQ(bytecode::encode(bytecode::decode(code)), code);
    }
}

TEST(Bytecode, NameStrippedFormKeepsDispatch) {
    for (const auto& c : sample_contracts()) {
        const Bytes code = bytecode::encode(c, {.include_names = false});
        const auto back = bytecode::decode(code);
        EXPECT_TRUE(back.name.empty());
        ASSERT_EQ(back.functions.size(), c.functions.size());
        for (std::size_t i = 0; i < c.functions.size(); ++i) {
            EXPECT_TRUE(back.functions[i].name.empty());
            EXPECT_EQ(back.functions[i].selector, c.functions[i].selector);
            EXPECT_EQ(back.functions[i].body, c.functions[i].body);
            EXPECT_EQ(back.functions[i].modifiers, c.functions[i].modifiers);
        }
        EXPECT_EQ(bytecode::encode(back, {.include_names = false}), code);
        EXPECT_THROW(bytecode::encode(back), SplitError);
    }
}

TEST(Bytecode, DistinctContractsEncodeDistinctly) {
    const auto contracts = sample_contracts();
    for (std::size_t i = 0; i < contracts.size(); ++i) {
        for (std::size_t k = i + 1; k < contracts.size(); ++k) {
            if (contracts[i] == contracts[k]) continue;
            EXPECT_NE(bytecode::encode(contracts[i]), bytecode::encode(contracts[k]));
        }
    }
}

TEST(Bytecode, EveryByteFlipIsRejectedOrCanonical) {
    const Bytes code = bytecode::encode(sample_contracts()[2]);
    for (std::size_t pos = 0; pos < code.size(); ++pos) {
        for (std::uint8_t mask : {0x01, 0x80, 0xff}) {
            Bytes flipped = code;
            flipped[pos] ^= mask;
            try {
                const auto c = bytecode::decode(flipped);
                EXPECT_EQ(bytecode::encode(c), flipped) << "position " << pos;
            } catch (const DecodeError&) {
            }
        }
    }
}

TEST(Bytecode, TruncationAndTrailingBytes) {
    const Bytes code = bytecode::encode(sample_contracts()[1]);
    for (std::size_t len = 0; len < code.size(); len += 7) {
        EXPECT_THROW(bytecode::decode(ByteView(code).first(len)), DecodeError);
    }
    Bytes extra = code;
    extra.push_back(0);
    EXPECT_THROW(bytecode::decode(extra), DecodeError);
    const auto [contract, used] = bytecode::decode_prefix(extra);
    EXPECT_EQ(used, code.size());
    EXPECT_EQ(bytecode::encode(contract), code);
}

TEST(Bytecode, RejectsNonMinimalPush) {
    ir::Contract c = sample_contracts()[0];
    c.functions[0].body.insert(c.functions[0].body.begin(), {{.op = Op::Push, .value = 0x0102}, {.op = Op::Pop}});
    Bytes code = bytecode::encode(c);
    // Locate the 2-byte immediate and widen its declared length.
    const Bytes needle{static_cast<std::uint8_t>(Op::Push), 0x02, 0x01, 0x02};
    auto it = std::search(code.begin(), code.end(), needle.begin(), needle.end());
    ASSERT_NE(it, code.end());
    Bytes widened(code.begin(), it);
    widened.insert(widened.end(), {static_cast<std::uint8_t>(Op::Push), 0x03, 0x00, 0x01, 0x02});
    widened.insert(widened.end(), it + 4, code.end());
    EXPECT_THROW(bytecode::decode(widened), DecodeError);
}

TEST(Abi, StaticAndDynamicArguments) {
    const Bytes blob = from_hex("00112233445566778899aabbccddeeff00112233445566778899aabbccddeeff0011");
    const Bytes payload = abi::encode_call("f(bytes,uint256)", {blob, Word{77}});
    ASSERT_EQ(abi::payload_selector(payload), ir::selector_of("f(bytes,uint256)"));
    EXPECT_EQ(abi::arg_word(payload, 0), Word{64});
    EXPECT_EQ(abi::arg_word(payload, 1), Word{77});
    EXPECT_EQ(abi::arg_bytes(payload, 0), blob);
    EXPECT_EQ((payload.size() - 4) % 32, 0U);
    EXPECT_FALSE(abi::arg_word(payload, 10));
    EXPECT_FALSE(abi::arg_bytes(payload, 1));  // 77 points past the end
    EXPECT_FALSE(abi::payload_selector(Bytes{1, 2}));
}

TEST(SpecJson, DumpParseRoundTrip) {
    for (const auto& c : {betting::make_spec(betting::SpecOptions{.reveal_params = from_hex("07"), .reveal_work = 3}),
                          betting::make_six_function_spec()}) {
        const auto doc = spec_json::parse(spec_json::dump(c));
        EXPECT_EQ(doc.contract, c);
    }
}

TEST(SpecJson, OverridesAndPadding) {
    auto j = spec_json::dump(betting::make_six_function_spec());
    j["functions"][1]["kind"] = "light";
    j["padding"] = {{"result_function", "f6"}};
    const auto doc = spec_json::parse(j);
    EXPECT_EQ(doc.classification.overrides.at("f2"), ir::FunctionKind::Light);
    EXPECT_EQ(doc.padding.result_function, "f6");
    EXPECT_EQ(doc.padding.dispute_after, "T3");
}

TEST(SpecJson, Errors) {
    const auto base = spec_json::dump(betting::make_spec(betting::SpecOptions{}));
    auto unknown_op = base;
    unknown_op["functions"][0]["body"].push_back({"jump"});
    EXPECT_THROW(spec_json::parse(unknown_op), ConfigError);

    auto unknown_var = base;
    unknown_var["functions"][0]["body"].push_back({"load", "nope"});
    EXPECT_THROW(spec_json::parse(unknown_var), ConfigError);

    auto bad_guard = base;
    bad_guard["functions"][0]["modifiers"].push_back({{"guard", "sometimes"}});
    EXPECT_THROW(spec_json::parse(bad_guard), ConfigError);

    auto bad_kind = base;
    bad_kind["functions"][0]["kind"] = "medium";
    EXPECT_THROW(spec_json::parse(bad_kind), ConfigError);

    auto missing = base;
    missing.erase("functions");
    EXPECT_THROW(spec_json::parse(missing), ConfigError);

    auto dup = base;
    dup["parameters"].push_back({{"name", "deposit"}, {"kind", "state"}});
    EXPECT_THROW(spec_json::parse(dup), ConfigError);

    EXPECT_THROW(spec_json::load("/nonexistent/spec.json"), ConfigError);
}

}  // namespace
}  // namespace hybridsplit
