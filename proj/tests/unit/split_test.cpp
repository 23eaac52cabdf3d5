// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#include <set>

#include <gtest/gtest.h>

#include "harness.hpp"
#include "hybridsplit/bytecode.hpp"
#include "hybridsplit/error.hpp"
#include "hybridsplit/split.hpp"

namespace hybridsplit::split {
namespace {

using ir::FunctionKind;
using ir::Op;

std::set<std::string> names(const ir::Contract& c, bool padded) {
    std::set<std::string> out;
    for (const auto& f : c.functions) {
        if (f.padded == padded) out.insert(f.name);
    }
    return out;
}

std::vector<std::pair<ir::Contract, PaddingConfig>> splittable() {
    return {
        {betting::make_spec(betting::SpecOptions{}), {}},
        {betting::make_spec(betting::SpecOptions{.participants = 3, .reveal_work = 5}), {}},
        {betting::make_spec(betting::SpecOptions{.reassign_mode = betting::ReassignMode::Concede}), {}},
        {betting::make_six_function_spec(), betting::six_function_padding()},
    };
}

TEST(Classify, DefaultRuleAndOverrides) {
    const auto spec = betting::make_six_function_spec();
    const auto c = classify(spec);
    for (const auto& f : c.functions) {
        EXPECT_EQ(f.kind, f.transfers_currency ? FunctionKind::Light : FunctionKind::Heavy) << f.name;
    }
    const auto o = classify(spec, {.overrides = {{"f2", FunctionKind::Light}}});
    EXPECT_EQ(o.find("f2")->kind, FunctionKind::Light);
    EXPECT_THROW(classify(spec, {.overrides = {{"nope", FunctionKind::Light}}}), SplitError);
}

TEST(Split, PartitionsFunctions) {
    for (const auto& [spec, padding] : splittable()) {
        const auto c = classify(spec);
        const auto parts = split_and_pad(c, padding);
        const auto on = names(parts.onchain, false);
        const auto off = names(parts.offchain, false);
        std::set<std::string> all;
        for (const auto& f : spec.functions) all.insert(f.name);
        std::set<std::string> both;
        std::set_intersection(on.begin(), on.end(), off.begin(), off.end(), std::inserter(both, both.end()));
        EXPECT_TRUE(both.empty());
        std::set<std::string> uni = on;
        uni.insert(off.begin(), off.end());
        EXPECT_EQ(uni, all);
        for (const auto& f : c.functions) {
            if (f.transfers_currency) EXPECT_TRUE(on.contains(f.name)) << f.name;
        }
    }
}

TEST(Split, Padding) {
    const auto parts = split_and_pad(classify(betting::make_spec(betting::SpecOptions{})));
    EXPECT_EQ(parts.onchain.role, ir::ContractRole::OnChain);
    EXPECT_EQ(parts.offchain.role, ir::ContractRole::OffChain);
    EXPECT_EQ(names(parts.onchain, true), (std::set<std::string>{"deployVerifiedInstance", "enforceDisputeResolution"}));
    EXPECT_EQ(names(parts.offchain, true), (std::set<std::string>{"returnDisputeResolution"}));
    ASSERT_TRUE(parts.onchain.variable("deployedAddr"));
    ASSERT_NE(parts.onchain.find(ir::selector_of(deploy_signature(2))), nullptr);
    EXPECT_EQ(deploy_signature(2), "deployVerifiedInstance(bytes,uint8,bytes32,bytes32,uint8,bytes32,bytes32)");

    // Light code reaches heavy code only through the agreed off-chain result.
    for (const auto& f : parts.onchain.functions) {
        for (const auto& ins : f.body) {
            if (ins.op == Op::CallLocal) EXPECT_NE(parts.onchain.find(ins.selector), nullptr) << f.name;
        }
    }
    bool uses_offchain = false;
    for (const auto& ins : parts.onchain.find("reassign")->body) uses_offchain |= ins.op == Op::OffchainCall;
    EXPECT_TRUE(uses_offchain);

    // Off-chain variables mirror their on-chain origin.
    ASSERT_EQ(parts.offchain.variables.size(), parts.offchain_origin.size());
    for (std::size_t i = 0; i < parts.offchain_origin.size(); ++i) {
        EXPECT_EQ(parts.offchain.variables[i], parts.onchain.variables[parts.offchain_origin[i]]);
    }
    EXPECT_EQ(parts.instance_binding().size(), parts.offchain.constructor_variables().size());
}

TEST(Split, Rejections) {
    const auto spec = betting::make_spec(betting::SpecOptions{});
    EXPECT_THROW(split_and_pad(spec), SplitError);  // unclassified
    auto all_light = classify(spec, {.overrides = {{"reveal", FunctionKind::Light}}});
    EXPECT_THROW(split_and_pad(all_light), SplitError);

    auto heavy_calls_light = classify(betting::make_six_function_spec(), {.overrides = {{"f2", FunctionKind::Light}}});
    EXPECT_THROW(split_and_pad(heavy_calls_light, betting::six_function_padding()), SplitError);

    PaddingConfig bad;
    bad.dispute_after = "T9";
    EXPECT_THROW(split_and_pad(classify(spec), bad), SplitError);
    PaddingConfig bad_result;
    bad_result.result_function = "deposit";
    EXPECT_THROW(split_and_pad(classify(spec), bad_result), SplitError);

    auto reserved = classify(spec);
    reserved.functions[0].name = "enforceDisputeResolution";
    reserved.functions[0].selector = ir::selector_of(reserved.functions[0].signature());
    EXPECT_THROW(split_and_pad(reserved), SplitError);

    const auto parts = split_and_pad(classify(spec));
    EXPECT_THROW(split_and_pad(parts.onchain), SplitError);
}

TEST(Serialize, CanonicalAndCreationCode) {
    const auto parts = split_and_pad(classify(betting::make_spec(betting::SpecOptions{})));
    const Bytes off = serialize_bytecode(parts.offchain);
    EXPECT_EQ(deserialize_bytecode(off), parts.offchain);
    EXPECT_EQ(serialize_bytecode(deserialize_bytecode(off)), off);
    EXPECT_NE(off, serialize_bytecode(parts.onchain));

    std::vector<Word> words;
    for (std::size_t i = 0; i < parts.onchain.constructor_variables().size(); ++i) words.push_back(Word{i + 1});
    const Bytes creation = creation_code(parts.onchain, words);
    const Bytes code = bytecode::encode(parts.onchain, {.include_names = false});
    ASSERT_EQ(creation.size(), code.size() + 32 * words.size());
    EXPECT_TRUE(std::equal(code.begin(), code.end(), creation.begin()));
    EXPECT_EQ(word_from_be(ByteView(creation).subspan(code.size() + 64, 32)), Word{3});
    EXPECT_THROW(creation_code(parts.onchain, {1, 2}), SplitError);
}

class SignerSubsets : public ::testing::TestWithParam<std::uint32_t> {};

TEST_P(SignerSubsets, OnlyFullSetAccepted) {
    const std::uint32_t n = GetParam();
    std::vector<crypto::KeyPair> keys;
    for (std::uint32_t i = 0; i < n; ++i) keys.push_back(crypto::derive_keypair(testing::seed_from(500 + i)));
    const auto outsider = crypto::derive_keypair(testing::seed_from(999));
    const auto parts = split_and_pad(classify(betting::make_spec(betting::SpecOptions{.participants = n})));
    const Bytes code = serialize_bytecode(parts.offchain);
    std::vector<Address> participants;
    for (const auto& k : keys) participants.push_back(k.address);

    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        SignedCopy copy{.bytecode = code};
        for (std::uint32_t i = 0; i < n; ++i) {
            copy.signatures.push_back(crypto::ecsign(copy.digest(), (mask >> i & 1) ? keys[i].secret : outsider.secret));
        }
        const auto verdict = verify_copy(copy, participants);
        EXPECT_EQ(verdict.accepted, mask == (1U << n) - 1) << "mask " << mask;
        if (!verdict.accepted) EXPECT_EQ(mask >> verdict.rejected_index & 1, 0U);
    }
}

INSTANTIATE_TEST_SUITE_P(UpToThree, SignerSubsets, ::testing::Values(2U, 3U));

TEST(SignedCopy, OrderCountAndTampering) {
    const auto d = testing::deploy_n_party(2, testing::params_for_winner(0));
    const auto copy = d.full_copy();
    EXPECT_TRUE(verify_copy(copy, d.participants()).accepted);

    auto swapped = copy;
    std::swap(swapped.signatures[0], swapped.signatures[1]);
    EXPECT_FALSE(verify_copy(swapped, d.participants()).accepted);

    auto short_copy = copy;
    short_copy.signatures.pop_back();
    EXPECT_FALSE(verify_copy(short_copy, d.participants()).accepted);

    auto flipped = copy;
    flipped.bytecode[flipped.bytecode.size() / 3] ^= 0x10;
    EXPECT_FALSE(verify_copy(flipped, d.participants()).accepted);

    EXPECT_THROW(sign_copy(d.offchain_bytecode, {d.keys[0].secret}), SplitError);
    EXPECT_THROW(sign_copy(Bytes{1, 2, 3}, d.secrets()), DecodeError);
}

}  // namespace
}  // namespace hybridsplit::split
