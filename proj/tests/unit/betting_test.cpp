// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#include <set>

#include <gtest/gtest.h>

#include "harness.hpp"
#include "hybridsplit/abi.hpp"
#include "hybridsplit/betting.hpp"
#include "hybridsplit/error.hpp"

namespace hybridsplit::betting {
namespace {

using testing::call;
using testing::Deployment;

Wei sum(const std::vector<Wei>& v) {
    Wei s = 0;
    for (const auto& x : v) s += x;
    return s;
}

void expect_funds_safe(const Deployment& d) {
    const auto st = read_state(d.chain, d.onchain, d.parts.onchain);
    EXPECT_EQ(st.contract_balance, sum(st.balances));
    EXPECT_EQ(st.contract_balance, d.chain.balance(d.onchain));
}

// Submits and checks that a reverted call changed nothing but nonce and fee.
ledger::Receipt call_checked(Deployment& d, const Address& from, const Address& to, Bytes payload, const Wei& value = 0) {
    const auto before = d.chain.accounts();
    auto r = call(d.chain, from, to, std::move(payload), value);
    if (!r.ok()) {
        EXPECT_EQ(d.chain.accounts(), testing::expected_after_revert(before, from, r.gas_used, d.chain.gas_price()));
    }
    return r;
}

TEST(Config, Validation) {
    BettingConfig c;
    c.participants = {crypto::derive_keypair(testing::seed_from(1)).address, crypto::derive_keypair(testing::seed_from(2)).address};
    EXPECT_NO_THROW(c.validate());
    auto bad = c;
    bad.T2 = bad.T1;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = c;
    bad.T1 = 0;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = c;
    bad.participants[1] = bad.participants[0];
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = c;
    bad.deposit_amount = 0;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = c;
    bad.penalty_amount = 1;
    EXPECT_THROW(bad.validate(), ConfigError);
    EXPECT_THROW(reassign_mode_from_string("sometimes"), ConfigError);
    EXPECT_EQ(reassign_mode_from_string(to_string(ReassignMode::Concede)), ReassignMode::Concede);
}

TEST(Reveal, WinnerIsLowBitOfDigest) {
    for (unsigned i = 0; i < 32; ++i) {
        const Bytes p{static_cast<std::uint8_t>(i)};
        EXPECT_EQ(reveal_winner(p), crypto::keccak256(ByteView(p)).bytes[31] & 1U);
    }
}

TEST(Deposit, Guards) {
    auto d = testing::deploy_n_party(2, testing::params_for_winner(0), 100, false);
    const auto& alice = d.keys[0].address;
    const Wei stake = d.terms.deposit_amount;
    EXPECT_FALSE(call_checked(d, alice, d.onchain, deposit_payload(), stake - 1).ok());
    EXPECT_FALSE(call_checked(d, alice, d.onchain, deposit_payload(), 0).ok());
    EXPECT_FALSE(call_checked(d, d.outsider.address, d.onchain, deposit_payload(), stake).ok());
    EXPECT_TRUE(call_checked(d, alice, d.onchain, deposit_payload(), stake).ok());
    EXPECT_FALSE(call_checked(d, alice, d.onchain, deposit_payload(), stake).ok());
    expect_funds_safe(d);
    d.chain.advance_time(static_cast<std::int64_t>(d.terms.T1));  // now == T1 is still in time
    EXPECT_TRUE(call_checked(d, d.keys[1].address, d.onchain, deposit_payload(), stake).ok());
    d.chain.advance_time(1);
    EXPECT_FALSE(call_checked(d, d.keys[1].address, d.onchain, refund_round_one_payload()).ok());
    expect_funds_safe(d);
}

TEST(Refund, RoundsAndAmountGuard) {
    auto d = testing::deploy_n_party(2, testing::params_for_winner(0), 100, false);
    const auto& alice = d.keys[0].address;
    const Wei stake = d.terms.deposit_amount;
    ASSERT_TRUE(call_checked(d, alice, d.onchain, deposit_payload(), stake).ok());
    ASSERT_TRUE(call_checked(d, alice, d.onchain, refund_round_one_payload()).ok());
    expect_funds_safe(d);
    EXPECT_EQ(d.chain.balance(d.onchain), Wei{0});
    ASSERT_TRUE(call_checked(d, alice, d.onchain, deposit_payload(), stake).ok());

    // Round two only between T1 and T2, and only while the stakes are unmatched.
    EXPECT_FALSE(call_checked(d, alice, d.onchain, refund_round_two_payload()).ok());
    d.chain.advance_time(static_cast<std::int64_t>(d.terms.T1) + 1);
    EXPECT_FALSE(call_checked(d, d.outsider.address, d.onchain, refund_round_two_payload()).ok());
    EXPECT_TRUE(call_checked(d, alice, d.onchain, refund_round_two_payload()).ok());
    expect_funds_safe(d);
    EXPECT_EQ(d.chain.balance(d.onchain), Wei{0});

    auto full = testing::deploy_n_party(2, testing::params_for_winner(0), 100, true);
    EXPECT_FALSE(call_checked(full, full.keys[0].address, full.onchain, refund_round_two_payload()).ok());
}

TEST(Reassign, LoserOnlyPaysWinnerOnce) {
    for (std::size_t winner : {0U, 1U}) {
        auto d = testing::deploy_n_party(2, testing::params_for_winner(winner), 100, false);
        for (const auto& k : d.keys) ASSERT_TRUE(call(d.chain, k.address, d.onchain, deposit_payload(), d.terms.deposit_amount).ok());
        EXPECT_FALSE(call_checked(d, d.keys[1 - winner].address, d.onchain, reassign_payload()).ok());  // before T2
        d.chain.advance_time(static_cast<std::int64_t>(d.terms.T2) + 1);

        const std::size_t loser = 1 - winner;
        EXPECT_FALSE(call_checked(d, d.keys[winner].address, d.onchain, reassign_payload()).ok());
        EXPECT_FALSE(call_checked(d, d.outsider.address, d.onchain, reassign_payload()).ok());
        const Wei before = d.chain.balance(d.keys[winner].address);
        const auto r = call_checked(d, d.keys[loser].address, d.onchain, reassign_payload());
        ASSERT_TRUE(r.ok()) << r.revert_reason;
        EXPECT_EQ(d.chain.balance(d.keys[winner].address), before + 2 * d.terms.deposit_amount);
        expect_funds_safe(d);
        EXPECT_TRUE(read_state(d.chain, d.onchain, d.parts.onchain).resolved);
        EXPECT_FALSE(call_checked(d, d.keys[loser].address, d.onchain, reassign_payload()).ok());

        d.chain.advance_time(static_cast<std::int64_t>(d.terms.T3));
        // The pot is gone, so the dispute path stays closed.
        EXPECT_FALSE(call_checked(d, d.keys[0].address, d.onchain, deploy_verified_instance_payload(d.full_copy())).ok());
        EXPECT_EQ(d.chain.balance(d.onchain), Wei{0});
    }
}

TEST(Reassign, ConcedeMode) {
    auto d = testing::deploy_n_party(2, testing::params_for_winner(0), 100, false, ReassignMode::Concede);
    for (const auto& k : d.keys) ASSERT_TRUE(call(d.chain, k.address, d.onchain, deposit_payload(), d.terms.deposit_amount).ok());
    d.chain.advance_time(static_cast<std::int64_t>(d.terms.T2) + 1);
    const Wei before = d.chain.balance(d.keys[0].address);
    ASSERT_TRUE(call_checked(d, d.keys[1].address, d.onchain, reassign_payload()).ok());
    EXPECT_EQ(d.chain.balance(d.keys[0].address), before + 2 * d.terms.deposit_amount);
}

TEST(Dispute, VerifiedInstancePaysAgreedWinner) {
    for (std::size_t winner : {0U, 1U}) {
        auto d = testing::deploy_n_party(2, testing::params_for_winner(winner, 3));
        const auto copy = d.full_copy();
        const auto payload = deploy_verified_instance_payload(copy);
        EXPECT_FALSE(call_checked(d, d.outsider.address, d.onchain, payload).ok());
        const auto r = call_checked(d, d.keys[1].address, d.onchain, payload);
        ASSERT_TRUE(r.ok()) << r.revert_reason;
        const auto st = read_state(d.chain, d.onchain, d.parts.onchain);
        ASSERT_FALSE(st.deployed_addr.is_zero());
        EXPECT_EQ(st.deployed_addr, crypto::contract_address(d.onchain, 1));
        EXPECT_FALSE(call_checked(d, d.keys[0].address, d.onchain, payload).ok());  // only once

        // Only the verified instance may enforce.
        for (bool w : {false, true}) {
            EXPECT_FALSE(call_checked(d, d.keys[0].address, d.onchain, enforce_payload(w)).ok());
        }
        // The instance's reveal() is private.
        EXPECT_FALSE(call_checked(d, d.keys[0].address, st.deployed_addr, abi::encode_call("reveal()", {})).ok());
        EXPECT_FALSE(call_checked(d, d.outsider.address, st.deployed_addr, return_dispute_payload(d.onchain)).ok());

        const Wei before = d.chain.balance(d.keys[winner].address);
        const auto payout = call_checked(d, d.keys[0].address, st.deployed_addr, return_dispute_payload(d.onchain));
        ASSERT_TRUE(payout.ok()) << payout.revert_reason;
        const Wei fee = Wei{payout.gas_used} * d.chain.gas_price();
        EXPECT_EQ(d.chain.balance(d.keys[winner].address) + (winner == 0 ? fee : Wei{0}),
                  before + 2 * d.terms.deposit_amount);
        expect_funds_safe(d);
        EXPECT_FALSE(call_checked(d, d.keys[0].address, st.deployed_addr, return_dispute_payload(d.onchain)).ok());
    }
}

TEST(Dispute, ClonesCannotEnforce) {
    auto d = testing::deploy_n_party(2, testing::params_for_winner(1));
    // The outsider deploys the same off-chain code with itself as a participant.
    std::vector<Word> words{word_from_address(d.outsider.address), word_from_address(d.keys[1].address)};
    for (std::size_t i = words.size(); i < d.parts.instance_binding().size(); ++i) {
        words.push_back(d.chain.storage(d.onchain, Word{d.parts.instance_binding()[i]}));
    }
    Bytes creation = d.offchain_bytecode;
    for (const auto& w : words) {
        const auto be = to_be32(w);
        creation.insert(creation.end(), be.begin(), be.end());
    }
    const auto r = d.chain.submit({.from = d.outsider.address, .payload = creation});
    ASSERT_TRUE(r.ok()) << r.revert_reason;
    const auto before = d.chain.balance(d.outsider.address);
    const auto attempt = call_checked(d, d.outsider.address, *r.created_address, return_dispute_payload(d.onchain));
    EXPECT_FALSE(attempt.ok());
    EXPECT_EQ(d.chain.balance(d.onchain), 2 * d.terms.deposit_amount);
    EXPECT_LT(d.chain.balance(d.outsider.address), before);
}

TEST(Dispute, GuardsOnDeployment) {
    auto d = testing::deploy_n_party(2, testing::params_for_winner(0), 100, false);
    const auto payload = deploy_verified_instance_payload(d.full_copy());
    for (const auto& k : d.keys) ASSERT_TRUE(call(d.chain, k.address, d.onchain, deposit_payload(), d.terms.deposit_amount).ok());
    d.chain.advance_time(static_cast<std::int64_t>(d.terms.T3 - d.chain.now()));
    ASSERT_EQ(d.chain.now(), d.terms.T3);
    EXPECT_FALSE(call_checked(d, d.keys[0].address, d.onchain, payload).ok());
    d.chain.advance_time(1);
    EXPECT_TRUE(call_checked(d, d.keys[0].address, d.onchain, payload).ok());

    // Unmatched stakes block the dispute path.
    auto half = testing::deploy_n_party(2, testing::params_for_winner(0), 100, false);
    ASSERT_TRUE(call(half.chain, half.keys[0].address, half.onchain, deposit_payload(), half.terms.deposit_amount).ok());
    half.chain.advance_time(static_cast<std::int64_t>(half.terms.T3) + 1);
    EXPECT_FALSE(call_checked(half, half.keys[0].address, half.onchain, deploy_verified_instance_payload(half.full_copy())).ok());
}

TEST(Dispute, RevealConsistency) {
    for (std::uint8_t salt = 0; salt < 12; ++salt) {
        const Bytes params{salt, 0x5a, salt};
        auto d = testing::deploy_n_party(2, params, 300);
        const auto& ref = d.chain.attachments().back().reference;
        const auto offchain = d.chain.evaluate_offchain(ref, ir::selector_of("reveal()"), d.keys[0].address);
        ASSERT_TRUE(offchain);
        EXPECT_EQ(*offchain, Word{reveal_winner(params)});

        ASSERT_TRUE(call(d.chain, d.keys[0].address, d.onchain, deploy_verified_instance_payload(d.full_copy())).ok());
        const auto st = read_state(d.chain, d.onchain, d.parts.onchain);
        const auto r = call(d.chain, d.keys[1].address, st.deployed_addr, return_dispute_payload(d.onchain));
        ASSERT_TRUE(r.ok());
        std::optional<Address> paid;
        for (const auto& m : r.messages) {
            if (m.kind == ledger::MessageKind::Transfer) paid = m.to;
        }
        ASSERT_TRUE(paid);
        EXPECT_EQ(*paid, d.keys[reveal_winner(params)].address);
    }
}

TEST(SixFunction, SplitsAndDisputes) {
    const auto parts = split::split_and_pad(split::classify(make_six_function_spec()), six_function_padding());
    std::set<std::string> on;
    for (const auto& f : parts.onchain.functions) on.insert(f.name);
    EXPECT_TRUE(on.contains("f1") && on.contains("f3") && on.contains("f5"));
    for (const auto& f : parts.offchain.functions) EXPECT_NE(f.name, "f1");
}

}  // namespace
}  // namespace hybridsplit::betting
