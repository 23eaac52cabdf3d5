// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hybridsplit/bytes.hpp"
#include "hybridsplit/ir.hpp"
#include "hybridsplit/ledger.hpp"
#include "hybridsplit/split.hpp"
#include "hybridsplit/word.hpp"

/// Two-party betting contract: deposits before T1, refunds, payout by the
/// loser in (T2, T3], and signed-copy disputes after T3. reveal() is the
/// private computation that decides the winner.
namespace hybridsplit::betting {

enum class ReassignMode : std::uint8_t {
    LoserOnly,  // reassign() pays out only when called by the loser per reveal()
    Concede,    // any participant may concede the pot to the other one
};

std::string_view to_string(ReassignMode mode);
ReassignMode reassign_mode_from_string(std::string_view text);  // throws ConfigError

struct BettingConfig {
    std::array<Address, 2> participants{};
    Wei deposit_amount = ether(1);
    std::uint64_t T1 = 100;
    std::uint64_t T2 = 200;
    std::uint64_t T3 = 300;
    Bytes reveal_params;
    std::uint32_t reveal_work = 0;  // extra instructions executed by reveal()
    ReassignMode reassign_mode = ReassignMode::LoserOnly;
    Wei penalty_amount{};  // reserved, must stay zero

    /// Throws ConfigError.
    void validate() const;
};

/// Address-independent shape of the contract.
struct SpecOptions {
    std::uint32_t participants = 2;
    Bytes reveal_params;
    std::uint32_t reveal_work = 0;
    ReassignMode reassign_mode = ReassignMode::LoserOnly;
};

/// Unclassified contract. Variables: participants, deposit, T1, T2, T3,
/// accountBalance, resolved.
ir::Contract make_spec(const SpecOptions& options);
ir::Contract make_spec(const BettingConfig& config);

/// f1..f6 where the odd functions move currency and f6 decides the winner.
ir::Contract make_six_function_spec();
split::PaddingConfig six_function_padding();

/// Winner index computed by reveal(): lowest bit of keccak256(params);
/// 1 means participants[1] wins.
std::size_t reveal_winner(ByteView reveal_params);

/// Constructor words of the contract: participants, deposit, T1, T2, T3.
std::vector<Word> constructor_words(const std::vector<Address>& participants, const Wei& deposit, std::uint64_t t1,
                                    std::uint64_t t2, std::uint64_t t3);
std::vector<Word> constructor_words(const BettingConfig& config);

Bytes deposit_payload();
Bytes refund_round_one_payload();
Bytes refund_round_two_payload();
Bytes reassign_payload();
Bytes deploy_verified_instance_payload(const split::SignedCopy& copy);
Bytes enforce_payload(bool winner);
Bytes return_dispute_payload(const Address& onchain);

struct OnChainState {
    std::vector<Wei> balances;  // accountBalance per participant
    Address deployed_addr;
    bool resolved = false;
    Wei contract_balance{};
};

/// Reads the state of a deployed contract with the given layout.
OnChainState read_state(const ledger::Chain& chain, const Address& contract, const ir::Contract& layout);

}  // namespace hybridsplit::betting
