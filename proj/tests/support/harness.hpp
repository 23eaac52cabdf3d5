// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hybridsplit/betting.hpp"
#include "hybridsplit/crypto.hpp"
#include "hybridsplit/ledger.hpp"
#include "hybridsplit/protocol.hpp"
#include "hybridsplit/scenario.hpp"
#include "hybridsplit/split.hpp"

namespace hybridsplit::testing {

/// Short reveal parameters for which reveal() picks `winner`.
Bytes params_for_winner(std::size_t winner, std::uint8_t salt = 0);

std::array<std::uint8_t, 32> seed_from(std::uint64_t n);

/// Default two-party scenario with the given policies and reveal parameters.
scenario::ScenarioFile basic_scenario(protocol::Policy alice, protocol::Policy bob, const Bytes& reveal_params,
                                      std::uint32_t reveal_work = 0);

/// n-party betting contract deployed directly on a chain. With `settle`,
/// every participant has deposited and the clock is past T3; otherwise the
/// clock is at 0 and nothing is deposited. `outsider` is funded and is not a participant.
struct Deployment {
    std::vector<crypto::KeyPair> keys;
    crypto::KeyPair outsider;
    betting::BettingConfig terms;
    split::SplitResult parts;
    Bytes offchain_bytecode;
    ledger::Chain chain;
    Address onchain;

    [[nodiscard]] std::vector<Address> participants() const;
    [[nodiscard]] std::vector<crypto::PrivateKey> secrets() const;
    /// Copy where only participants flagged in `signers` sign; the others'
    /// slots carry the outsider's signature over the same digest.
    [[nodiscard]] split::SignedCopy copy_signed_by(const std::vector<bool>& signers) const;
    [[nodiscard]] split::SignedCopy full_copy() const;
};

Deployment deploy_n_party(std::uint32_t n, const Bytes& reveal_params, std::uint64_t key_base = 100,
                          bool settle = true,
                          betting::ReassignMode mode = betting::ReassignMode::LoserOnly);

ledger::Receipt call(ledger::Chain& chain, const Address& from, const Address& to, Bytes payload,
                     const Wei& value = 0);

/// Accounts map with `sender`'s nonce bumped and the receipt's fee deducted,
/// which is what a reverted transaction must leave behind.
std::map<Address, ledger::Account> expected_after_revert(std::map<Address, ledger::Account> before,
                                                         const Address& sender, std::uint64_t gas_used,
                                                         const Wei& gas_price);

Wei total_value(const ledger::Chain& chain);

}  // namespace hybridsplit::testing
