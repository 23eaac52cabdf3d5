// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hybridsplit/bytes.hpp"
#include "hybridsplit/crypto.hpp"
#include "hybridsplit/ir.hpp"

/// Splitting a contract into an on-chain part (light functions) and an
/// off-chain part (heavy functions), padding both with the dispute
/// functions, and the signed copy exchanged between participants.
namespace hybridsplit::split {

inline constexpr std::string_view kDeployVerifiedInstance = "deployVerifiedInstance";
inline constexpr std::string_view kEnforceDisputeResolution = "enforceDisputeResolution";
inline constexpr std::string_view kReturnDisputeResolution = "returnDisputeResolution";
inline constexpr std::string_view kEnforceSignature = "enforceDisputeResolution(bool)";
inline constexpr std::string_view kReturnSignature = "returnDisputeResolution(address)";

/// deployVerifiedInstance(bytes,uint8,bytes32,bytes32,...) for n signers.
std::string deploy_signature(std::uint32_t participants);

struct ClassificationPolicy {
    std::map<std::string, ir::FunctionKind> overrides;
};

/// Default rule: currency-transferring functions are light, the rest heavy.
/// Overrides win. Throws SplitError for an override naming no function.
ir::Contract classify(ir::Contract spec, const ClassificationPolicy& policy = {});

/// Names the template functions rely on.
struct PaddingConfig {
    std::string dispute_after = "T3";          // disputes open strictly after this time
    std::string deposit = "deposit";           // expected per-participant stake
    std::string balances = "accountBalance";   // participant -> recorded stake
    std::string resolved = "resolved";         // nonzero once the pot is paid
    std::string result_function = "reveal";    // heavy, no inputs; returns winner index
    std::string deployed_addr = "deployedAddr";  // added to the on-chain part
};

struct SplitResult {
    ir::Contract onchain;
    ir::Contract offchain;
    /// On-chain variable backing each off-chain variable.
    std::vector<std::uint32_t> offchain_origin;

    /// On-chain variables whose values become the verified instance's
    /// constructor words, in order.
    [[nodiscard]] std::vector<std::uint32_t> instance_binding() const;
};

/// Throws SplitError when a function is unclassified, nothing is heavy, a
/// heavy function depends on a light one, or a padding name does not resolve.
SplitResult split_and_pad(const ir::Contract& spec, const PaddingConfig& padding = {});

/// Pays the whole recorded pot to participant[index] where index is on top
/// of the stack: sums the balances into a temporary, zeroes them, marks the
/// contract resolved, then transfers.
ir::Body payout_to_index(std::uint32_t participant_count, std::uint32_t balances, std::uint32_t resolved);

/// Canonical signed form of the off-chain part (identifiers included).
Bytes serialize_bytecode(const ir::Contract& artifact);
ir::Contract deserialize_bytecode(ByteView code);

/// Creation payload for the on-chain part: code without identifiers,
/// followed by one 32-byte word per constructor variable.
Bytes creation_code(const ir::Contract& onchain, const std::vector<Word>& constructor_words);

struct SignedCopy {
    Bytes bytecode;
    std::vector<crypto::Signature> signatures;

    [[nodiscard]] Hash32 digest() const;
    bool operator==(const SignedCopy&) const = default;
};

/// One key per participant, in participant order. Throws SplitError on a
/// count mismatch and DecodeError on malformed bytecode.
SignedCopy sign_copy(const Bytes& bytecode, const std::vector<crypto::PrivateKey>& keys);

struct Verdict {
    bool accepted = false;
    std::size_t rejected_index = 0;  // first failing signature when rejected
};

Verdict verify_copy(const SignedCopy& copy, const std::vector<Address>& participants);

}  // namespace hybridsplit::split
