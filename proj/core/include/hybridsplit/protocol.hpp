// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hybridsplit/betting.hpp"
#include "hybridsplit/crypto.hpp"
#include "hybridsplit/ledger.hpp"
#include "hybridsplit/split.hpp"

/// Two-party run of the hybrid mechanism: split, deploy and countersign,
/// submit within the challenge window, dispute afterwards.
namespace hybridsplit::protocol {

enum class Policy : std::uint8_t { Honest, SilentLoser, FalseSubmitter, TamperedCopySubmitter, NonSigner };

inline constexpr std::array kAdversarialPolicies{Policy::SilentLoser, Policy::FalseSubmitter,
                                                 Policy::TamperedCopySubmitter};

std::string_view to_string(Policy p);
Policy policy_from_string(std::string_view text);  // throws ConfigError

enum class Stage : std::uint8_t { SplitGenerate, DeploySign, SubmitChallenge, DisputeResolve, Completed };
enum class Outcome : std::uint8_t { Pending, Completed, Aborted };

std::string_view to_string(Stage s);
std::string_view to_string(Outcome o);
Outcome outcome_from_string(std::string_view text);  // throws ConfigError

/// seed_i = keccak256(master || be32(i)).
crypto::KeyPair agent_keys(const std::array<std::uint8_t, 32>& master_seed, std::size_t index);

struct Agent {
    std::string name;
    crypto::KeyPair keys;
    Policy policy = Policy::Honest;
    std::optional<split::SignedCopy> copy;

    [[nodiscard]] const Address& address() const { return keys.address; }
};

enum class ChannelKind : std::uint8_t { Bytecode, Signature };

struct ChannelMessage {
    ChannelKind kind = ChannelKind::Bytecode;
    std::size_t from = 0;
    std::size_t to = 0;
    Bytes payload;
};

/// Synchronous in-process message log standing in for the participants'
/// private communication.
class OffchainChannel {
  public:
    void send(ChannelMessage message) { log_.push_back(std::move(message)); }
    [[nodiscard]] const std::vector<ChannelMessage>& log() const { return log_; }
    [[nodiscard]] std::vector<const ChannelMessage*> inbox(std::size_t to, ChannelKind kind) const;

  private:
    std::vector<ChannelMessage> log_;
};

enum class Target : std::uint8_t { Create, OnChain, Instance };

/// An on-chain transaction issued during the run.
struct ActionRecord {
    std::size_t tx_index = 0;
    std::size_t agent = 0;
    Stage stage = Stage::SplitGenerate;
    Target target = Target::OnChain;
    std::string function;
    Wei value{};
    Bytes payload;
    std::uint64_t time = 0;
    bool success = false;
    std::uint64_t gas_used = 0;
};

struct StageMarker {
    Stage stage = Stage::SplitGenerate;
    std::size_t tx_count = 0;  // transactions executed when the stage began
    std::uint64_t time = 0;
};

struct RunConfig {
    betting::BettingConfig terms;  // participants are filled in from the agents
    std::array<Policy, 2> policies{Policy::Honest, Policy::Honest};
    std::array<std::uint8_t, 32> master_seed{};
    Wei genesis_wei = ether(100);
    std::optional<ir::Contract> spec;  // replaces the built-in betting contract
    split::PaddingConfig padding;
    split::ClassificationPolicy classification;
};

class ProtocolRun {
  public:
    /// Throws ConfigError for invalid terms.
    explicit ProtocolRun(RunConfig config);

    // Stage operations throw ProtocolError when called out of order. Once the
    // run has completed or aborted, participant actions are no-ops.
    void split_generate();
    /// `deployed` substitutes what the deployer actually puts on chain.
    void deploy_sign(std::size_t deployer, const ir::Contract* deployed = nullptr);
    void deposit(std::size_t agent);
    void refund(std::size_t agent);
    void submit_challenge();
    /// Every agent in participant order, as its policy dictates.
    void dispute_resolve();
    /// One dispute attempt; true once the pot has been paid.
    bool dispute(std::size_t disputant, bool tampered_copy = false);
    void advance_time(std::int64_t delta);

    [[nodiscard]] Stage stage() const { return stage_; }
    [[nodiscard]] Outcome outcome() const { return outcome_; }
    [[nodiscard]] const std::string& abort_reason() const { return abort_reason_; }
    /// Agent that received the pot.
    [[nodiscard]] std::optional<std::size_t> winner() const { return winner_; }
    /// Result of the agreed off-chain computation (winner index), evaluated
    /// on the signed copy at the current time.
    [[nodiscard]] std::optional<std::size_t> agreed_result() const;

    [[nodiscard]] const RunConfig& config() const { return config_; }
    [[nodiscard]] const std::vector<Agent>& agents() const { return agents_; }
    [[nodiscard]] const ledger::Chain& chain() const { return chain_; }
    [[nodiscard]] ledger::Chain& mutable_chain() { return chain_; }
    [[nodiscard]] const OffchainChannel& channel() const { return channel_; }
    [[nodiscard]] const std::vector<ActionRecord>& actions() const { return actions_; }
    [[nodiscard]] const std::vector<StageMarker>& stages() const { return stages_; }
    [[nodiscard]] const ir::Contract& spec() const { return spec_; }
    [[nodiscard]] const std::optional<split::SplitResult>& artifacts() const { return artifacts_; }
    [[nodiscard]] const std::optional<Address>& onchain_address() const { return onchain_; }
    [[nodiscard]] std::optional<Address> instance_address() const;
    [[nodiscard]] const std::vector<Word>& constructor_words() const { return ctor_words_; }
    [[nodiscard]] std::vector<Address> participant_addresses() const;

  private:
    ledger::Receipt send(std::size_t agent, Target target, const std::string& function, const Wei& value, Bytes payload);
    void enter(Stage s);
    void abort(std::string reason);
    void require_stage_at_least(Stage s, const char* op) const;
    [[nodiscard]] bool active() const { return outcome_ == Outcome::Pending; }
    [[nodiscard]] std::optional<std::size_t> evaluate_for(std::size_t agent) const;
    [[nodiscard]] ledger::OffchainReference reference_from(const split::SignedCopy& copy) const;
    void note_payout(const ledger::Receipt& receipt);

    RunConfig config_;
    std::vector<Agent> agents_;
    ledger::Chain chain_;
    OffchainChannel channel_;
    ir::Contract spec_;
    std::optional<split::SplitResult> artifacts_;
    std::optional<Address> onchain_;
    std::vector<Word> ctor_words_;
    std::vector<ActionRecord> actions_;
    std::vector<StageMarker> stages_;
    Stage stage_ = Stage::SplitGenerate;
    Outcome outcome_ = Outcome::Pending;
    std::string abort_reason_;
    std::optional<std::size_t> winner_;
};

/// Copy with one bytecode byte flipped; signatures untouched.
split::SignedCopy tamper(const split::SignedCopy& copy);

}  // namespace hybridsplit::protocol
