// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#include "hybridsplit/protocol.hpp"

#include "hybridsplit/bytecode.hpp"
#include "hybridsplit/error.hpp"

namespace hybridsplit::protocol {

namespace {

Bytes encode_signature(const crypto::Signature& sig) {
    Bytes out{sig.v};
    out.insert(out.end(), sig.r.begin(), sig.r.end());
    out.insert(out.end(), sig.s.begin(), sig.s.end());
    return out;
}

std::optional<crypto::Signature> decode_signature(const Bytes& b) {
    if (b.size() != 65) return std::nullopt;
    crypto::Signature sig{.v = b[0]};
    std::copy(b.begin() + 1, b.begin() + 33, sig.r.begin());
    std::copy(b.begin() + 33, b.end(), sig.s.begin());
    return sig;
}

}  // namespace

std::string_view to_string(Policy p) {
    switch (p) {
        case Policy::Honest:
            return "honest";
        case Policy::SilentLoser:
            return "silent_loser";
        case Policy::FalseSubmitter:
            return "false_submitter";
        case Policy::TamperedCopySubmitter:
            return "tampered_copy_submitter";
        case Policy::NonSigner:
            return "non_signer";
    }
    return "unknown";
}

Policy policy_from_string(std::string_view text) {
    for (Policy p : {Policy::Honest, Policy::SilentLoser, Policy::FalseSubmitter, Policy::TamperedCopySubmitter,
                     Policy::NonSigner}) {
        if (to_string(p) == text) return p;
    }
    throw ConfigError("unknown policy '" + std::string(text) + "'");
}

std::string_view to_string(Stage s) {
    switch (s) {
        case Stage::SplitGenerate:
            return "split_generate";
        case Stage::DeploySign:
            return "deploy_sign";
        case Stage::SubmitChallenge:
            return "submit_challenge";
        case Stage::DisputeResolve:
            return "dispute_resolve";
        case Stage::Completed:
            return "completed";
    }
    return "unknown";
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::Pending:
            return "pending";
        case Outcome::Completed:
            return "completed";
        case Outcome::Aborted:
            return "aborted";
    }
    return "unknown";
}

Outcome outcome_from_string(std::string_view text) {
    for (Outcome o : {Outcome::Pending, Outcome::Completed, Outcome::Aborted}) {
        if (to_string(o) == text) return o;
    }
    throw ConfigError("unknown outcome '" + std::string(text) + "'");
}

crypto::KeyPair agent_keys(const std::array<std::uint8_t, 32>& master_seed, std::size_t index) {
    Bytes buf(master_seed.begin(), master_seed.end());
    const auto idx = to_be32(Word{index});
    buf.insert(buf.end(), idx.begin(), idx.end());
    return crypto::derive_keypair(crypto::keccak256(buf).bytes);
}

std::vector<const ChannelMessage*> OffchainChannel::inbox(std::size_t to, ChannelKind kind) const {
    std::vector<const ChannelMessage*> out;
    for (const auto& m : log_) {
        if (m.to == to && m.kind == kind) out.push_back(&m);
    }
    return out;
}

split::SignedCopy tamper(const split::SignedCopy& copy) {
    split::SignedCopy out = copy;
    if (!out.bytecode.empty()) out.bytecode[out.bytecode.size() / 2] ^= 0x01;
    return out;
}

ProtocolRun::ProtocolRun(RunConfig config) : config_(std::move(config)) {
    static const std::array<const char*, 2> kNames{"alice", "bob"};
    std::vector<ledger::GenesisEntry> genesis;
    for (std::size_t i = 0; i < 2; ++i) {
        Agent a{.name = kNames[i], .keys = agent_keys(config_.master_seed, i), .policy = config_.policies[i]};
        config_.terms.participants[i] = a.address();
        genesis.push_back({a.address(), config_.genesis_wei});
        agents_.push_back(std::move(a));
    }
    config_.terms.validate();
    chain_ = ledger::Chain(std::move(genesis));
    spec_ = config_.spec ? *config_.spec : betting::make_spec(config_.terms);
    if (spec_.participant_count != agents_.size()) throw ConfigError("contract must have exactly two participants");
    stages_.push_back({Stage::SplitGenerate, 0, chain_.now()});
}

std::vector<Address> ProtocolRun::participant_addresses() const {
    std::vector<Address> out;
    for (const auto& a : agents_) out.push_back(a.address());
    return out;
}

void ProtocolRun::enter(Stage s) {
    if (s < stage_) throw ProtocolError("stage regression");
    if (s == stage_) return;
    stage_ = s;
    stages_.push_back({s, chain_.history().size(), chain_.now()});
}

void ProtocolRun::abort(std::string reason) {
    outcome_ = Outcome::Aborted;
    abort_reason_ = std::move(reason);
}

void ProtocolRun::require_stage_at_least(Stage s, const char* op) const {
    if (stage_ < s) {
        throw ProtocolError(std::string(op) + " is not allowed during " + std::string(to_string(stage_)));
    }
}

void ProtocolRun::advance_time(std::int64_t delta) { chain_.advance_time(delta); }

ledger::Receipt ProtocolRun::send(std::size_t agent, Target target, const std::string& function, const Wei& value,
                                  Bytes payload) {
    ledger::Transaction tx{.from = agents_.at(agent).address(), .value = value, .payload = std::move(payload)};
    if (target == Target::OnChain) tx.to = onchain_;
    if (target == Target::Instance) tx.to = instance_address();
    if (target != Target::Create && !tx.to) throw ProtocolError(function + ": no target contract");
    const std::size_t index = chain_.history().size();
    ledger::Receipt receipt;
    try {
        receipt = chain_.submit(tx);
    } catch (const TransactionRejected& e) {
        throw ProtocolError(agents_[agent].name + " cannot send " + function + ": " + e.what());
    }
    actions_.push_back(ActionRecord{.tx_index = index,
                                    .agent = agent,
                                    .stage = stage_,
                                    .target = target,
                                    .function = function,
                                    .value = value,
                                    .payload = tx.payload,
                                    .time = chain_.now(),
                                    .success = receipt.ok(),
                                    .gas_used = receipt.gas_used});
    return receipt;
}

void ProtocolRun::split_generate() {
    if (stage_ != Stage::SplitGenerate) throw ProtocolError("split already generated");
    artifacts_ = split::split_and_pad(split::classify(spec_, config_.classification), config_.padding);
    enter(Stage::DeploySign);
}

ledger::OffchainReference ProtocolRun::reference_from(const split::SignedCopy& copy) const {
    ledger::OffchainReference ref;
    ref.contract = std::make_shared<const ir::Contract>(split::deserialize_bytecode(copy.bytecode));
    for (std::uint32_t v : artifacts_->instance_binding()) ref.init_words.push_back(chain_.storage(*onchain_, Word{v}));
    return ref;
}

void ProtocolRun::deploy_sign(std::size_t deployer, const ir::Contract* deployed) {
    if (stage_ != Stage::DeploySign) throw ProtocolError("deploy_sign requires the deploy_sign stage");
    if (!active()) return;
    if (deployer >= agents_.size()) throw ProtocolError("unknown deployer");

    const ir::Contract& onchain = artifacts_->onchain;
    ctor_words_ = betting::constructor_words(participant_addresses(), config_.terms.deposit_amount, config_.terms.T1,
                                             config_.terms.T2, config_.terms.T3);
    if (onchain.constructor_variables().size() != ctor_words_.size()) {
        throw ConfigError("contract constructor does not take participants, deposit, T1, T2, T3");
    }
    const ir::Contract& code = deployed ? *deployed : onchain;
    const auto receipt = send(deployer, Target::Create, "create", 0, split::creation_code(code, ctor_words_));
    if (!receipt.ok()) {
        abort("deployment reverted: " + receipt.revert_reason);
        return;
    }
    onchain_ = receipt.created_address;

    // The deployer circulates the off-chain bytecode, every participant
    // countersigns it, and signatures go to everyone.
    const Bytes bytecode = split::serialize_bytecode(artifacts_->offchain);
    for (std::size_t j = 0; j < agents_.size(); ++j) {
        if (j != deployer) channel_.send({ChannelKind::Bytecode, deployer, j, bytecode});
    }
    std::vector<Bytes> received(agents_.size());
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        if (i == deployer) {
            received[i] = bytecode;
        } else {
            const auto inbox = channel_.inbox(i, ChannelKind::Bytecode);
            if (inbox.empty()) {
                abort(agents_[i].name + " received no bytecode");
                return;
            }
            received[i] = inbox.back()->payload;
        }
        if (agents_[i].policy == Policy::NonSigner) {
            abort(agents_[i].name + " refused to sign");
            return;
        }
        // Everyone splits the same contract, so the bytes must match.
        if (received[i] != bytecode) {
            abort(agents_[i].name + " received bytecode that differs from the agreed split");
            return;
        }
        const auto sig = crypto::ecsign(crypto::keccak256(received[i]), agents_[i].keys.secret);
        for (std::size_t j = 0; j < agents_.size(); ++j) {
            if (j != i) channel_.send({ChannelKind::Signature, i, j, encode_signature(sig)});
        }
        agents_[i].copy = split::SignedCopy{.bytecode = received[i], .signatures = std::vector<crypto::Signature>(agents_.size())};
        agents_[i].copy->signatures[i] = sig;
    }
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        for (const auto* m : channel_.inbox(i, ChannelKind::Signature)) {
            if (auto sig = decode_signature(m->payload)) agents_[i].copy->signatures[m->from] = *sig;
        }
        const auto verdict = split::verify_copy(*agents_[i].copy, participant_addresses());
        if (!verdict.accepted) {
            abort(agents_[i].name + " rejected the signed copy at signature " + std::to_string(verdict.rejected_index));
            return;
        }
    }

    const Hash32 expected_code = crypto::keccak256(bytecode::encode(onchain, {.include_names = false}));
    const ledger::Account* acct = chain_.account(*onchain_);
    const auto ctor_vars = onchain.constructor_variables();
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        if (i == deployer) continue;
        bool matches = acct != nullptr && acct->code_hash == expected_code;
        for (std::size_t k = 0; matches && k < ctor_vars.size(); ++k) {
            matches = chain_.storage(*onchain_, Word{ctor_vars[k]}) == ctor_words_[k];
        }
        if (!matches) {
            abort(agents_[i].name + " found the on-chain contract does not match the agreed split");
            return;
        }
    }

    chain_.attach_offchain_reference(*onchain_, reference_from(*agents_[0].copy));
    enter(Stage::SubmitChallenge);
}

void ProtocolRun::deposit(std::size_t agent) {
    if (!active()) return;
    require_stage_at_least(Stage::SubmitChallenge, "deposit");
    send(agent, Target::OnChain, "deposit", config_.terms.deposit_amount, betting::deposit_payload());
}

void ProtocolRun::refund(std::size_t agent) {
    if (!active()) return;
    require_stage_at_least(Stage::SubmitChallenge, "refund");
    if (chain_.now() <= config_.terms.T1) {
        send(agent, Target::OnChain, "refundRoundOne", 0, betting::refund_round_one_payload());
    } else {
        send(agent, Target::OnChain, "refundRoundTwo", 0, betting::refund_round_two_payload());
    }
}

std::optional<std::size_t> ProtocolRun::evaluate_for(std::size_t agent) const {
    if (!agents_[agent].copy || !onchain_) return std::nullopt;
    const ir::FunctionSpec* fn = spec_.find(config_.padding.result_function);
    if (fn == nullptr) return std::nullopt;
    const auto r = chain_.evaluate_offchain(reference_from(*agents_[agent].copy), fn->selector, agents_[agent].address());
    if (!r || *r >= agents_.size()) return std::nullopt;
    return static_cast<std::size_t>(*r);
}

std::optional<std::size_t> ProtocolRun::agreed_result() const {
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        if (auto r = evaluate_for(i)) return r;
    }
    return std::nullopt;
}

std::optional<Address> ProtocolRun::instance_address() const {
    if (!onchain_ || !artifacts_) return std::nullopt;
    const auto var = artifacts_->onchain.variable(config_.padding.deployed_addr);
    if (!var) return std::nullopt;
    const Word w = chain_.storage(*onchain_, Word{*var});
    if (w == 0) return std::nullopt;
    return address_from_word(w);
}

void ProtocolRun::note_payout(const ledger::Receipt& receipt) {
    if (!receipt.ok()) return;
    for (const auto& m : receipt.messages) {
        if (m.kind != ledger::MessageKind::Transfer || m.from != *onchain_ || m.value == 0) continue;
        for (std::size_t i = 0; i < agents_.size(); ++i) {
            if (agents_[i].address() == m.to) winner_ = i;
        }
    }
    if (winner_) {
        enter(Stage::Completed);
        outcome_ = Outcome::Completed;
    }
}

void ProtocolRun::submit_challenge() {
    if (!active()) return;
    require_stage_at_least(Stage::SubmitChallenge, "submit");
    for (std::size_t i = 0; i < agents_.size() && !winner_; ++i) {
        const auto result = evaluate_for(i);
        if (!result) continue;
        const bool loser = *result != i;
        bool submits = false;
        switch (agents_[i].policy) {
            case Policy::Honest:
            case Policy::NonSigner:
                submits = loser;
                break;
            case Policy::FalseSubmitter:
                // Acts on the flipped outcome: the true winner believes it lost.
                submits = !loser;
                break;
            case Policy::SilentLoser:
            case Policy::TamperedCopySubmitter:
                break;
        }
        if (submits) note_payout(send(i, Target::OnChain, "reassign", 0, betting::reassign_payload()));
    }
}

bool ProtocolRun::dispute(std::size_t disputant, bool tampered_copy) {
    if (!active()) return winner_.has_value();
    require_stage_at_least(Stage::SubmitChallenge, "dispute");
    if (stage_ == Stage::SubmitChallenge && chain_.now() > config_.terms.T3) enter(Stage::DisputeResolve);
    const Agent& agent = agents_.at(disputant);
    if (!agent.copy) return false;
    if (!instance_address()) {
        const split::SignedCopy copy = tampered_copy ? tamper(*agent.copy) : *agent.copy;
        const auto receipt = send(disputant, Target::OnChain,
                                  std::string(split::kDeployVerifiedInstance), 0,
                                  betting::deploy_verified_instance_payload(copy));
        if (!receipt.ok()) return false;
    }
    note_payout(send(disputant, Target::Instance, std::string(split::kReturnDisputeResolution), 0,
                     betting::return_dispute_payload(*onchain_)));
    return winner_.has_value();
}

void ProtocolRun::dispute_resolve() {
    if (!active()) return;
    require_stage_at_least(Stage::SubmitChallenge, "dispute");
    if (stage_ == Stage::SubmitChallenge && chain_.now() > config_.terms.T3) enter(Stage::DisputeResolve);
    for (std::size_t i = 0; i < agents_.size() && !winner_; ++i) {
        const auto result = evaluate_for(i);
        switch (agents_[i].policy) {
            case Policy::Honest:
            case Policy::NonSigner:
                dispute(i);
                break;
            case Policy::SilentLoser:
                if (result && *result == i) dispute(i);
                break;
            case Policy::FalseSubmitter:
                if (result && *result != i) dispute(i);
                break;
            case Policy::TamperedCopySubmitter:
                dispute(i, true);
                break;
        }
    }
    if (winner_ || !onchain_ || chain_.now() <= config_.terms.T3) return;
    // Nothing at stake: the deposits never both arrived.
    const auto state = betting::read_state(chain_, *onchain_, artifacts_->onchain);
    bool met = true;
    for (const auto& b : state.balances) met = met && b == config_.terms.deposit_amount;
    if (!met) {
        enter(Stage::Completed);
        outcome_ = Outcome::Completed;
    }
}

}  // namespace hybridsplit::protocol
