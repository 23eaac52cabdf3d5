// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#include "hybridsplit/betting.hpp"

#include <set>

#include "hybridsplit/abi.hpp"
#include "hybridsplit/crypto.hpp"
#include "hybridsplit/error.hpp"

namespace hybridsplit::betting {

namespace {

using ir::Asm;
using ir::GuardKind;
using ir::Op;

std::string participant_name(std::uint32_t i) {
    static const std::array<const char*, 4> kNames{"Alice", "Bob", "Carol", "Dave"};
    return i < kNames.size() ? kNames[i] : "P" + std::to_string(i);
}

struct Layout {
    std::uint32_t deposit, t1, t2, t3, balances, resolved;
};

Layout layout_for(std::uint32_t n) { return {n, n + 1, n + 2, n + 3, n + 4, n + 5}; }

std::vector<ir::Variable> variables_for(std::uint32_t n) {
    std::vector<ir::Variable> vars;
    for (std::uint32_t i = 0; i < n; ++i) vars.push_back({participant_name(i), ir::VarKind::Participant});
    vars.push_back({"deposit", ir::VarKind::Param});
    vars.push_back({"T1", ir::VarKind::Param});
    vars.push_back({"T2", ir::VarKind::Param});
    vars.push_back({"T3", ir::VarKind::Param});
    vars.push_back({"accountBalance", ir::VarKind::Mapping});
    vars.push_back({"resolved", ir::VarKind::State});
    return vars;
}

ir::Body deposit_body(const Layout& l) {
    return Asm{}
        .op(Op::CallValue).load(l.deposit).op(Op::Eq).op(Op::Require)
        .op(Op::Caller).map_load(l.balances).op(Op::IsZero).op(Op::Require)
        .op(Op::CallValue).op(Op::Caller).map_store(l.balances)
        .op(Op::Stop)
        .build();
}

ir::Body refund_body(const Layout& l) {
    return Asm{}
        .op(Op::Caller).map_load(l.balances)
        .push(0).op(Op::Caller).map_store(l.balances)
        .op(Op::Caller).op(Op::Transfer)
        .op(Op::Stop)
        .build();
}

// Filler work: `count` instructions that leave the stack unchanged.
void append_work(Asm& a, std::uint32_t count) {
    for (std::uint32_t i = 0; i + 1 < count; i += 2) a.push(i % 251 + 1).op(Op::Pop);
    if (count % 2 == 1) a.compute(0);
}

}  // namespace

std::string_view to_string(ReassignMode mode) {
    return mode == ReassignMode::LoserOnly ? "loser_only" : "concede";
}

ReassignMode reassign_mode_from_string(std::string_view text) {
    if (text == "loser_only") return ReassignMode::LoserOnly;
    if (text == "concede") return ReassignMode::Concede;
    throw ConfigError("unknown reassign mode '" + std::string(text) + "'");
}

void BettingConfig::validate() const {
    if (!(0 < T1 && T1 < T2 && T2 < T3)) throw ConfigError("time points must satisfy 0 < T1 < T2 < T3");
    if (participants[0] == participants[1]) throw ConfigError("participants must be distinct");
    if (deposit_amount == 0) throw ConfigError("deposit must be positive");
    if (penalty_amount != 0) throw ConfigError("penalty deposits are not modeled; penalty_amount must be 0");
}

ir::Contract make_spec(const SpecOptions& options) {
    const std::uint32_t n = options.participants;
    if (n < 2) throw ConfigError("betting needs at least two participants");
    const Layout l = layout_for(n);

    ir::Contract c;
    c.role = ir::ContractRole::Whole;
    c.name = "Betting";
    c.participant_count = n;
    c.variables = variables_for(n);

    c.functions.push_back(ir::make_function(
        "deposit", {}, true,
        {{GuardKind::Payable, 0, 0}, {GuardKind::Before, l.t1, 0}, {GuardKind::Participant, 0, 0}}, deposit_body(l)));
    c.functions.push_back(ir::make_function("refundRoundOne", {}, true,
                                            {{GuardKind::Before, l.t1, 0}, {GuardKind::Participant, 0, 0}},
                                            refund_body(l)));
    c.functions.push_back(ir::make_function(
        "refundRoundTwo", {}, true,
        {{GuardKind::Between, l.t1, l.t2}, {GuardKind::Participant, 0, 0}, {GuardKind::AmountNotMet, l.deposit, l.balances}},
        refund_body(l)));

    Asm reassign;
    if (options.reassign_mode == ReassignMode::LoserOnly) {
        // winner = reveal(); require(caller == participant[!winner])
        reassign.call_local("reveal()", 0).dup(1).op(Op::IsZero).op(Op::LoadSlot).op(Op::Caller).op(Op::Eq).op(Op::Require);
    } else {
        // The caller concedes: Alice calling pays Bob and vice versa.
        reassign.op(Op::Caller).load(0).op(Op::Eq);
    }
    reassign.append(split::payout_to_index(n, l.balances, l.resolved));
    c.functions.push_back(ir::make_function("reassign", {}, true,
                                            {{GuardKind::Between, l.t2, l.t3},
                                             {GuardKind::Participant, 0, 0},
                                             {GuardKind::AmountMet, l.deposit, l.balances},
                                             {GuardKind::Unresolved, l.resolved, 0}},
                                            std::move(reassign).build()));

    Asm reveal;
    append_work(reveal, options.reveal_work);
    reveal.keccak_const(options.reveal_params).push(1).op(Op::And).op(Op::Return);
    c.functions.push_back(ir::make_function("reveal", {}, false,
                                            {{GuardKind::Private, 0, 0}, {GuardKind::After, l.t2, 0}},
                                            std::move(reveal).build()));
    ir::validate(c);
    return c;
}

ir::Contract make_spec(const BettingConfig& config) {
    config.validate();
    return make_spec(SpecOptions{.participants = 2,
                                 .reveal_params = config.reveal_params,
                                 .reveal_work = config.reveal_work,
                                 .reassign_mode = config.reassign_mode});
}

ir::Contract make_six_function_spec() {
    const Layout l = layout_for(2);
    ir::Contract c;
    c.role = ir::ContractRole::Whole;
    c.name = "SixFunction";
    c.participant_count = 2;
    c.variables = variables_for(2);
    const std::uint32_t counter = static_cast<std::uint32_t>(c.variables.size());
    c.variables.push_back({"counter", ir::VarKind::State});

    c.functions.push_back(ir::make_function(
        "f1", {}, true, {{GuardKind::Payable, 0, 0}, {GuardKind::Before, l.t1, 0}, {GuardKind::Participant, 0, 0}},
        deposit_body(l)));
    c.functions.push_back(ir::make_function("f2", {}, false, {{GuardKind::Private, 0, 0}},
                                            Asm{}.compute(50).load(counter).op(Op::Keccak).op(Op::Return).build()));
    c.functions.push_back(ir::make_function("f3", {}, true,
                                            {{GuardKind::Before, l.t1, 0}, {GuardKind::Participant, 0, 0}},
                                            refund_body(l)));
    c.functions.push_back(ir::make_function(
        "f4", {}, false, {{GuardKind::Private, 0, 0}},
        Asm{}.compute(100).call_local("f2()", 0).push(1).op(Op::And).op(Op::Return).build()));
    Asm f5;
    f5.call_local("f6()", 0).dup(1).op(Op::IsZero).op(Op::LoadSlot).op(Op::Caller).op(Op::Eq).op(Op::Require);
    f5.append(split::payout_to_index(2, l.balances, l.resolved));
    c.functions.push_back(ir::make_function("f5", {}, true,
                                            {{GuardKind::Between, l.t2, l.t3},
                                             {GuardKind::Participant, 0, 0},
                                             {GuardKind::AmountMet, l.deposit, l.balances},
                                             {GuardKind::Unresolved, l.resolved, 0}},
                                            std::move(f5).build()));
    c.functions.push_back(ir::make_function("f6", {}, false, {{GuardKind::Private, 0, 0}, {GuardKind::After, l.t2, 0}},
                                            Asm{}.compute(10).call_local("f4()", 0).op(Op::Return).build()));
    ir::validate(c);
    return c;
}

split::PaddingConfig six_function_padding() {
    split::PaddingConfig p;
    p.result_function = "f6";
    return p;
}

std::size_t reveal_winner(ByteView reveal_params) {
    return crypto::keccak256(reveal_params).bytes[31] & 1U;
}

std::vector<Word> constructor_words(const std::vector<Address>& participants, const Wei& deposit, std::uint64_t t1,
                                    std::uint64_t t2, std::uint64_t t3) {
    std::vector<Word> words;
    for (const auto& p : participants) words.push_back(word_from_address(p));
    words.insert(words.end(), {deposit, Word{t1}, Word{t2}, Word{t3}});
    return words;
}

std::vector<Word> constructor_words(const BettingConfig& config) {
    return constructor_words({config.participants.begin(), config.participants.end()}, config.deposit_amount, config.T1,
                             config.T2, config.T3);
}

Bytes deposit_payload() { return abi::encode_call("deposit()", {}); }
Bytes refund_round_one_payload() { return abi::encode_call("refundRoundOne()", {}); }
Bytes refund_round_two_payload() { return abi::encode_call("refundRoundTwo()", {}); }
Bytes reassign_payload() { return abi::encode_call("reassign()", {}); }

Bytes deploy_verified_instance_payload(const split::SignedCopy& copy) {
    std::vector<abi::Value> args{copy.bytecode};
    for (const auto& sig : copy.signatures) {
        args.emplace_back(Word{sig.v});
        args.emplace_back(word_from_be(sig.r));
        args.emplace_back(word_from_be(sig.s));
    }
    return abi::encode_call(split::deploy_signature(static_cast<std::uint32_t>(copy.signatures.size())), args);
}

Bytes enforce_payload(bool winner) { return abi::encode_call(split::kEnforceSignature, {Word{winner ? 1 : 0}}); }

Bytes return_dispute_payload(const Address& onchain) {
    return abi::encode_call(split::kReturnSignature, {word_from_address(onchain)});
}

OnChainState read_state(const ledger::Chain& chain, const Address& contract, const ir::Contract& layout) {
    OnChainState s;
    const auto balances = layout.variable("accountBalance");
    const auto resolved = layout.variable("resolved");
    const auto deployed = layout.variable("deployedAddr");
    for (std::uint32_t p = 0; p < layout.participant_count; ++p) {
        const Word who = chain.storage(contract, Word{p});
        s.balances.push_back(balances ? chain.storage(contract, ir::mapping_slot(who, *balances)) : Wei{0});
    }
    if (resolved) s.resolved = chain.storage(contract, Word{*resolved}) != 0;
    if (deployed) s.deployed_addr = address_from_word(chain.storage(contract, Word{*deployed}));
    s.contract_balance = chain.balance(contract);
    return s;
}

}  // namespace hybridsplit::betting
