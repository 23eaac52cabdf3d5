// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#include "hybridsplit/split.hpp"

#include <algorithm>
#include <set>

#include "hybridsplit/bytecode.hpp"
#include "hybridsplit/error.hpp"

namespace hybridsplit::split {

namespace {

using ir::Asm;
using ir::GuardKind;
using ir::Op;

std::uint32_t require_var(const ir::Contract& spec, const std::string& name, bool mapping) {
    const auto idx = spec.variable(name);
    if (!idx) throw SplitError("padding variable '" + name + "' not declared in " + spec.name);
    const bool is_mapping = spec.variables[*idx].kind == ir::VarKind::Mapping;
    if (is_mapping != mapping) {
        throw SplitError("padding variable '" + name + "' must " + std::string(mapping ? "" : "not ") + "be a mapping");
    }
    return *idx;
}

bool touches_variables(Op op) {
    return op == Op::Load || op == Op::Store || op == Op::MapLoad || op == Op::MapStore;
}

}  // namespace

std::string deploy_signature(std::uint32_t participants) {
    std::string sig = std::string(kDeployVerifiedInstance) + "(bytes";
    for (std::uint32_t i = 0; i < participants; ++i) sig += ",uint8,bytes32,bytes32";
    return sig + ")";
}

ir::Contract classify(ir::Contract spec, const ClassificationPolicy& policy) {
    for (const auto& [name, kind] : policy.overrides) {
        if (spec.find(name) == nullptr) throw SplitError("classification override names unknown function '" + name + "'");
        if (kind == ir::FunctionKind::Unassigned) throw SplitError("override for '" + name + "' leaves it unassigned");
    }
    for (auto& f : spec.functions) {
        auto it = policy.overrides.find(f.name);
        if (it != policy.overrides.end()) {
            f.kind = it->second;
        } else {
            f.kind = f.transfers_currency ? ir::FunctionKind::Light : ir::FunctionKind::Heavy;
        }
    }
    return spec;
}

ir::Body payout_to_index(std::uint32_t participant_count, std::uint32_t balances, std::uint32_t resolved) {
    Asm a;
    a.push(0);
    for (std::uint32_t p = 0; p < participant_count; ++p) a.load(p).map_load(balances).op(Op::Add);
    for (std::uint32_t p = 0; p < participant_count; ++p) a.push(0).load(p).map_store(balances);
    a.push(1).store(resolved);
    // index, sum -> sum, participant[index]
    a.swap(1).op(Op::LoadSlot).op(Op::Transfer).op(Op::Stop);
    return std::move(a).build();
}

std::vector<std::uint32_t> SplitResult::instance_binding() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t v : offchain.constructor_variables()) out.push_back(offchain_origin[v]);
    return out;
}

SplitResult split_and_pad(const ir::Contract& spec, const PaddingConfig& padding) {
    ir::validate(spec);
    if (spec.functions.empty()) throw SplitError("contract '" + spec.name + "' has no functions");
    if (spec.participant_count == 0) throw SplitError("contract '" + spec.name + "' has no participants");

    std::set<Selector> heavy;
    for (const auto& f : spec.functions) {
        if (f.name.empty()) throw SplitError("unnamed function");
        if (f.name == kDeployVerifiedInstance || f.name == kEnforceDisputeResolution || f.name == kReturnDisputeResolution) {
            throw SplitError("function name '" + f.name + "' is reserved for padding");
        }
        if (f.padded) throw SplitError("contract '" + spec.name + "' is already padded");
        if (f.kind == ir::FunctionKind::Unassigned) throw SplitError("function '" + f.name + "' is not classified");
        if (f.kind == ir::FunctionKind::Heavy) heavy.insert(f.selector);
    }
    if (heavy.empty()) throw SplitError("degenerate split: contract '" + spec.name + "' has no heavy functions");
    if (spec.variable(padding.deployed_addr)) {
        throw SplitError("variable '" + padding.deployed_addr + "' is reserved for padding");
    }

    const std::uint32_t n = spec.participant_count;
    const std::uint32_t after_var = require_var(spec, padding.dispute_after, false);
    const std::uint32_t deposit_var = require_var(spec, padding.deposit, false);
    const std::uint32_t balances_var = require_var(spec, padding.balances, true);
    const std::uint32_t resolved_var = require_var(spec, padding.resolved, false);
    const ir::FunctionSpec* result_fn = spec.find(padding.result_function);
    if (result_fn == nullptr || result_fn->kind != ir::FunctionKind::Heavy || !result_fn->inputs.empty()) {
        throw SplitError("result function '" + padding.result_function + "' must be heavy and take no inputs");
    }

    // Off-chain variables: participants plus whatever heavy functions touch.
    std::set<std::uint32_t> used;
    for (std::uint32_t p = 0; p < n; ++p) used.insert(p);
    for (const auto& f : spec.functions) {
        if (f.kind != ir::FunctionKind::Heavy) continue;
        for (const auto& m : f.modifiers) {
            switch (m.kind) {
                case GuardKind::Before:
                case GuardKind::After:
                case GuardKind::DeployedAddrOnly:
                case GuardKind::Unresolved:
                    used.insert(m.var_a);
                    break;
                case GuardKind::Between:
                case GuardKind::AmountMet:
                case GuardKind::AmountNotMet:
                    used.insert(m.var_a);
                    used.insert(m.var_b);
                    break;
                default:
                    break;
            }
        }
        for (const auto& ins : f.body) {
            if (touches_variables(ins.op)) used.insert(ins.a);
            if (ins.op == Op::CallLocal && !heavy.contains(ins.selector)) {
                throw SplitError("heavy function '" + f.name + "' calls an on-chain function");
            }
            if (ins.op == Op::Create) throw SplitError("heavy function '" + f.name + "' creates contracts");
        }
    }

    SplitResult out;
    std::map<std::uint32_t, std::uint32_t> remap;
    for (std::uint32_t v : used) {
        remap[v] = static_cast<std::uint32_t>(out.offchain_origin.size());
        out.offchain_origin.push_back(v);
    }

    // On-chain part.
    ir::Contract& on = out.onchain;
    on.role = ir::ContractRole::OnChain;
    on.name = spec.name + "OnChain";
    on.participant_count = n;
    on.variables = spec.variables;
    const auto deployed_var = static_cast<std::uint32_t>(on.variables.size());
    on.variables.push_back(ir::Variable{.name = padding.deployed_addr, .kind = ir::VarKind::State});
    on.constructor = spec.constructor;
    for (const auto& f : spec.functions) {
        if (f.kind != ir::FunctionKind::Light) continue;
        ir::FunctionSpec g = f;
        for (auto& ins : g.body) {
            if (ins.op == Op::CallLocal && heavy.contains(ins.selector)) ins.op = Op::OffchainCall;
        }
        on.functions.push_back(std::move(g));
    }

    // Off-chain part.
    ir::Contract& off = out.offchain;
    off.role = ir::ContractRole::OffChain;
    off.name = spec.name + "OffChain";
    off.participant_count = n;
    for (std::uint32_t v : out.offchain_origin) off.variables.push_back(spec.variables[v]);
    for (const auto& f : spec.functions) {
        if (f.kind != ir::FunctionKind::Heavy) continue;
        ir::FunctionSpec g = f;
        for (auto& m : g.modifiers) {
            if (m.kind == GuardKind::Payable || m.kind == GuardKind::Private || m.kind == GuardKind::Participant) continue;
            m.var_a = remap.at(m.var_a);
            if (m.kind == GuardKind::Between || m.kind == GuardKind::AmountMet || m.kind == GuardKind::AmountNotMet) {
                m.var_b = remap.at(m.var_b);
            }
        }
        for (auto& ins : g.body) {
            if (touches_variables(ins.op)) ins.a = remap.at(ins.a);
        }
        off.functions.push_back(std::move(g));
    }

    // deployVerifiedInstance: check every signature over the submitted code,
    // then create the instance bound to this contract's participants.
    {
        Asm a;
        for (std::uint32_t i = 0; i < n; ++i) {
            a.arg(1 + 3 * i + 2).arg(1 + 3 * i + 1).arg(1 + 3 * i).arg_bytes_hash(0).op(Op::EcRecover);
            a.load(i).op(Op::Eq).op(Op::Require);
        }
        a.load(deployed_var).op(Op::IsZero).op(Op::Require);
        const auto binding = out.instance_binding();
        for (std::uint32_t v : binding) a.load(v);
        a.create(0, static_cast<std::uint32_t>(binding.size())).store(deployed_var).op(Op::Stop);

        std::vector<std::string> inputs{"bytes"};
        for (std::uint32_t i = 0; i < n; ++i) {
            inputs.insert(inputs.end(), {"uint8", "bytes32", "bytes32"});
        }
        auto fn = ir::make_function(std::string(kDeployVerifiedInstance), std::move(inputs), false,
                                    {{GuardKind::After, after_var, 0},
                                     {GuardKind::Participant, 0, 0},
                                     {GuardKind::AmountMet, deposit_var, balances_var}},
                                    std::move(a).build());
        fn.kind = ir::FunctionKind::Light;
        fn.padded = true;
        on.functions.push_back(std::move(fn));
    }
    {
        Asm a;
        a.arg(0).dup(1).push(n).op(Op::Gt).op(Op::Require);
        a.append(payout_to_index(n, balances_var, resolved_var));
        auto fn = ir::make_function(std::string(kEnforceDisputeResolution), {"bool"}, true,
                                    {{GuardKind::DeployedAddrOnly, deployed_var, 0}, {GuardKind::Unresolved, resolved_var, 0}},
                                    std::move(a).build());
        fn.kind = ir::FunctionKind::Light;
        fn.padded = true;
        on.functions.push_back(std::move(fn));
    }
    {
        Asm a;
        a.call_local(result_fn->signature(), 0).arg(0).call(kEnforceSignature, 1).op(Op::Pop).op(Op::Stop);
        auto fn = ir::make_function(std::string(kReturnDisputeResolution), {"address"}, false,
                                    {{GuardKind::Participant, 0, 0}}, std::move(a).build());
        fn.kind = ir::FunctionKind::Heavy;
        fn.padded = true;
        off.functions.push_back(std::move(fn));
    }

    ir::validate(on);
    ir::validate(off);
    return out;
}

Bytes serialize_bytecode(const ir::Contract& artifact) { return bytecode::encode(artifact, {.include_names = true}); }

ir::Contract deserialize_bytecode(ByteView code) { return bytecode::decode(code); }

Bytes creation_code(const ir::Contract& onchain, const std::vector<Word>& constructor_words) {
    if (constructor_words.size() != onchain.constructor_variables().size()) {
        throw SplitError("constructor expects " + std::to_string(onchain.constructor_variables().size()) + " words");
    }
    Bytes out = bytecode::encode(onchain, {.include_names = false});
    for (const auto& w : constructor_words) {
        const auto be = to_be32(w);
        out.insert(out.end(), be.begin(), be.end());
    }
    return out;
}

Hash32 SignedCopy::digest() const { return crypto::keccak256(bytecode); }

SignedCopy sign_copy(const Bytes& bytecode, const std::vector<crypto::PrivateKey>& keys) {
    const ir::Contract artifact = bytecode::decode(bytecode);
    if (keys.size() != artifact.participant_count) {
        throw SplitError("expected " + std::to_string(artifact.participant_count) + " keys, got " +
                         std::to_string(keys.size()));
    }
    SignedCopy copy{.bytecode = bytecode};
    const Hash32 digest = copy.digest();
    for (const auto& key : keys) copy.signatures.push_back(crypto::ecsign(digest, key));
    return copy;
}

Verdict verify_copy(const SignedCopy& copy, const std::vector<Address>& participants) {
    const Hash32 digest = copy.digest();
    const std::size_t n = std::max(participants.size(), copy.signatures.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= participants.size() || i >= copy.signatures.size()) return {.accepted = false, .rejected_index = i};
        const auto signer = crypto::ecrecover(digest, copy.signatures[i]);
        if (!signer || *signer != participants[i]) return {.accepted = false, .rejected_index = i};
    }
    return {.accepted = !participants.empty()};
}

}  // namespace hybridsplit::split
