// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#include "hybridsplit/oracle.hpp"

#include "hybridsplit/betting.hpp"
#include "hybridsplit/error.hpp"

namespace hybridsplit::oracle {

ir::Contract merge_for_oracle(const split::SplitResult& parts) {
    ir::Contract merged = parts.onchain;
    merged.role = ir::ContractRole::Whole;
    const std::string suffix = "OnChain";
    if (merged.name.size() > suffix.size() && merged.name.ends_with(suffix)) {
        merged.name.resize(merged.name.size() - suffix.size());
    }
    for (auto& f : merged.functions) {
        for (auto& ins : f.body) {
            if (ins.op == ir::Op::OffchainCall) ins.op = ir::Op::CallLocal;
        }
    }
    for (const auto& f : parts.offchain.functions) {
        ir::FunctionSpec g = f;
        for (auto& m : g.modifiers) {
            switch (m.kind) {
                case ir::GuardKind::Payable:
                case ir::GuardKind::Private:
                case ir::GuardKind::Participant:
                    break;
                case ir::GuardKind::Between:
                case ir::GuardKind::AmountMet:
                case ir::GuardKind::AmountNotMet:
                    m.var_b = parts.offchain_origin.at(m.var_b);
                    m.var_a = parts.offchain_origin.at(m.var_a);
                    break;
                default:
                    m.var_a = parts.offchain_origin.at(m.var_a);
                    break;
            }
        }
        for (auto& ins : g.body) {
            switch (ins.op) {
                case ir::Op::Load:
                case ir::Op::Store:
                case ir::Op::MapLoad:
                case ir::Op::MapStore:
                    ins.a = parts.offchain_origin.at(ins.a);
                    break;
                default:
                    break;
            }
        }
        merged.functions.push_back(std::move(g));
    }
    const auto deployed = parts.onchain.variable("deployedAddr");
    if (!deployed) throw SplitError("on-chain part has no deployedAddr");
    merged.constructor.push_back(ir::Instruction{.op = ir::Op::Self});
    merged.constructor.push_back(ir::Instruction{.op = ir::Op::Store, .a = *deployed});
    ir::validate(merged);
    return merged;
}

OracleRun run_all_on_chain(const protocol::ProtocolRun& run) {
    OracleRun out{.chain = ledger::Chain(run.chain().genesis(), run.chain().gas_price())};
    if (!run.artifacts()) return out;
    const ir::Contract merged = merge_for_oracle(*run.artifacts());
    const auto& agents = run.agents();

    for (const auto& action : run.actions()) {
        if (action.target == protocol::Target::OnChain && action.function == split::kDeployVerifiedInstance) continue;
        if (action.time > out.chain.now()) out.chain.advance_time(static_cast<std::int64_t>(action.time - out.chain.now()));

        ledger::Transaction tx{.from = agents.at(action.agent).address(), .value = action.value};
        switch (action.target) {
            case protocol::Target::Create:
                tx.payload = split::creation_code(merged, run.constructor_words());
                break;
            case protocol::Target::OnChain:
                if (!out.contract) continue;
                tx.to = out.contract;
                tx.payload = action.payload;
                break;
            case protocol::Target::Instance:
                if (!out.contract) continue;
                tx.to = out.contract;
                tx.payload = betting::return_dispute_payload(*out.contract);
                break;
        }
        const auto receipt = out.chain.submit(tx);
        if (action.target == protocol::Target::Create && receipt.created_address) out.contract = receipt.created_address;
        out.gas_total += receipt.gas_used;
        out.gas_by_function[action.function] += receipt.gas_used;
    }
    const std::uint64_t end = run.chain().now();
    if (end > out.chain.now()) out.chain.advance_time(static_cast<std::int64_t>(end - out.chain.now()));
    return out;
}

}  // namespace hybridsplit::oracle
