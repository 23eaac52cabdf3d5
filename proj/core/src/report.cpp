// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#include "hybridsplit/report.hpp"

#include <string_view>
#include <unordered_set>

#include "hybridsplit/split.hpp"

namespace hybridsplit::report {

GasReport gas_report(const protocol::ProtocolRun& run, const oracle::OracleRun& oracle) {
    GasReport r;
    for (const auto& a : run.actions()) {
        r.by_function[a.function] += a.gas_used;
        r.by_stage[std::string(protocol::to_string(a.stage))] += a.gas_used;
        r.hybrid_total += a.gas_used;
        if (!a.success) continue;
        if (a.function == split::kDeployVerifiedInstance) r.dispute_deploy += a.gas_used;
        if (a.function == split::kReturnDisputeResolution) r.dispute_return += a.gas_used;
    }
    r.dispute_overhead = r.dispute_deploy + r.dispute_return;
    r.oracle_total = oracle.gas_total;
    return r;
}

bool shares_window(const Bytes& secret, const std::vector<Bytes>& payloads, std::size_t window) {
    if (window == 0 || secret.size() < window) return false;
    std::unordered_set<std::string_view> windows;
    const auto* base = reinterpret_cast<const char*>(secret.data());
    for (std::size_t i = 0; i + window <= secret.size(); ++i) windows.emplace(base + i, window);
    for (const auto& p : payloads) {
        const auto* data = reinterpret_cast<const char*>(p.data());
        for (std::size_t i = 0; i + window <= p.size(); ++i) {
            if (windows.contains(std::string_view(data + i, window))) return true;
        }
    }
    return false;
}

bool privacy_leak(const protocol::ProtocolRun& run, std::size_t window) {
    if (!run.artifacts()) return false;
    const Bytes secret = split::serialize_bytecode(run.artifacts()->offchain);
    std::vector<Bytes> payloads;
    for (const auto& h : run.chain().history()) payloads.push_back(h.tx.payload);
    return shares_window(secret, payloads, window);
}

std::vector<Wei> balances_excluding_gas(const ledger::Chain& chain, const std::vector<Address>& who) {
    std::vector<Wei> out;
    for (const auto& a : who) out.push_back(chain.balance(a) + chain.gas_paid(a));
    return out;
}

nlohmann::json to_json(const GasReport& gas) {
    nlohmann::json by_function = nlohmann::json::object();
    for (const auto& [k, v] : gas.by_function) by_function[k] = std::to_string(v);
    nlohmann::json by_stage = nlohmann::json::object();
    for (const auto& [k, v] : gas.by_stage) by_stage[k] = std::to_string(v);
    return {
        {"hybrid_total", std::to_string(gas.hybrid_total)},
        {"oracle_total", std::to_string(gas.oracle_total)},
        {"dispute_overhead", std::to_string(gas.dispute_overhead)},
        {"dispute_deploy_verified_instance", std::to_string(gas.dispute_deploy)},
        {"dispute_return_resolution", std::to_string(gas.dispute_return)},
        {"by_function", by_function},
        {"by_stage", by_stage},
    };
}

}  // namespace hybridsplit::report
