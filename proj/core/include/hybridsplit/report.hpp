// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hybridsplit/oracle.hpp"
#include "hybridsplit/protocol.hpp"

namespace hybridsplit::report {

struct GasReport {
    std::map<std::string, std::uint64_t> by_function;
    std::map<std::string, std::uint64_t> by_stage;
    std::uint64_t hybrid_total = 0;
    std::uint64_t oracle_total = 0;
    /// Successful deployVerifiedInstance plus returnDisputeResolution.
    std::uint64_t dispute_overhead = 0;
    std::uint64_t dispute_deploy = 0;
    std::uint64_t dispute_return = 0;
};

GasReport gas_report(const protocol::ProtocolRun& run, const oracle::OracleRun& oracle);

/// True when some window of `window` consecutive bytes of `secret` occurs in
/// any of the payloads.
bool shares_window(const Bytes& secret, const std::vector<Bytes>& payloads, std::size_t window = 16);

/// Scans every on-chain transaction payload of the run for windows of the
/// signed off-chain bytecode.
bool privacy_leak(const protocol::ProtocolRun& run, std::size_t window = 16);

/// Balance plus gas paid, per participant: what each holds ignoring fees.
std::vector<Wei> balances_excluding_gas(const ledger::Chain& chain, const std::vector<Address>& who);

nlohmann::json to_json(const GasReport& gas);

}  // namespace hybridsplit::report
