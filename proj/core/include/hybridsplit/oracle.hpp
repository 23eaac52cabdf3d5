// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "hybridsplit/ledger.hpp"
#include "hybridsplit/protocol.hpp"
#include "hybridsplit/split.hpp"

/// All-on-chain reference execution: the same contract deployed as one
/// piece, driven by the same participant actions on the same clock.
namespace hybridsplit::oracle {

/// Both padded parts in one contract. offchain_call becomes a local call and
/// the constructor records the contract itself as the dispute instance, so
/// returnDisputeResolution(self) enforces the result directly.
ir::Contract merge_for_oracle(const split::SplitResult& parts);

struct OracleRun {
    ledger::Chain chain;
    std::optional<Address> contract;
    std::uint64_t gas_total = 0;
    std::map<std::string, std::uint64_t> gas_by_function;
};

/// Replays the run's on-chain actions against the merged contract:
/// deployVerifiedInstance has no counterpart and is skipped, and
/// returnDisputeResolution on the instance becomes a call on the contract.
OracleRun run_all_on_chain(const protocol::ProtocolRun& run);

}  // namespace hybridsplit::oracle
