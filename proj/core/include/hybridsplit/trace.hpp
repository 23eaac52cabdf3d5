// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>

#include <nlohmann/json.hpp>

#include "hybridsplit/ledger.hpp"

/// JSON transaction trace of a chain, and replay of such a trace.
/// Integers are decimal strings, byte strings lowercase hex.
namespace hybridsplit::trace {

/// Optional label for a transaction index (e.g. the function called).
using Labeler = std::function<std::string(std::size_t)>;

nlohmann::json transaction_record(std::size_t index, const ledger::HistoryEntry& entry);

/// {genesis, gas_price, transactions, attachments, final_time, state_root}.
nlohmann::json ledger_trace(const ledger::Chain& chain, const Labeler& label = {});

/// Rebuilds a chain by feeding the recorded transactions through a fresh
/// ledger. Throws DecodeError on malformed input or when a replayed receipt
/// differs from the recorded one.
ledger::Chain replay(const nlohmann::json& ledger_trace);

}  // namespace hybridsplit::trace
