// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "hybridsplit/ir.hpp"
#include "hybridsplit/split.hpp"

/// JSON form of a contract:
///
///   {
///     "name": "Betting",
///     "participants": ["Alice", "Bob"],
///     "parameters": [{"name": "deposit", "kind": "param"}, ...],  // param|state|mapping
///     "functions": [{
///       "name": "deposit", "inputs": [], "transfers_currency": true,
///       "kind": "light",                        // optional classification override
///       "modifiers": [{"guard": "before", "vars": ["T1"]}, ...],
///       "body": [["callvalue"], ["load", "deposit"], ["push", "1"], ...]
///     }],
///     "constructor": [...],                      // optional
///     "padding": {"dispute_after": "T3", ...}    // optional
///   }
///
/// Participants become the first variables, parameters follow in order.
/// Instruction operands: push takes a decimal string; variables are named;
/// call targets are signatures ("reveal()") or "0x" selectors; keccak_const
/// takes hex.
namespace hybridsplit::spec_json {

struct SpecDocument {
    ir::Contract contract;
    split::ClassificationPolicy classification;
    split::PaddingConfig padding;
};

/// Throws ConfigError describing the offending field.
SpecDocument parse(const nlohmann::json& j);
SpecDocument load(const std::filesystem::path& path);

nlohmann::json dump(const ir::Contract& contract);

}  // namespace hybridsplit::spec_json
