// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hybridsplit/oracle.hpp"
#include "hybridsplit/protocol.hpp"
#include "hybridsplit/report.hpp"

/// Declarative scenario files and their execution.
///
///   {
///     "scenario_id": "honest-bob-wins",
///     "spec_path": "betting_spec.json",          // optional, relative to the file
///     "config": {"deposit_wei": "1000000000000000000", "T1": 100, "T2": 200, "T3": 300,
///                "reveal_params": "01", "reveal_work": 0, "reassign_mode": "loser_only",
///                "genesis_wei": "100000000000000000000"},
///     "policies": {"alice": "honest", "bob": "silent_loser"},
///     "schedule": [{"action": "split"}, {"action": "deploy_sign", "by": "alice"},
///                  {"advance_time": 50}, {"action": "deposit", "by": "alice"}, ...],
///     "expectations": {"winner": "bob", "outcome": "completed"}
///   }
///
/// Actions: split, deploy_sign, deposit, refund, submit, dispute. Without a
/// schedule the default one is used.
namespace hybridsplit::scenario {

enum class Action : std::uint8_t { Split, DeploySign, Deposit, Refund, Submit, Dispute };

struct Step {
    std::optional<std::int64_t> advance_time;  // set for clock steps
    Action action = Action::Split;
    std::size_t by = 0;
};

struct Expectations {
    std::optional<std::string> winner;  // "alice", "bob" or "none"
    std::optional<protocol::Outcome> outcome;
};

struct ScenarioFile {
    std::string scenario_id;
    std::optional<std::filesystem::path> spec_path;
    betting::BettingConfig terms;
    Wei genesis_wei = ether(100);
    std::array<protocol::Policy, 2> policies{protocol::Policy::Honest, protocol::Policy::Honest};
    std::vector<Step> schedule;
    Expectations expectations;
};

/// deploy by Alice, deposits at T1/2, submit mid-window, dispute after T3.
std::vector<Step> default_schedule(const betting::BettingConfig& terms);

/// Throws ConfigError. Relative spec paths resolve against `base_dir`.
ScenarioFile parse_scenario(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ScenarioFile load_scenario(const std::filesystem::path& path);

struct ScenarioResult {
    protocol::ProtocolRun run;
    oracle::OracleRun oracle;
    report::GasReport gas;
    bool privacy_leak = false;
    std::optional<std::string> expectation_failure;
};

protocol::RunConfig run_config(const ScenarioFile& file, const std::array<std::uint8_t, 32>& seed);

/// Applies one schedule step to a run.
void apply(protocol::ProtocolRun& run, const Step& step);

/// Runs the hybrid protocol and the all-on-chain oracle. Throws ConfigError
/// or ProtocolError for scenarios that cannot be executed.
ScenarioResult run_scenario(const ScenarioFile& file, const std::array<std::uint8_t, 32>& seed = {});

std::string winner_name(const protocol::ProtocolRun& run);

nlohmann::json result_json(const ScenarioFile& file, const ScenarioResult& result);
nlohmann::json compare_json(const ScenarioFile& file, const ScenarioResult& result);
nlohmann::json trace_json(const ScenarioFile& file, const ScenarioResult& result);

/// Per-participant balance difference between hybrid and oracle, gas excluded.
nlohmann::json balance_diff(const ScenarioResult& result);

}  // namespace hybridsplit::scenario
