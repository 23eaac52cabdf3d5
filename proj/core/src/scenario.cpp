// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#include "hybridsplit/scenario.hpp"

#include <algorithm>
#include <fstream>

#include "hybridsplit/error.hpp"
#include "hybridsplit/spec_json.hpp"
#include "hybridsplit/trace.hpp"

namespace hybridsplit::scenario {

namespace {

using nlohmann::json;

struct ActionName {
    Action action;
    std::string_view name;
};

constexpr std::array kActions{
    ActionName{Action::Split, "split"},     ActionName{Action::DeploySign, "deploy_sign"},
    ActionName{Action::Deposit, "deposit"}, ActionName{Action::Refund, "refund"},
    ActionName{Action::Submit, "submit"},   ActionName{Action::Dispute, "dispute"},
};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return s;
}

std::size_t participant_index(const std::string& name) {
    const auto n = lower(name);
    if (n == "alice") return 0;
    if (n == "bob") return 1;
    throw ConfigError("unknown participant '" + name + "'");
}

Wei wei_field(const json& j, const char* field, const Wei& fallback) {
    if (!j.contains(field)) return fallback;
    const json& v = j.at(field);
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return Wei{v.get<std::uint64_t>()};
    if (v.is_string()) return parse_decimal(v.get<std::string>());
    throw ConfigError(std::string(field) + " must be a decimal string");
}

std::uint64_t u64_field(const json& j, const char* field, std::uint64_t fallback) {
    if (!j.contains(field)) return fallback;
    const json& v = j.at(field);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) throw ConfigError(std::string(field) + " must be a non-negative integer");
    return v.get<std::uint64_t>();
}

ScenarioFile parse_impl(const json& j, const std::filesystem::path& base_dir) {
    ScenarioFile f;
    if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
    f.scenario_id = j.at("scenario_id").get<std::string>();
    if (j.contains("spec_path") && !j.at("spec_path").is_null()) {
        std::filesystem::path p = j.at("spec_path").get<std::string>();
        f.spec_path = p.is_absolute() ? p : base_dir / p;
    }

    const json config = j.value("config", json::object());
    f.terms.deposit_amount = wei_field(config, "deposit_wei", f.terms.deposit_amount);
    f.terms.T1 = u64_field(config, "T1", f.terms.T1);
    f.terms.T2 = u64_field(config, "T2", f.terms.T2);
    f.terms.T3 = u64_field(config, "T3", f.terms.T3);
    if (config.contains("reveal_params")) f.terms.reveal_params = from_hex(config.at("reveal_params").get<std::string>());
    const std::uint64_t work = u64_field(config, "reveal_work", 0);
    if (work > 10'000'000) throw ConfigError("reveal_work too large");
    f.terms.reveal_work = static_cast<std::uint32_t>(work);
    if (config.contains("reassign_mode")) {
        f.terms.reassign_mode = betting::reassign_mode_from_string(config.at("reassign_mode").get<std::string>());
    }
    f.terms.penalty_amount = wei_field(config, "penalty_wei", 0);
    f.genesis_wei = wei_field(config, "genesis_wei", f.genesis_wei);
    // Placeholder identities so the time and amount rules can be checked now.
    f.terms.participants[1].bytes[19] = 1;
    f.terms.validate();

    const json policies = j.at("policies");
    if (!policies.contains("alice") || !policies.contains("bob")) throw ConfigError("policies must cover alice and bob");
    for (const auto& [name, value] : policies.items()) {
        f.policies.at(participant_index(name)) = protocol::policy_from_string(value.get<std::string>());
    }

    if (j.contains("schedule")) {
        for (const auto& s : j.at("schedule")) {
            Step step;
            if (s.contains("advance_time")) {
                if (!s.at("advance_time").is_number_integer()) throw ConfigError("advance_time must be an integer");
                step.advance_time = s.at("advance_time").get<std::int64_t>();
                if (*step.advance_time < 0) throw ConfigError("advance_time must not be negative");
            } else {
                const auto name = s.at("action").get<std::string>();
                const auto it = std::find_if(kActions.begin(), kActions.end(), [&](const auto& a) { return a.name == name; });
                if (it == kActions.end()) throw ConfigError("unknown action '" + name + "'");
                step.action = it->action;
                step.by = s.contains("by") ? participant_index(s.at("by").get<std::string>()) : 0;
            }
            f.schedule.push_back(step);
        }
    } else {
        f.schedule = default_schedule(f.terms);
    }

    if (j.contains("expectations")) {
        const json& e = j.at("expectations");
        if (e.contains("winner")) {
            auto w = lower(e.at("winner").get<std::string>());
            if (w != "alice" && w != "bob" && w != "none") throw ConfigError("expected winner must be alice, bob or none");
            f.expectations.winner = w;
        }
        if (e.contains("outcome")) f.expectations.outcome = protocol::outcome_from_string(e.at("outcome").get<std::string>());
    }
    return f;
}

json balances_json(const std::vector<protocol::Agent>& agents, const std::vector<Wei>& values) {
    json out = json::object();
    for (std::size_t i = 0; i < agents.size(); ++i) out[agents[i].name] = to_decimal(values[i]);
    return out;
}

}  // namespace

std::vector<Step> default_schedule(const betting::BettingConfig& t) {
    const auto at = static_cast<std::int64_t>(t.T1 / 2);
    const auto mid = static_cast<std::int64_t>((t.T2 + t.T3) / 2);
    return {
        Step{.action = Action::Split},
        Step{.action = Action::DeploySign, .by = 0},
        Step{.advance_time = at},
        Step{.action = Action::Deposit, .by = 0},
        Step{.action = Action::Deposit, .by = 1},
        Step{.advance_time = mid - at},
        Step{.action = Action::Submit},
        Step{.advance_time = static_cast<std::int64_t>(t.T3 + 1) - mid},
        Step{.action = Action::Dispute},
    };
}

ScenarioFile parse_scenario(const json& j, const std::filesystem::path& base_dir) {
    try {
        return parse_impl(j, base_dir);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    } catch (const HexError& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_scenario(j, path.parent_path());
}

protocol::RunConfig run_config(const ScenarioFile& file, const std::array<std::uint8_t, 32>& seed) {
    protocol::RunConfig cfg;
    cfg.terms = file.terms;
    cfg.policies = file.policies;
    cfg.master_seed = seed;
    cfg.genesis_wei = file.genesis_wei;
    if (file.spec_path) {
        auto doc = spec_json::load(*file.spec_path);
        cfg.spec = std::move(doc.contract);
        cfg.classification = std::move(doc.classification);
        cfg.padding = std::move(doc.padding);
    }
    return cfg;
}

void apply(protocol::ProtocolRun& run, const Step& step) {
    if (step.advance_time) {
        run.advance_time(*step.advance_time);
        return;
    }
    switch (step.action) {
        case Action::Split:
            run.split_generate();
            break;
        case Action::DeploySign:
            run.deploy_sign(step.by);
            break;
        case Action::Deposit:
            run.deposit(step.by);
            break;
        case Action::Refund:
            run.refund(step.by);
            break;
        case Action::Submit:
            run.submit_challenge();
            break;
        case Action::Dispute:
            run.dispute_resolve();
            break;
    }
}

ScenarioResult run_scenario(const ScenarioFile& file, const std::array<std::uint8_t, 32>& seed) {
    protocol::ProtocolRun run(run_config(file, seed));
    for (const auto& step : file.schedule) apply(run, step);
    auto oracle = oracle::run_all_on_chain(run);
    auto gas = report::gas_report(run, oracle);
    const bool leak = report::privacy_leak(run);
    ScenarioResult result{.run = std::move(run), .oracle = std::move(oracle), .gas = gas, .privacy_leak = leak};

    std::string failure;
    const std::string winner = winner_name(result.run);
    if (file.expectations.winner && *file.expectations.winner != winner) {
        failure += "expected winner " + *file.expectations.winner + ", got " + winner;
    }
    if (file.expectations.outcome && *file.expectations.outcome != result.run.outcome()) {
        if (!failure.empty()) failure += "; ";
        failure += "expected outcome " + std::string(protocol::to_string(*file.expectations.outcome)) + ", got " +
                   std::string(protocol::to_string(result.run.outcome()));
    }
    if (!failure.empty()) result.expectation_failure = failure;
    return result;
}

std::string winner_name(const protocol::ProtocolRun& run) {
    return run.winner() ? run.agents()[*run.winner()].name : "none";
}

json balance_diff(const ScenarioResult& result) {
    const auto who = result.run.participant_addresses();
    const auto hybrid = report::balances_excluding_gas(result.run.chain(), who);
    const auto oracle = report::balances_excluding_gas(result.oracle.chain, who);
    json diff = json::object();
    for (std::size_t i = 0; i < who.size(); ++i) {
        if (hybrid[i] != oracle[i]) {
            diff[result.run.agents()[i].name] = {{"hybrid", to_decimal(hybrid[i])}, {"oracle", to_decimal(oracle[i])}};
        }
    }
    return diff;
}

json result_json(const ScenarioFile& file, const ScenarioResult& r) {
    const auto& run = r.run;
    json policies = json::object();
    for (const auto& a : run.agents()) policies[a.name] = std::string(protocol::to_string(a.policy));
    std::vector<Wei> balances;
    for (const auto& a : run.agents()) balances.push_back(run.chain().balance(a.address()));

    json out = {
        {"scenario_id", file.scenario_id},
        {"policies", policies},
        {"outcome", std::string(protocol::to_string(run.outcome()))},
        {"winner", winner_name(run)},
        {"final_balances", balances_json(run.agents(), balances)},
        {"gas",
         {{"hybrid_total", std::to_string(r.gas.hybrid_total)},
          {"oracle_total", std::to_string(r.gas.oracle_total)},
          {"dispute_overhead", std::to_string(r.gas.dispute_overhead)}}},
        {"privacy_leak", r.privacy_leak},
        {"stage", std::string(protocol::to_string(run.stage()))},
    };
    if (run.outcome() == protocol::Outcome::Aborted) out["abort_reason"] = run.abort_reason();
    if (r.expectation_failure) out["expectation_failure"] = *r.expectation_failure;
    return out;
}

json compare_json(const ScenarioFile& file, const ScenarioResult& r) {
    const auto who = r.run.participant_addresses();
    const auto hybrid = report::balances_excluding_gas(r.run.chain(), who);
    const auto oracle = report::balances_excluding_gas(r.oracle.chain, who);
    const json diff = balance_diff(r);
    return {
        {"scenario_id", file.scenario_id},
        {"hybrid", {{"balances_excluding_gas", balances_json(r.run.agents(), hybrid)}, {"gas_total", std::to_string(r.gas.hybrid_total)}}},
        {"oracle", {{"balances_excluding_gas", balances_json(r.run.agents(), oracle)}, {"gas_total", std::to_string(r.oracle.gas_total)}}},
        {"balance_diff", diff},
        {"equivalent", diff.empty()},
        {"gas", report::to_json(r.gas)},
    };
}

json trace_json(const ScenarioFile& file, const ScenarioResult& r) {
    const auto& run = r.run;
    std::map<std::size_t, std::string> labels;
    for (const auto& a : run.actions()) labels[a.tx_index] = a.function;
    json stages = json::array();
    for (const auto& s : run.stages()) {
        stages.push_back({{"stage", std::string(protocol::to_string(s.stage))},
                          {"tx_count", std::to_string(s.tx_count)},
                          {"time", std::to_string(s.time)}});
    }
    json channel = json::array();
    for (const auto& m : run.channel().log()) {
        channel.push_back({{"kind", m.kind == protocol::ChannelKind::Bytecode ? "bytecode" : "signature"},
                           {"from", run.agents()[m.from].name},
                           {"to", run.agents()[m.to].name},
                           {"payload", to_hex(m.payload)}});
    }
    return {
        {"scenario_id", file.scenario_id},
        {"ledger", trace::ledger_trace(run.chain(), [&](std::size_t i) {
             auto it = labels.find(i);
             return it == labels.end() ? std::string{} : it->second;
         })},
        {"stages", stages},
        {"offchain_channel", channel},
    };
}

}  // namespace hybridsplit::scenario
