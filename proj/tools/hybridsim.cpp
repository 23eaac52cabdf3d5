// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

// hybridsim: run, compare or trace scenario files.
//
// Exit codes: 0 ok, 1 input error, 2 expectation or equivalence mismatch.
// Standard output carries only the JSON document.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hybridsplit/error.hpp"
#include "hybridsplit/scenario.hpp"

namespace {

using nlohmann::json;
namespace sc = hybridsplit::scenario;

enum class Command { Run, Compare, Trace };

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kMismatch = 2;

struct Outcome {
    int code = kOk;
    json document;
};

Outcome execute(Command command, const std::string& path, const std::array<std::uint8_t, 32>& seed) {
    try {
        const auto file = sc::load_scenario(path);
        const auto result = sc::run_scenario(file, seed);
        switch (command) {
            case Command::Run:
                return {result.expectation_failure ? kMismatch : kOk, sc::result_json(file, result)};
            case Command::Compare: {
                auto doc = sc::compare_json(file, result);
                return {doc.at("equivalent").get<bool>() ? kOk : kMismatch, std::move(doc)};
            }
            case Command::Trace:
                return {kOk, sc::trace_json(file, result)};
        }
    } catch (const hybridsplit::Error& e) {
        std::cerr << path << ": " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << path << ": " << e.what() << '\n';
    }
    return {kInputError, json{{"file", path}, {"error", true}}};
}

int combine(int a, int b) {
    if (a == kInputError || b == kInputError) return kInputError;
    return std::max(a, b);
}

// One child per file, at most `jobs` alive. Children write their document to
// a temporary file and report their code through the exit status.
std::vector<Outcome> execute_parallel(Command command, const std::vector<std::string>& paths,
                                      const std::array<std::uint8_t, 32>& seed, unsigned jobs) {
    std::vector<Outcome> out(paths.size());
    std::vector<std::string> tmp(paths.size());
    std::vector<pid_t> pids(paths.size(), -1);
    std::size_t next = 0;
    unsigned running = 0;

    auto reap = [&] {
        int status = 0;
        const pid_t pid = ::wait(&status);
        if (pid < 0) return;
        const auto it = std::find(pids.begin(), pids.end(), pid);
        if (it == pids.end()) return;
        const auto i = static_cast<std::size_t>(it - pids.begin());
        --running;
        std::ifstream in(tmp[i]);
        std::stringstream ss;
        ss << in.rdbuf();
        std::remove(tmp[i].c_str());
        const int code = WIFEXITED(status) ? WEXITSTATUS(status) : kInputError;
        try {
            out[i] = {code, json::parse(ss.str())};
        } catch (const json::exception&) {
            out[i] = {kInputError, json{{"file", paths[i]}, {"error", true}}};
        }
    };

    while (next < paths.size() || running > 0) {
        if (next < paths.size() && running < jobs) {
            char name[] = "/tmp/hybridsim-XXXXXX";
            const int fd = ::mkstemp(name);
            if (fd < 0) throw std::runtime_error("mkstemp failed");
            ::close(fd);
            tmp[next] = name;
            std::cout.flush();
            const pid_t pid = ::fork();
            if (pid < 0) throw std::runtime_error("fork failed");
            if (pid == 0) {
                const auto r = execute(command, paths[next], seed);
                std::ofstream(tmp[next]) << r.document.dump();
                std::cerr.flush();
                std::_Exit(r.code);
            }
            pids[next++] = pid;
            ++running;
        } else {
            reap();
        }
    }
    return out;
}

std::array<std::uint8_t, 32> parse_seed(const std::string& hex) {
    const auto bytes = hybridsplit::from_hex(hex);
    if (bytes.size() != 32) throw CLI::ValidationError("--seed", "expected 32 bytes of hex");
    std::array<std::uint8_t, 32> seed{};
    std::copy(bytes.begin(), bytes.end(), seed.begin());
    return seed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid on-chain/off-chain contract simulator"};
    app.require_subcommand(1);

    int indent = -1;
    std::string seed_hex;
    unsigned jobs = 1;
    app.add_option("--json-indent", indent, "Pretty-print output with this indent")->check(CLI::Range(0, 16));
    app.add_option("--seed", seed_hex, "Master seed for participant keys (32-byte hex)");
    app.add_option("--jobs", jobs, "Scenario files processed in parallel")->check(CLI::Range(1u, 256u));

    std::vector<std::string> files;
    Command command = Command::Run;
    const std::array<std::pair<const char*, Command>, 3> commands{{
        {"run", Command::Run}, {"compare", Command::Compare}, {"trace", Command::Trace}}};
    const std::array<const char*, 3> help{"Execute the protocol and report the outcome",
                                          "Compare the hybrid run with the all-on-chain execution",
                                          "Emit the full transaction trace"};
    for (std::size_t i = 0; i < commands.size(); ++i) {
        auto* sub = app.add_subcommand(commands[i].first, help[i]);
        sub->add_option("files", files, "Scenario files")->required()->check(CLI::ExistingFile);
        sub->callback([&command, c = commands[i].second] { command = c; });
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInputError;
    }

    std::array<std::uint8_t, 32> seed{};
    try {
        if (!seed_hex.empty()) seed = parse_seed(seed_hex);
    } catch (const std::exception& e) {
        std::cerr << "--seed: " << e.what() << '\n';
        return kInputError;
    }

    std::vector<Outcome> outcomes;
    if (jobs > 1 && files.size() > 1) {
        outcomes = execute_parallel(command, files, seed, jobs);
    } else {
        for (const auto& f : files) outcomes.push_back(execute(command, f, seed));
    }

    int code = kOk;
    for (const auto& o : outcomes) code = combine(code, o.code);

    if (files.size() == 1) {
        if (outcomes[0].code != kInputError) std::cout << outcomes[0].document.dump(indent) << '\n';
    } else {
        json all = json::array();
        for (const auto& o : outcomes) all.push_back(o.document);
        std::cout << all.dump(indent) << '\n';
    }
    return code;
}
