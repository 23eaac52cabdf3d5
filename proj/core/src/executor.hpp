// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hybridsplit/ledger.hpp"

namespace hybridsplit::ledger::detail {

struct Revert {
    std::string reason;
};

struct OutOfGas {};

// Executes contract code against a mutable account map. One instance per
// transaction; state rollback is the caller's job.
class Executor {
  public:
    Executor(std::map<Address, Account>& accounts, const std::map<Address, OffchainReference>& references,
             std::uint64_t now, std::optional<std::uint64_t> gas_limit);

    void charge(std::uint64_t units);
    [[nodiscard]] std::uint64_t gas_used() const { return gas_used_; }
    std::vector<Message>& messages() { return messages_; }

    // External entry (transaction or internal call). Reverts when the target
    // has no code.
    Word call(const Address& target, const Address& caller, const Wei& value, ByteView payload, int depth);

    // Deploys `code` with constructor words; returns the new address.
    Address create(const Address& creator, const Wei& value, ByteView code, const std::vector<Word>& words,
                   int depth);

    // Moves value between accounts, creating the recipient if missing.
    void move_value(const Address& from, const Address& to, const Wei& value);

    // Instantiates `ref` on scratch storage and runs one of its functions,
    // unmetered and without entry guards for privacy.
    static std::optional<Word> evaluate(const OffchainReference& ref, const Selector& selector, const Address& caller,
                                        const std::vector<Word>& args, std::uint64_t now);

  private:
    struct Frame {
        Address self;
        Address caller;
        Wei value;
        ByteView calldata;
        int depth = 0;
        const ir::Contract* code = nullptr;
        const ir::FunctionSpec* function = nullptr;
    };

    Word run_function(const Frame& frame, bool external);
    Word run_body(const Frame& frame, const ir::Body& body, const std::string& where);
    void check_guards(const Frame& frame, bool external);
    Word offchain_call(const Frame& frame, const Selector& selector, const std::vector<Word>& args);
    Account& account_of(const Address& a);
    Word load(const Address& a, const Word& slot);
    void store(const Address& a, const Word& slot, const Word& value);

    std::map<Address, Account>& accounts_;
    const std::map<Address, OffchainReference>& references_;
    std::uint64_t now_;
    std::optional<std::uint64_t> gas_limit_;
    std::uint64_t gas_used_ = 0;
    std::vector<Message> messages_;
};

}  // namespace hybridsplit::ledger::detail
