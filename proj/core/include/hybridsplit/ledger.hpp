// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hybridsplit/bytes.hpp"
#include "hybridsplit/ir.hpp"
#include "hybridsplit/word.hpp"

/// Deterministic single-chain simulator: accounts, a controllable clock and
/// strictly sequential transaction execution with abstract gas metering.
namespace hybridsplit::ledger {

/// Fixed cost table, in gas units.
namespace gas {
inline constexpr std::uint64_t kTransaction = 21000;
inline constexpr std::uint64_t kPayloadByte = 16;
inline constexpr std::uint64_t kCreate = 32000;
inline constexpr std::uint64_t kCodeByte = 200;
inline constexpr std::uint64_t kEcRecover = 3000;
inline constexpr std::uint64_t kInstruction = 10;
}  // namespace gas

inline const Wei kDefaultGasPrice = Wei{1'000'000'000};  // 1 gwei
inline constexpr std::uint64_t kDefaultGasLimit = 500'000'000;
inline constexpr std::size_t kMaxStack = 1024;
inline constexpr int kMaxCallDepth = 64;

/// Gas charged before any code runs.
std::uint64_t intrinsic_gas(std::size_t payload_size, bool creation);

enum class AccountKind : std::uint8_t { Eoa = 0, Contract = 1 };

struct Account {
    AccountKind kind = AccountKind::Eoa;
    Wei balance{};
    std::uint64_t nonce = 0;
    std::shared_ptr<const ir::Contract> code;  // contracts only
    Hash32 code_hash{};                         // keccak256 of the deployed code bytes
    std::map<Word, Word> storage;               // zero slots are never stored

    bool operator==(const Account& other) const;
};

struct Transaction {
    Address from;
    std::optional<Address> to;  // absent: contract creation
    Wei value{};
    Bytes payload;
    std::uint64_t gas_limit = kDefaultGasLimit;
};

enum class MessageKind : std::uint8_t { Call, Transfer, Create };

/// Internal message emitted by contract code.
struct Message {
    MessageKind kind = MessageKind::Call;
    Address from;
    Address to;
    Wei value{};
    std::optional<Selector> selector;
};

enum class Status : std::uint8_t { Success, Reverted };

struct Receipt {
    Status status = Status::Success;
    std::string revert_reason;
    std::uint64_t gas_used = 0;
    std::optional<Address> created_address;
    std::vector<Message> messages;
    std::optional<Word> return_value;

    [[nodiscard]] bool ok() const { return status == Status::Success; }
};

struct GenesisEntry {
    Address address;
    Wei balance;
};

/// Contract whose results the chain takes as agreed without executing it
/// on-chain (target of offchain_call), with its constructor words.
struct OffchainReference {
    std::shared_ptr<const ir::Contract> contract;
    std::vector<Word> init_words;
};

struct HistoryEntry {
    std::uint64_t time = 0;
    Transaction tx;
    Receipt receipt;
};

struct AttachmentEntry {
    std::size_t after_tx = 0;  // number of transactions executed before attaching
    Address contract;
    OffchainReference reference;
};

class Chain {
  public:
    /// Throws ConfigError on a duplicate address.
    explicit Chain(std::vector<GenesisEntry> genesis = {}, Wei gas_price = kDefaultGasPrice);

    /// Throws ConfigError when delta is negative.
    void advance_time(std::int64_t delta);
    [[nodiscard]] std::uint64_t now() const { return now_; }

    /// Executes one transaction atomically. Throws TransactionRejected when
    /// the sender is unknown or not an EOA, cannot cover value plus
    /// gas_limit * gas_price, or the gas limit is below the intrinsic cost;
    /// nothing changes in that case. Failures during execution yield a
    /// reverted receipt instead: all writes are rolled back, while the
    /// sender's nonce bump and gas charge stay.
    Receipt submit(const Transaction& tx);

    [[nodiscard]] Wei balance(const Address& a) const;
    [[nodiscard]] Word storage(const Address& a, const Word& slot) const;
    [[nodiscard]] bool has_code(const Address& a) const;
    [[nodiscard]] std::uint64_t nonce(const Address& a) const;
    [[nodiscard]] const Account* account(const Address& a) const;
    [[nodiscard]] const std::map<Address, Account>& accounts() const { return accounts_; }

    [[nodiscard]] Wei gas_price() const { return gas_price_; }
    /// Wei paid for gas by an account so far.
    [[nodiscard]] Wei gas_paid(const Address& a) const;
    [[nodiscard]] Wei total_gas_burned() const { return burned_; }

    /// keccak256 over every account (address order) with balance, nonce,
    /// code hash and storage. Independent of the clock.
    [[nodiscard]] Hash32 state_root() const;

    [[nodiscard]] const std::vector<GenesisEntry>& genesis() const { return genesis_; }
    [[nodiscard]] const std::vector<HistoryEntry>& history() const { return history_; }
    [[nodiscard]] const std::vector<AttachmentEntry>& attachments() const { return attachment_log_; }

    /// Binds offchain_call instructions of `contract` to `reference`.
    void attach_offchain_reference(const Address& contract, OffchainReference reference);

    /// Runs a function of an off-chain contract against scratch storage at the
    /// current time, unmetered. Returns nullopt when it reverts.
    [[nodiscard]] std::optional<Word> evaluate_offchain(const OffchainReference& reference, const Selector& function,
                                                        const Address& caller, const std::vector<Word>& args = {}) const;

  private:
    std::map<Address, Account> accounts_;
    std::map<Address, OffchainReference> references_;
    std::map<Address, Wei> gas_paid_;
    std::vector<GenesisEntry> genesis_;
    std::vector<HistoryEntry> history_;
    std::vector<AttachmentEntry> attachment_log_;
    Wei gas_price_;
    Wei burned_{};
    std::uint64_t now_ = 0;
};

}  // namespace hybridsplit::ledger
