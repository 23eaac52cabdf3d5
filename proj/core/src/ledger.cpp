// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#include "hybridsplit/ledger.hpp"

#include <set>

#include "executor.hpp"
#include "hybridsplit/bytecode.hpp"
#include "hybridsplit/crypto.hpp"
#include "hybridsplit/error.hpp"

namespace hybridsplit::ledger {

std::uint64_t intrinsic_gas(std::size_t payload_size, bool creation) {
    std::uint64_t g = gas::kTransaction + gas::kPayloadByte * payload_size;
    if (creation) g += gas::kCreate + gas::kCodeByte * payload_size;
    return g;
}

bool Account::operator==(const Account& other) const {
    return kind == other.kind && balance == other.balance && nonce == other.nonce && code_hash == other.code_hash &&
           storage == other.storage;
}

Chain::Chain(std::vector<GenesisEntry> genesis, Wei gas_price) : genesis_(std::move(genesis)), gas_price_(gas_price) {
    for (const auto& g : genesis_) {
        if (accounts_.contains(g.address)) throw ConfigError("duplicate genesis address " + g.address.hex());
        accounts_[g.address].balance = g.balance;
    }
}

void Chain::advance_time(std::int64_t delta) {
    if (delta < 0) throw ConfigError("cannot move the clock backwards");
    now_ += static_cast<std::uint64_t>(delta);
}

Wei Chain::balance(const Address& a) const {
    auto it = accounts_.find(a);
    return it == accounts_.end() ? Wei{0} : it->second.balance;
}

Word Chain::storage(const Address& a, const Word& slot) const {
    auto it = accounts_.find(a);
    if (it == accounts_.end()) return 0;
    auto s = it->second.storage.find(slot);
    return s == it->second.storage.end() ? Word{0} : s->second;
}

bool Chain::has_code(const Address& a) const {
    auto it = accounts_.find(a);
    return it != accounts_.end() && it->second.kind == AccountKind::Contract;
}

std::uint64_t Chain::nonce(const Address& a) const {
    auto it = accounts_.find(a);
    return it == accounts_.end() ? 0 : it->second.nonce;
}

const Account* Chain::account(const Address& a) const {
    auto it = accounts_.find(a);
    return it == accounts_.end() ? nullptr : &it->second;
}

Wei Chain::gas_paid(const Address& a) const {
    auto it = gas_paid_.find(a);
    return it == gas_paid_.end() ? Wei{0} : it->second;
}

Receipt Chain::submit(const Transaction& tx) {
    auto sender = accounts_.find(tx.from);
    if (sender == accounts_.end()) throw TransactionRejected("unknown sender " + tx.from.hex());
    if (sender->second.kind != AccountKind::Eoa) throw TransactionRejected("sender is a contract");
    const bool creation = !tx.to.has_value();
    const std::uint64_t intrinsic = intrinsic_gas(tx.payload.size(), creation);
    if (tx.gas_limit < intrinsic) {
        throw TransactionRejected("gas limit " + std::to_string(tx.gas_limit) + " below intrinsic cost " +
                                  std::to_string(intrinsic));
    }
    if (sender->second.balance < tx.value + Wei{tx.gas_limit} * gas_price_) {
        throw TransactionRejected("insufficient balance for value and gas");
    }

    const std::uint64_t start_nonce = sender->second.nonce;
    const std::map<Address, Account> snapshot = accounts_;
    detail::Executor ex(accounts_, references_, now_, tx.gas_limit);
    ex.charge(intrinsic);

    Receipt receipt;
    try {
        if (creation) {
            ByteView payload{tx.payload};
            std::size_t code_size = 0;
            try {
                code_size = bytecode::decode_prefix(payload).second;
            } catch (const DecodeError& e) {
                throw detail::Revert{std::string("malformed code: ") + e.what()};
            }
            const ByteView rest = payload.subspan(code_size);
            if (rest.size() % 32 != 0) throw detail::Revert{"constructor words are not 32-byte aligned"};
            std::vector<Word> words;
            for (std::size_t i = 0; i < rest.size(); i += 32) words.push_back(word_from_be(rest.subspan(i, 32)));
            receipt.created_address = ex.create(tx.from, tx.value, payload.first(code_size), words, 0);
        } else {
            accounts_[tx.from].nonce = start_nonce + 1;
            ex.move_value(tx.from, *tx.to, tx.value);
            if (has_code(*tx.to)) {
                receipt.return_value = ex.call(*tx.to, tx.from, tx.value, tx.payload, 0);
            } else if (!tx.payload.empty()) {
                throw detail::Revert{"call to non-contract " + tx.to->hex()};
            }
        }
        receipt.messages = std::move(ex.messages());
    } catch (const detail::Revert& r) {
        accounts_ = snapshot;
        receipt = Receipt{.status = Status::Reverted, .revert_reason = r.reason};
    } catch (const detail::OutOfGas&) {
        accounts_ = snapshot;
        receipt = Receipt{.status = Status::Reverted, .revert_reason = "out of gas"};
    }
    receipt.gas_used = ex.gas_used();

    Account& from = accounts_[tx.from];
    from.nonce = start_nonce + 1;
    const Wei fee = Wei{receipt.gas_used} * gas_price_;
    from.balance -= fee;
    burned_ += fee;
    gas_paid_[tx.from] += fee;

    history_.push_back(HistoryEntry{.time = now_, .tx = tx, .receipt = receipt});
    return receipt;
}

void Chain::attach_offchain_reference(const Address& contract, OffchainReference reference) {
    if (!reference.contract) throw ConfigError("off-chain reference without code");
    attachment_log_.push_back(AttachmentEntry{.after_tx = history_.size(), .contract = contract, .reference = reference});
    references_[contract] = std::move(reference);
}

std::optional<Word> Chain::evaluate_offchain(const OffchainReference& reference, const Selector& function,
                                             const Address& caller, const std::vector<Word>& args) const {
    if (!reference.contract) return std::nullopt;
    return detail::Executor::evaluate(reference, function, caller, args, now_);
}

Hash32 Chain::state_root() const {
    Bytes buf;
    const auto put_word = [&](const Word& w) {
        const auto be = to_be32(w);
        buf.insert(buf.end(), be.begin(), be.end());
    };
    for (const auto& [addr, acct] : accounts_) {
        buf.insert(buf.end(), addr.bytes.begin(), addr.bytes.end());
        buf.push_back(static_cast<std::uint8_t>(acct.kind));
        put_word(acct.balance);
        put_word(Word{acct.nonce});
        buf.insert(buf.end(), acct.code_hash.bytes.begin(), acct.code_hash.bytes.end());
        put_word(Word{acct.storage.size()});
        for (const auto& [slot, value] : acct.storage) {
            put_word(slot);
            put_word(value);
        }
    }
    return crypto::keccak256(buf);
}

}  // namespace hybridsplit::ledger
