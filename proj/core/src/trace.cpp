// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#include "hybridsplit/trace.hpp"

#include "hybridsplit/bytecode.hpp"
#include "hybridsplit/error.hpp"

namespace hybridsplit::trace {

namespace {

using nlohmann::json;

std::string dec(const Word& w) { return to_decimal(w); }

std::uint64_t to_u64(const json& j, const char* field) {
    const Word w = parse_decimal(j.at(field).get<std::string>());
    if (w > std::numeric_limits<std::uint64_t>::max()) throw DecodeError(std::string(field) + " out of range");
    return static_cast<std::uint64_t>(w);
}

}  // namespace

json transaction_record(std::size_t index, const ledger::HistoryEntry& entry) {
    const auto& tx = entry.tx;
    const auto& r = entry.receipt;
    json rec = {
        {"index", std::to_string(index)},
        {"time", std::to_string(entry.time)},
        {"from", tx.from.hex()},
        {"to", tx.to ? json(tx.to->hex()) : json(nullptr)},
        {"value_wei", dec(tx.value)},
        {"status", r.ok() ? "success" : "reverted"},
        {"gas_used", std::to_string(r.gas_used)},
        {"created_address", r.created_address ? json(r.created_address->hex()) : json(nullptr)},
        {"gas_limit", std::to_string(tx.gas_limit)},
        {"payload", to_hex(tx.payload)},
    };
    if (!r.ok()) rec["revert_reason"] = r.revert_reason;
    return rec;
}

json ledger_trace(const ledger::Chain& chain, const Labeler& label) {
    json genesis = json::array();
    for (const auto& g : chain.genesis()) genesis.push_back({{"address", g.address.hex()}, {"balance_wei", dec(g.balance)}});
    json txs = json::array();
    for (std::size_t i = 0; i < chain.history().size(); ++i) {
        json rec = transaction_record(i, chain.history()[i]);
        if (label) rec["function"] = label(i);
        txs.push_back(std::move(rec));
    }
    json attachments = json::array();
    for (const auto& a : chain.attachments()) {
        json words = json::array();
        for (const auto& w : a.reference.init_words) words.push_back(dec(w));
        attachments.push_back({
            {"after_tx", std::to_string(a.after_tx)},
            {"contract", a.contract.hex()},
            {"bytecode", to_hex(bytecode::encode(*a.reference.contract))},
            {"init_words", words},
        });
    }
    return {
        {"genesis", genesis},
        {"gas_price_wei", dec(chain.gas_price())},
        {"transactions", txs},
        {"attachments", attachments},
        {"final_time", std::to_string(chain.now())},
        {"state_root", chain.state_root().hex()},
    };
}

ledger::Chain replay(const json& j) {
    try {
        std::vector<ledger::GenesisEntry> genesis;
        for (const auto& g : j.at("genesis")) {
            genesis.push_back({Address::from_hex(g.at("address").get<std::string>()),
                               parse_decimal(g.at("balance_wei").get<std::string>())});
        }
        ledger::Chain chain(std::move(genesis), parse_decimal(j.at("gas_price_wei").get<std::string>()));

        std::multimap<std::uint64_t, const json*> attachments;
        for (const auto& a : j.at("attachments")) attachments.emplace(to_u64(a, "after_tx"), &a);
        const auto attach_due = [&](std::size_t executed) {
            auto [lo, hi] = attachments.equal_range(executed);
            for (auto it = lo; it != hi; ++it) {
                const json& a = *it->second;
                ledger::OffchainReference ref;
                ref.contract = std::make_shared<const ir::Contract>(
                    bytecode::decode(from_hex(a.at("bytecode").get<std::string>())));
                for (const auto& w : a.at("init_words")) ref.init_words.push_back(parse_decimal(w.get<std::string>()));
                chain.attach_offchain_reference(Address::from_hex(a.at("contract").get<std::string>()), std::move(ref));
            }
        };

        const auto advance_to = [&](std::uint64_t t) {
            if (t < chain.now()) throw DecodeError("trace time goes backwards");
            chain.advance_time(static_cast<std::int64_t>(t - chain.now()));
        };

        std::size_t executed = 0;
        for (const auto& rec : j.at("transactions")) {
            attach_due(executed);
            advance_to(to_u64(rec, "time"));
            ledger::Transaction tx{.from = Address::from_hex(rec.at("from").get<std::string>()),
                                   .value = parse_decimal(rec.at("value_wei").get<std::string>()),
                                   .payload = from_hex(rec.at("payload").get<std::string>()),
                                   .gas_limit = to_u64(rec, "gas_limit")};
            if (!rec.at("to").is_null()) tx.to = Address::from_hex(rec.at("to").get<std::string>());
            const auto receipt = chain.submit(tx);
            const bool ok = rec.at("status").get<std::string>() == "success";
            if (receipt.ok() != ok || receipt.gas_used != to_u64(rec, "gas_used")) {
                throw DecodeError("replayed transaction " + std::to_string(executed) + " diverged from the trace");
            }
            ++executed;
        }
        attach_due(executed);
        advance_to(to_u64(j, "final_time"));
        return chain;
    } catch (const json::exception& e) {
        throw DecodeError(std::string("malformed trace: ") + e.what());
    } catch (const Error& e) {
        if (dynamic_cast<const DecodeError*>(&e) != nullptr) throw;
        throw DecodeError(std::string("trace replay failed: ") + e.what());
    }
}

}  // namespace hybridsplit::trace
