// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include "executor.hpp"
#include "hybridsplit/abi.hpp"
#include "hybridsplit/bytecode.hpp"
#include "hybridsplit/crypto.hpp"
#include "hybridsplit/error.hpp"

namespace hybridsplit::ledger::detail {

namespace {

[[noreturn]] void revert(std::string reason) { throw Revert{std::move(reason)}; }

std::string describe(const ir::FunctionSpec& f) {
    return f.name.empty() ? "0x" + selector_hex(f.selector) : f.name;
}

std::string_view guard_name(ir::GuardKind k) {
    switch (k) {
        case ir::GuardKind::Payable:
            return "payable";
        case ir::GuardKind::Private:
            return "private";
        case ir::GuardKind::Before:
            return "before";
        case ir::GuardKind::After:
            return "after";
        case ir::GuardKind::Between:
            return "between";
        case ir::GuardKind::Participant:
            return "participant";
        case ir::GuardKind::DeployedAddrOnly:
            return "deployed_addr_only";
        case ir::GuardKind::AmountMet:
            return "amount_met";
        case ir::GuardKind::AmountNotMet:
            return "amount_not_met";
        case ir::GuardKind::Unresolved:
            return "unresolved";
    }
    return "unknown";
}

}  // namespace

Executor::Executor(std::map<Address, Account>& accounts, const std::map<Address, OffchainReference>& references,
                   std::uint64_t now, std::optional<std::uint64_t> gas_limit)
    : accounts_(accounts), references_(references), now_(now), gas_limit_(gas_limit) {}

void Executor::charge(std::uint64_t units) {
    gas_used_ += units;
    if (gas_limit_ && gas_used_ > *gas_limit_) {
        gas_used_ = *gas_limit_;
        throw OutOfGas{};
    }
}

Account& Executor::account_of(const Address& a) {
    auto it = accounts_.find(a);
    if (it == accounts_.end()) revert("no account " + a.hex());
    return it->second;
}

Word Executor::load(const Address& a, const Word& slot) {
    const Account& acct = account_of(a);
    auto it = acct.storage.find(slot);
    return it == acct.storage.end() ? Word{0} : it->second;
}

void Executor::store(const Address& a, const Word& slot, const Word& value) {
    Account& acct = account_of(a);
    if (value == 0) {
        acct.storage.erase(slot);
    } else {
        acct.storage[slot] = value;
    }
}

void Executor::move_value(const Address& from, const Address& to, const Wei& value) {
    if (value == 0) return;
    Account& src = account_of(from);
    if (src.balance < value) revert("insufficient balance in " + from.hex());
    src.balance -= value;
    accounts_[to].balance += value;
}

Word Executor::call(const Address& target, const Address& caller, const Wei& value, ByteView payload, int depth) {
    if (depth > kMaxCallDepth) revert("call depth exceeded");
    auto it = accounts_.find(target);
    if (it == accounts_.end() || it->second.kind != AccountKind::Contract) revert("call to non-contract " + target.hex());
    const auto selector = abi::payload_selector(payload);
    if (!selector) revert("payload has no selector");
    const ir::Contract* code = it->second.code.get();
    const ir::FunctionSpec* fn = code->find(*selector);
    if (fn == nullptr) revert("unknown function 0x" + selector_hex(*selector));
    if (fn->is_private()) revert(describe(*fn) + ": private function");
    if (value != 0 && !fn->is_payable()) revert(describe(*fn) + ": not payable");
    Frame frame{.self = target, .caller = caller, .value = value, .calldata = payload, .depth = depth, .code = code,
                .function = fn};
    return run_function(frame, true);
}

Address Executor::create(const Address& creator, const Wei& value, ByteView code, const std::vector<Word>& words,
                         int depth) {
    if (depth > kMaxCallDepth) revert("call depth exceeded");
    std::shared_ptr<const ir::Contract> contract;
    try {
        contract = std::make_shared<const ir::Contract>(bytecode::decode(code));
    } catch (const DecodeError& e) {
        revert(std::string("malformed code: ") + e.what());
    }
    const auto ctor_vars = contract->constructor_variables();
    if (ctor_vars.size() != words.size()) {
        revert("constructor expects " + std::to_string(ctor_vars.size()) + " words, got " +
               std::to_string(words.size()));
    }

    Account& maker = account_of(creator);
    const Address addr = crypto::contract_address(creator, maker.nonce);
    maker.nonce += 1;

    auto existing = accounts_.find(addr);
    if (existing != accounts_.end() &&
        (existing->second.kind == AccountKind::Contract || existing->second.nonce != 0)) {
        revert("address collision at " + addr.hex());
    }
    Account& acct = accounts_[addr];
    acct.kind = AccountKind::Contract;
    acct.nonce = 1;
    acct.code = contract;
    acct.code_hash = crypto::keccak256(code);
    move_value(creator, addr, value);
    for (std::size_t i = 0; i < words.size(); ++i) store(addr, Word{ctor_vars[i]}, words[i]);

    messages_.push_back(Message{.kind = MessageKind::Create, .from = creator, .to = addr, .value = value});
    Frame frame{.self = addr, .caller = creator, .value = value, .depth = depth, .code = contract.get()};
    run_body(frame, contract->constructor, "constructor");
    return addr;
}

void Executor::check_guards(const Frame& frame, bool external) {
    const ir::FunctionSpec& fn = *frame.function;
    const auto var = [&](std::uint32_t v) { return load(frame.self, Word{v}); };
    const Word now{now_};
    const Word caller = word_from_address(frame.caller);
    const auto amount_met = [&](const ir::Modifier& m) {
        const Word expected = var(m.var_a);
        for (std::uint32_t p = 0; p < frame.code->participant_count; ++p) {
            if (load(frame.self, ir::mapping_slot(var(p), m.var_b)) != expected) return false;
        }
        return true;
    };

    for (const auto& m : fn.modifiers) {
        charge(gas::kInstruction);
        bool ok = true;
        switch (m.kind) {
            case ir::GuardKind::Payable:
                break;
            case ir::GuardKind::Private:
                ok = !external;
                break;
            case ir::GuardKind::Before:
                ok = now <= var(m.var_a);
                break;
            case ir::GuardKind::After:
                ok = now > var(m.var_a);
                break;
            case ir::GuardKind::Between:
                ok = var(m.var_a) < now && now <= var(m.var_b);
                break;
            case ir::GuardKind::Participant:
                ok = false;
                for (std::uint32_t p = 0; p < frame.code->participant_count; ++p) {
                    if (var(p) == caller) ok = true;
                }
                break;
            case ir::GuardKind::DeployedAddrOnly: {
                const Word d = var(m.var_a);
                ok = d != 0 && d == caller;
                break;
            }
            case ir::GuardKind::AmountMet:
                ok = amount_met(m);
                break;
            case ir::GuardKind::AmountNotMet:
                ok = !amount_met(m);
                break;
            case ir::GuardKind::Unresolved:
                ok = var(m.var_a) == 0;
                break;
        }
        if (!ok) revert(describe(fn) + ": " + std::string(guard_name(m.kind)) + " guard failed");
    }
}

Word Executor::run_function(const Frame& frame, bool external) {
    check_guards(frame, external);
    return run_body(frame, frame.function->body, describe(*frame.function));
}

Word Executor::offchain_call(const Frame& frame, const Selector& selector, const std::vector<Word>& args) {
    auto it = references_.find(frame.self);
    if (it == references_.end()) revert("no off-chain reference for " + frame.self.hex());
    auto result = evaluate(it->second, selector, frame.caller, args, now_);
    if (!result) revert("off-chain function 0x" + selector_hex(selector) + " reverted");
    return *result;
}

std::optional<Word> Executor::evaluate(const OffchainReference& ref, const Selector& selector, const Address& caller,
                                       const std::vector<Word>& args, std::uint64_t now) {
    static const std::map<Address, OffchainReference> kNoReferences;
    std::map<Address, Account> scratch;
    Executor ex(scratch, kNoReferences, now, std::nullopt);
    const ir::Contract& contract = *ref.contract;
    try {
        const auto ctor_vars = contract.constructor_variables();
        if (ctor_vars.size() != ref.init_words.size()) return std::nullopt;
        const Address self{};
        Account& acct = scratch[self];
        acct.kind = AccountKind::Contract;
        acct.code = ref.contract;
        for (std::size_t i = 0; i < ctor_vars.size(); ++i) ex.store(self, Word{ctor_vars[i]}, ref.init_words[i]);
        Frame ctor{.self = self, .caller = caller, .value = 0, .depth = 0, .code = &contract};
        ex.run_body(ctor, contract.constructor, "constructor");

        const ir::FunctionSpec* fn = contract.find(selector);
        if (fn == nullptr) return std::nullopt;
        std::vector<abi::Value> values(args.begin(), args.end());
        const Bytes payload = abi::encode_call(selector, values);
        Frame frame{.self = self, .caller = caller, .value = 0, .calldata = payload, .depth = 0, .code = &contract,
                    .function = fn};
        return ex.run_function(frame, false);
    } catch (const Revert&) {
        return std::nullopt;
    }
}

Word Executor::run_body(const Frame& frame, const ir::Body& body, const std::string& where) {
    std::vector<Word> stack;
    stack.reserve(16);
    const auto pop = [&]() {
        if (stack.empty()) revert(where + ": stack underflow");
        Word w = std::move(stack.back());
        stack.pop_back();
        return w;
    };
    const auto push = [&](Word w) {
        if (stack.size() >= kMaxStack) revert(where + ": stack overflow");
        stack.push_back(std::move(w));
    };
    const auto pop_args = [&](std::uint32_t argc) {
        std::vector<Word> args(argc);
        for (std::uint32_t i = argc; i > 0; --i) args[i - 1] = pop();
        return args;
    };
    const auto to_values = [](const std::vector<Word>& words) { return std::vector<abi::Value>(words.begin(), words.end()); };

    for (const auto& ins : body) {
        charge(gas::kInstruction);
        switch (ins.op) {
            case ir::Op::Stop:
                return 0;
            case ir::Op::Return:
                return pop();
            case ir::Op::Revert:
                revert(where + ": revert");
            case ir::Op::Require:
                if (pop() == 0) revert(where + ": require failed");
                break;
            case ir::Op::Push:
                push(ins.value);
                break;
            case ir::Op::Pop:
                pop();
                break;
            case ir::Op::Dup:
                if (stack.size() < ins.a) revert(where + ": stack underflow");
                push(stack[stack.size() - ins.a]);
                break;
            case ir::Op::Swap:
                if (stack.size() < ins.a + 1) revert(where + ": stack underflow");
                std::swap(stack.back(), stack[stack.size() - 1 - ins.a]);
                break;
            case ir::Op::Add: {
                Word x = pop();
                push(x + pop());
                break;
            }
            case ir::Op::Sub: {
                Word x = pop();
                push(x - pop());
                break;
            }
            case ir::Op::Mul: {
                Word x = pop();
                push(x * pop());
                break;
            }
            case ir::Op::Div: {
                Word x = pop();
                Word y = pop();
                push(y == 0 ? Word{0} : Word{x / y});
                break;
            }
            case ir::Op::Mod: {
                Word x = pop();
                Word y = pop();
                push(y == 0 ? Word{0} : Word{x % y});
                break;
            }
            case ir::Op::Eq: {
                Word x = pop();
                push(x == pop() ? 1 : 0);
                break;
            }
            case ir::Op::Lt: {
                Word x = pop();
                push(x < pop() ? 1 : 0);
                break;
            }
            case ir::Op::Gt: {
                Word x = pop();
                push(x > pop() ? 1 : 0);
                break;
            }
            case ir::Op::IsZero:
                push(pop() == 0 ? 1 : 0);
                break;
            case ir::Op::And: {
                Word x = pop();
                push(x & pop());
                break;
            }
            case ir::Op::Or: {
                Word x = pop();
                push(x | pop());
                break;
            }
            case ir::Op::Xor: {
                Word x = pop();
                push(x ^ pop());
                break;
            }
            case ir::Op::Not:
                push(~pop());
                break;
            case ir::Op::Select: {
                Word cond = pop();
                Word a = pop();
                Word b = pop();
                push(cond != 0 ? a : b);
                break;
            }
            case ir::Op::Caller:
                push(word_from_address(frame.caller));
                break;
            case ir::Op::CallValue:
                push(frame.value);
                break;
            case ir::Op::Timestamp:
                push(Word{now_});
                break;
            case ir::Op::Self:
                push(word_from_address(frame.self));
                break;
            case ir::Op::Arg: {
                auto w = abi::arg_word(frame.calldata, ins.a);
                if (!w) revert(where + ": missing argument " + std::to_string(ins.a));
                push(*w);
                break;
            }
            case ir::Op::ArgBytesHash: {
                auto data = abi::arg_bytes(frame.calldata, ins.a);
                if (!data) revert(where + ": malformed bytes argument " + std::to_string(ins.a));
                push(word_from_hash(crypto::keccak256(*data)));
                break;
            }
            case ir::Op::Load:
                push(load(frame.self, Word{ins.a}));
                break;
            case ir::Op::Store:
                store(frame.self, Word{ins.a}, pop());
                break;
            case ir::Op::MapLoad:
                push(load(frame.self, ir::mapping_slot(pop(), ins.a)));
                break;
            case ir::Op::MapStore: {
                Word key = pop();
                store(frame.self, ir::mapping_slot(key, ins.a), pop());
                break;
            }
            case ir::Op::LoadSlot:
                push(load(frame.self, pop()));
                break;
            case ir::Op::Keccak: {
                const auto be = to_be32(pop());
                push(word_from_hash(crypto::keccak256(ByteView{be.data(), be.size()})));
                break;
            }
            case ir::Op::KeccakConst:
                push(word_from_hash(crypto::keccak256(ins.data)));
                break;
            case ir::Op::EcRecover: {
                charge(gas::kEcRecover);
                const Word hash = pop();
                const Word v = pop();
                const Word r = pop();
                const Word s = pop();
                if (v > 255) {
                    push(0);
                    break;
                }
                crypto::Signature sig{.v = static_cast<std::uint8_t>(v), .r = to_be32(r), .s = to_be32(s)};
                const auto signer = crypto::ecrecover(hash_from_word(hash), sig);
                push(signer ? word_from_address(*signer) : Word{0});
                break;
            }
            case ir::Op::Transfer: {
                const Address to = address_from_word(pop());
                const Wei amount = pop();
                move_value(frame.self, to, amount);
                messages_.push_back(Message{.kind = MessageKind::Transfer, .from = frame.self, .to = to, .value = amount});
                break;
            }
            case ir::Op::Call: {
                const Address target = address_from_word(pop());
                const Bytes payload = abi::encode_call(ins.selector, to_values(pop_args(ins.a)));
                messages_.push_back(
                    Message{.kind = MessageKind::Call, .from = frame.self, .to = target, .selector = ins.selector});
                push(call(target, frame.self, 0, payload, frame.depth + 1));
                break;
            }
            case ir::Op::CallLocal: {
                const ir::FunctionSpec* fn = frame.code->find(ins.selector);
                if (fn == nullptr) revert(where + ": unknown local function 0x" + selector_hex(ins.selector));
                if (frame.depth + 1 > kMaxCallDepth) revert("call depth exceeded");
                const Bytes payload = abi::encode_call(ins.selector, to_values(pop_args(ins.a)));
                Frame inner{.self = frame.self, .caller = frame.caller, .value = frame.value, .calldata = payload,
                            .depth = frame.depth + 1, .code = frame.code, .function = fn};
                push(run_function(inner, false));
                break;
            }
            case ir::Op::OffchainCall:
                push(offchain_call(frame, ins.selector, pop_args(ins.a)));
                break;
            case ir::Op::Create: {
                auto code = abi::arg_bytes(frame.calldata, ins.a);
                if (!code) revert(where + ": malformed bytes argument " + std::to_string(ins.a));
                charge(gas::kCreate + gas::kCodeByte * code->size());
                const auto words = pop_args(ins.b);
                push(word_from_address(create(frame.self, 0, *code, words, frame.depth + 1)));
                break;
            }
            case ir::Op::Compute:
                charge(gas::kInstruction * static_cast<std::uint64_t>(ins.a));
                break;
        }
    }
    return 0;
}

}  // namespace hybridsplit::ledger::detail
