// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#include "hybridsplit/ir.hpp"

#include <array>
#include <set>
#include <utility>

#include "hybridsplit/crypto.hpp"
#include "hybridsplit/error.hpp"

namespace hybridsplit::ir {

namespace {

struct OpInfo {
    Op op;
    std::string_view name;
};

constexpr std::array kOps = {
    OpInfo{Op::Stop, "stop"},
    OpInfo{Op::Return, "return"},
    OpInfo{Op::Revert, "revert"},
    OpInfo{Op::Require, "require"},
    OpInfo{Op::Push, "push"},
    OpInfo{Op::Pop, "pop"},
    OpInfo{Op::Dup, "dup"},
    OpInfo{Op::Swap, "swap"},
    OpInfo{Op::Add, "add"},
    OpInfo{Op::Sub, "sub"},
    OpInfo{Op::Mul, "mul"},
    OpInfo{Op::Div, "div"},
    OpInfo{Op::Mod, "mod"},
    OpInfo{Op::Eq, "eq"},
    OpInfo{Op::Lt, "lt"},
    OpInfo{Op::Gt, "gt"},
    OpInfo{Op::IsZero, "iszero"},
    OpInfo{Op::And, "and"},
    OpInfo{Op::Or, "or"},
    OpInfo{Op::Xor, "xor"},
    OpInfo{Op::Not, "not"},
    OpInfo{Op::Select, "select"},
    OpInfo{Op::Caller, "caller"},
    OpInfo{Op::CallValue, "callvalue"},
    OpInfo{Op::Timestamp, "timestamp"},
    OpInfo{Op::Self, "self"},
    OpInfo{Op::Arg, "arg"},
    OpInfo{Op::ArgBytesHash, "arg_bytes_hash"},
    OpInfo{Op::Load, "load"},
    OpInfo{Op::Store, "store"},
    OpInfo{Op::MapLoad, "map_load"},
    OpInfo{Op::MapStore, "map_store"},
    OpInfo{Op::LoadSlot, "load_slot"},
    OpInfo{Op::Keccak, "keccak"},
    OpInfo{Op::KeccakConst, "keccak_const"},
    OpInfo{Op::EcRecover, "ecrecover"},
    OpInfo{Op::Transfer, "transfer"},
    OpInfo{Op::Call, "call"},
    OpInfo{Op::CallLocal, "call_local"},
    OpInfo{Op::OffchainCall, "offchain_call"},
    OpInfo{Op::Create, "create"},
    OpInfo{Op::Compute, "compute"},
};

enum class Operands { None, Value, A, Data, SelectorA, AB };

Operands operands_of(Op op) {
    switch (op) {
        case Op::Push:
            return Operands::Value;
        case Op::Dup:
        case Op::Swap:
        case Op::Arg:
        case Op::ArgBytesHash:
        case Op::Load:
        case Op::Store:
        case Op::MapLoad:
        case Op::MapStore:
        case Op::Compute:
            return Operands::A;
        case Op::KeccakConst:
            return Operands::Data;
        case Op::Call:
        case Op::CallLocal:
        case Op::OffchainCall:
            return Operands::SelectorA;
        case Op::Create:
            return Operands::AB;
        default:
            return Operands::None;
    }
}

[[noreturn]] void invalid(const Contract& c, const std::string& what) {
    throw ConfigError("contract '" + c.name + "': " + what);
}

}  // namespace

std::string_view op_name(Op op) {
    for (const auto& info : kOps) {
        if (info.op == op) return info.name;
    }
    return "unknown";
}

std::optional<Op> op_from_name(std::string_view name) {
    for (const auto& info : kOps) {
        if (info.name == name) return info.op;
    }
    return std::nullopt;
}

bool is_known_op(std::uint8_t raw) {
    for (const auto& info : kOps) {
        if (static_cast<std::uint8_t>(info.op) == raw) return true;
    }
    return false;
}

std::string_view to_string(FunctionKind kind) {
    switch (kind) {
        case FunctionKind::Light:
            return "light";
        case FunctionKind::Heavy:
            return "heavy";
        default:
            return "unassigned";
    }
}

std::string FunctionSpec::signature() const {
    std::string sig = name + "(";
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (i > 0) sig += ",";
        sig += inputs[i];
    }
    return sig + ")";
}

bool FunctionSpec::has_guard(GuardKind k) const {
    for (const auto& m : modifiers) {
        if (m.kind == k) return true;
    }
    return false;
}

Selector selector_of(std::string_view signature) {
    const Hash32 h = crypto::keccak256(signature);
    return {h.bytes[0], h.bytes[1], h.bytes[2], h.bytes[3]};
}

FunctionSpec make_function(std::string name, std::vector<std::string> inputs, bool transfers_currency,
                           std::vector<Modifier> modifiers, Body body) {
    FunctionSpec f;
    f.name = std::move(name);
    f.inputs = std::move(inputs);
    f.selector = selector_of(f.signature());
    f.transfers_currency = transfers_currency;
    f.modifiers = std::move(modifiers);
    f.body = std::move(body);
    return f;
}

const FunctionSpec* Contract::find(const Selector& sel) const {
    for (const auto& f : functions) {
        if (f.selector == sel) return &f;
    }
    return nullptr;
}

const FunctionSpec* Contract::find(std::string_view fn_name) const {
    for (const auto& f : functions) {
        if (f.name == fn_name) return &f;
    }
    return nullptr;
}

std::optional<std::uint32_t> Contract::variable(std::string_view var_name) const {
    for (std::size_t i = 0; i < variables.size(); ++i) {
        if (variables[i].name == var_name) return static_cast<std::uint32_t>(i);
    }
    return std::nullopt;
}

std::vector<std::uint32_t> Contract::constructor_variables() const {
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < variables.size(); ++i) {
        if (variables[i].kind == VarKind::Participant || variables[i].kind == VarKind::Param) {
            out.push_back(static_cast<std::uint32_t>(i));
        }
    }
    return out;
}

Word mapping_slot(const Word& key, std::uint32_t variable) {
    std::array<std::uint8_t, 64> buf{};
    const auto k = to_be32(key);
    const auto v = to_be32(Word{variable});
    std::copy(k.begin(), k.end(), buf.begin());
    std::copy(v.begin(), v.end(), buf.begin() + 32);
    return word_from_hash(crypto::keccak256(ByteView{buf.data(), buf.size()}));
}

void validate(const Contract& c) {
    if (c.variables.size() > 0xffff) invalid(c, "too many variables");
    if (c.participant_count > c.variables.size()) invalid(c, "participant variables missing");
    for (std::uint32_t i = 0; i < c.variables.size(); ++i) {
        const bool is_participant = c.variables[i].kind == VarKind::Participant;
        if (is_participant != (i < c.participant_count)) {
            invalid(c, "participants must be exactly the first " + std::to_string(c.participant_count) + " variables");
        }
    }

    const auto check_var = [&](std::uint32_t v, const std::string& where) {
        if (v >= c.variables.size()) invalid(c, where + ": variable index " + std::to_string(v) + " out of range");
    };
    const auto check_scalar = [&](std::uint32_t v, const std::string& where) {
        check_var(v, where);
        if (c.variables[v].kind == VarKind::Mapping) invalid(c, where + ": '" + c.variables[v].name + "' is a mapping");
    };
    const auto check_mapping = [&](std::uint32_t v, const std::string& where) {
        check_var(v, where);
        if (c.variables[v].kind != VarKind::Mapping) {
            invalid(c, where + ": '" + c.variables[v].name + "' is not a mapping");
        }
    };

    const auto check_body = [&](const Body& body, const std::string& where) {
        for (const auto& ins : body) {
            const std::string at = where + " (" + std::string(op_name(ins.op)) + ")";
            const Operands kind = operands_of(ins.op);
            if (kind != Operands::Value && ins.value != 0) invalid(c, at + ": unexpected value operand");
            if (kind != Operands::Data && !ins.data.empty()) invalid(c, at + ": unexpected data operand");
            if (kind != Operands::SelectorA && ins.selector != Selector{}) invalid(c, at + ": unexpected selector");
            if (kind == Operands::None || kind == Operands::Value || kind == Operands::Data) {
                if (ins.a != 0 || ins.b != 0) invalid(c, at + ": unexpected integer operand");
            }
            if (kind == Operands::A && ins.b != 0) invalid(c, at + ": unexpected second operand");
            switch (ins.op) {
                case Op::Dup:
                case Op::Swap:
                    if (ins.a < 1 || ins.a > 16) invalid(c, at + ": depth must be 1..16");
                    break;
                case Op::Load:
                case Op::Store:
                    check_scalar(ins.a, at);
                    break;
                case Op::MapLoad:
                case Op::MapStore:
                    check_mapping(ins.a, at);
                    break;
                case Op::Arg:
                case Op::ArgBytesHash:
                    if (ins.a > 0xffff) invalid(c, at + ": argument slot out of range");
                    break;
                case Op::Call:
                case Op::CallLocal:
                case Op::OffchainCall:
                case Op::Create:
                    if (ins.a > 0xff && ins.op != Op::Create) invalid(c, at + ": too many arguments");
                    if (ins.op == Op::Create && (ins.a > 0xffff || ins.b > 0xff)) invalid(c, at + ": operand out of range");
                    break;
                default:
                    break;
            }
        }
    };

    std::set<Selector> selectors;
    std::set<std::string> names;
    for (const auto& f : c.functions) {
        const std::string where = "function '" + f.name + "'";
        if (!f.name.empty()) {
            if (!names.insert(f.name).second) invalid(c, "duplicate function name '" + f.name + "'");
            if (f.selector != selector_of(f.signature())) invalid(c, where + ": selector does not match signature");
        }
        if (!selectors.insert(f.selector).second) invalid(c, where + ": selector collision");
        if (f.modifiers.size() > 0xff) invalid(c, where + ": too many modifiers");
        for (const auto& m : f.modifiers) {
            switch (m.kind) {
                case GuardKind::Payable:
                case GuardKind::Private:
                case GuardKind::Participant:
                    if (m.var_a != 0 || m.var_b != 0) invalid(c, where + ": guard takes no operands");
                    break;
                case GuardKind::Before:
                case GuardKind::After:
                case GuardKind::DeployedAddrOnly:
                case GuardKind::Unresolved:
                    check_scalar(m.var_a, where);
                    if (m.var_b != 0) invalid(c, where + ": guard takes one operand");
                    break;
                case GuardKind::Between:
                    check_scalar(m.var_a, where);
                    check_scalar(m.var_b, where);
                    break;
                case GuardKind::AmountMet:
                case GuardKind::AmountNotMet:
                    check_scalar(m.var_a, where);
                    check_mapping(m.var_b, where);
                    break;
                default:
                    invalid(c, where + ": unknown guard");
            }
        }
        check_body(f.body, where);
    }
    check_body(c.constructor, "constructor");
}

Asm& Asm::op(Op o) {
    body_.push_back(Instruction{.op = o});
    return *this;
}

Asm& Asm::push(const Word& v) {
    body_.push_back(Instruction{.op = Op::Push, .value = v});
    return *this;
}

Asm& Asm::dup(std::uint32_t n) {
    body_.push_back(Instruction{.op = Op::Dup, .a = n});
    return *this;
}

Asm& Asm::swap(std::uint32_t n) {
    body_.push_back(Instruction{.op = Op::Swap, .a = n});
    return *this;
}

Asm& Asm::arg(std::uint32_t slot) {
    body_.push_back(Instruction{.op = Op::Arg, .a = slot});
    return *this;
}

Asm& Asm::arg_bytes_hash(std::uint32_t slot) {
    body_.push_back(Instruction{.op = Op::ArgBytesHash, .a = slot});
    return *this;
}

Asm& Asm::load(std::uint32_t var) {
    body_.push_back(Instruction{.op = Op::Load, .a = var});
    return *this;
}

Asm& Asm::store(std::uint32_t var) {
    body_.push_back(Instruction{.op = Op::Store, .a = var});
    return *this;
}

Asm& Asm::map_load(std::uint32_t var) {
    body_.push_back(Instruction{.op = Op::MapLoad, .a = var});
    return *this;
}

Asm& Asm::map_store(std::uint32_t var) {
    body_.push_back(Instruction{.op = Op::MapStore, .a = var});
    return *this;
}

Asm& Asm::keccak_const(Bytes data) {
    body_.push_back(Instruction{.op = Op::KeccakConst, .data = std::move(data)});
    return *this;
}

Asm& Asm::call(std::string_view signature, std::uint32_t argc) {
    body_.push_back(Instruction{.op = Op::Call, .selector = selector_of(signature), .a = argc});
    return *this;
}

Asm& Asm::call_local(std::string_view signature, std::uint32_t argc) {
    body_.push_back(Instruction{.op = Op::CallLocal, .selector = selector_of(signature), .a = argc});
    return *this;
}

Asm& Asm::create(std::uint32_t bytes_arg, std::uint32_t ctor_words) {
    body_.push_back(Instruction{.op = Op::Create, .a = bytes_arg, .b = ctor_words});
    return *this;
}

Asm& Asm::compute(std::uint32_t units) {
    body_.push_back(Instruction{.op = Op::Compute, .a = units});
    return *this;
}

Asm& Asm::append(const Body& other) {
    body_.insert(body_.end(), other.begin(), other.end());
    return *this;
}

}  // namespace hybridsplit::ir
