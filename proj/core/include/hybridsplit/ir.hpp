// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hybridsplit/bytes.hpp"
#include "hybridsplit/word.hpp"

/// Contract intermediate representation: a small deterministic stack
/// machine over 256-bit words, plus declarative function guards.
///
/// Storage layout: scalar variable k lives in slot k; entry `key` of mapping
/// variable k lives in slot keccak256(be32(key) || be32(k)). Participants are
/// always variables 0..participant_count-1.
namespace hybridsplit::ir {

enum class Op : std::uint8_t {
    Stop = 0x00,
    Return = 0x01,  // pops result
    Revert = 0x02,
    Require = 0x03,  // pops condition, reverts when zero

    Push = 0x10,  // value
    Pop = 0x11,
    Dup = 0x12,   // a = depth, 1 is the top
    Swap = 0x13,  // a = depth, swaps top with the a+1-th item

    Add = 0x20,
    Sub = 0x21,
    Mul = 0x22,
    Div = 0x23,  // x / 0 = 0
    Mod = 0x24,  // x % 0 = 0
    Eq = 0x25,
    Lt = 0x26,  // top < second
    Gt = 0x27,  // top > second
    IsZero = 0x28,
    And = 0x29,
    Or = 0x2a,
    Xor = 0x2b,
    Not = 0x2c,
    Select = 0x2d,  // pops cond, a, b; pushes cond ? a : b

    Caller = 0x30,
    CallValue = 0x31,
    Timestamp = 0x32,
    Self = 0x33,
    Arg = 0x34,           // a = argument slot
    ArgBytesHash = 0x35,  // a = argument slot of a dynamic `bytes`

    Load = 0x40,      // a = variable
    Store = 0x41,     // a = variable; pops value
    MapLoad = 0x42,   // a = mapping variable; pops key
    MapStore = 0x43,  // a = mapping variable; pops key, then value
    LoadSlot = 0x44,  // pops raw slot number

    Keccak = 0x50,       // pops word, pushes keccak256(be32(word))
    KeccakConst = 0x51,  // pushes keccak256(data)
    EcRecover = 0x52,    // pops hash, v, r, s; pushes signer address or 0

    Transfer = 0x60,     // pops recipient, then amount
    Call = 0x61,         // selector, a = argc; pops target, then argc args
    CallLocal = 0x62,    // selector, a = argc; function of the same contract
    OffchainCall = 0x63, // selector, a = argc; result agreed off-chain
    Create = 0x64,       // a = bytes argument slot, b = constructor word count
    Compute = 0x70,      // a = declared work units
};

struct Instruction {
    Op op = Op::Stop;
    Word value{};
    Bytes data;
    Selector selector{};
    std::uint32_t a = 0;
    std::uint32_t b = 0;

    bool operator==(const Instruction&) const = default;
};

using Body = std::vector<Instruction>;

std::string_view op_name(Op op);
std::optional<Op> op_from_name(std::string_view name);
bool is_known_op(std::uint8_t raw);

enum class GuardKind : std::uint8_t {
    Payable = 0,
    Private = 1,
    Before = 2,          // now <= var_a
    After = 3,           // now > var_a
    Between = 4,         // var_a < now <= var_b
    Participant = 5,     // caller is one of the participants
    DeployedAddrOnly = 6,// var_a != 0 and caller == var_a
    AmountMet = 7,       // every participant's entry in mapping var_b == var_a
    AmountNotMet = 8,
    Unresolved = 9,      // var_a == 0
};

struct Modifier {
    GuardKind kind = GuardKind::Payable;
    std::uint32_t var_a = 0;
    std::uint32_t var_b = 0;

    bool operator==(const Modifier&) const = default;
};

enum class FunctionKind : std::uint8_t { Unassigned = 0, Light = 1, Heavy = 2 };

std::string_view to_string(FunctionKind kind);

struct FunctionSpec {
    std::string name;
    std::vector<std::string> inputs;  // ABI type names
    Selector selector{};
    FunctionKind kind = FunctionKind::Unassigned;
    bool transfers_currency = false;
    bool padded = false;  // extra dispute function injected by the splitter
    std::vector<Modifier> modifiers;
    Body body;

    [[nodiscard]] std::string signature() const;
    [[nodiscard]] bool has_guard(GuardKind k) const;
    [[nodiscard]] bool is_private() const { return has_guard(GuardKind::Private); }
    [[nodiscard]] bool is_payable() const { return has_guard(GuardKind::Payable); }

    bool operator==(const FunctionSpec&) const = default;
};

Selector selector_of(std::string_view signature);

/// Builds a function with its selector derived from name and inputs.
FunctionSpec make_function(std::string name, std::vector<std::string> inputs, bool transfers_currency,
                           std::vector<Modifier> modifiers, Body body);

enum class VarKind : std::uint8_t {
    Participant = 0,  // constructor-initialized address
    Param = 1,        // constructor-initialized word
    State = 2,        // zero-initialized word
    Mapping = 3,
};

struct Variable {
    std::string name;
    VarKind kind = VarKind::State;
    bool operator==(const Variable&) const = default;
};

enum class ContractRole : std::uint8_t { Whole = 1, OnChain = 2, OffChain = 3 };

struct Contract {
    ContractRole role = ContractRole::Whole;
    std::string name;
    std::uint32_t participant_count = 0;
    std::vector<Variable> variables;
    std::vector<FunctionSpec> functions;
    Body constructor;  // runs once at creation, after constructor words are stored

    [[nodiscard]] const FunctionSpec* find(const Selector& sel) const;
    [[nodiscard]] const FunctionSpec* find(std::string_view name) const;
    [[nodiscard]] std::optional<std::uint32_t> variable(std::string_view name) const;
    /// Variables filled from constructor words, in order.
    [[nodiscard]] std::vector<std::uint32_t> constructor_variables() const;

    bool operator==(const Contract&) const = default;
};

/// Checks operand ranges, guard references and selector uniqueness.
/// Throws ConfigError describing the first problem.
void validate(const Contract& c);

Word mapping_slot(const Word& key, std::uint32_t variable);

/// Fluent body builder used by the contract templates.
class Asm {
  public:
    Asm& op(Op o);
    Asm& push(const Word& v);
    Asm& dup(std::uint32_t n);
    Asm& swap(std::uint32_t n);
    Asm& arg(std::uint32_t slot);
    Asm& arg_bytes_hash(std::uint32_t slot);
    Asm& load(std::uint32_t var);
    Asm& store(std::uint32_t var);
    Asm& map_load(std::uint32_t var);
    Asm& map_store(std::uint32_t var);
    Asm& keccak_const(Bytes data);
    Asm& call(std::string_view signature, std::uint32_t argc);
    Asm& call_local(std::string_view signature, std::uint32_t argc);
    Asm& create(std::uint32_t bytes_arg, std::uint32_t ctor_words);
    Asm& compute(std::uint32_t units);
    Asm& append(const Body& other);

    [[nodiscard]] Body build() && { return std::move(body_); }
    [[nodiscard]] Body build() const& { return body_; }
    [[nodiscard]] const Body& body() const { return body_; }

  private:
    Body body_;
};

}  // namespace hybridsplit::ir
