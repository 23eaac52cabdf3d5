// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string_view>
#include <utility>

#include "hybridsplit/bytes.hpp"
#include "hybridsplit/ir.hpp"

// Canonical contract bytecode.
//
//   magic      "hybridsplit-v1" (14 raw bytes)
//   u8         role (1 whole, 2 on-chain, 3 off-chain)
//   u8         flags (bit 0: identifiers present)
//   [str]      contract name
//   u8         participant count
//   u16        variable count, then per variable: u8 kind [, str name]
//   u16        function count, then per function:
//                selector (4 bytes) [, str name, u8 input count, str input...]
//                u8 flags (bits 0-1 kind, bit 2 transfers currency, bit 3 padded)
//                u8 modifier count, then per modifier: u8 guard, u16 var_a, u16 var_b
//                body
//   body       constructor
//
//   body       u32 instruction count, then per instruction u8 opcode and
//              operands: push = u8 length + minimal big-endian value;
//              keccak_const = u32 length + data; call/call_local/offchain_call
//              = selector + u8 argc; create = u16 + u8; compute = u32; other
//              single-operand ops = u16.
//   str        u32 length + bytes
//
// All integers are big-endian. Decoding is strict, so every contract has
// exactly one encoding and encode(decode(b)) == b for every accepted b.
namespace hybridsplit::bytecode {

inline constexpr std::string_view kMagic = "hybridsplit-v1";

struct EncodeOptions {
    /// Identifiers (contract, variable, function names and input types).
    /// Deployed on-chain code omits them; dispatch only needs selectors.
    bool include_names = true;
};

/// Throws SplitError if identifiers are requested but a function is unnamed.
Bytes encode(const ir::Contract& contract, EncodeOptions options = {});

/// Decodes a contract that spans the whole input. Throws DecodeError.
ir::Contract decode(ByteView code);

/// Decodes a contract from the front of the input and returns how many
/// bytes it occupied; the remainder is left to the caller (constructor words).
std::pair<ir::Contract, std::size_t> decode_prefix(ByteView code);

}  // namespace hybridsplit::bytecode
