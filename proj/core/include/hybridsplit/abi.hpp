// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "hybridsplit/bytes.hpp"
#include "hybridsplit/word.hpp"

// Call payloads: a 4-byte selector followed by 32-byte head slots. Static
// arguments sit in their head slot (addresses right-aligned); a dynamic
// `bytes` argument stores an offset in its head slot pointing at a length
// word followed by the data, zero-padded to a multiple of 32.
namespace hybridsplit::abi {

using Value = std::variant<Word, Bytes>;

Bytes encode_call(const Selector& selector, const std::vector<Value>& args);
Bytes encode_call(std::string_view signature, const std::vector<Value>& args);

std::optional<Selector> payload_selector(ByteView payload);

/// Head word at `slot`; nullopt when the payload is too short.
std::optional<Word> arg_word(ByteView payload, std::size_t slot);

/// Dynamic bytes referenced by head slot `slot`; nullopt when the offset or
/// length points outside the payload.
std::optional<Bytes> arg_bytes(ByteView payload, std::size_t slot);

}  // namespace hybridsplit::abi
