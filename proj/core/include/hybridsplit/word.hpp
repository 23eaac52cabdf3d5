// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "hybridsplit/bytes.hpp"

namespace hybridsplit {

// 256-bit machine word with wrap-around arithmetic. Balances (Wei) use the
// same type.
using Word = boost::multiprecision::uint256_t;
using Wei = Word;

inline const Wei kWeiPerEther = Wei{1'000'000'000'000'000'000ULL};

inline Wei ether(std::uint64_t n) { return kWeiPerEther * n; }

std::array<std::uint8_t, 32> to_be32(const Word& w);

// Big-endian without leading zero bytes; zero encodes as an empty sequence.
Bytes to_be_minimal(const Word& w);

// Up to 32 big-endian bytes.
Word word_from_be(ByteView data);

Word word_from_address(const Address& a);
Address address_from_word(const Word& w);
Word word_from_hash(const Hash32& h);
Hash32 hash_from_word(const Word& w);

std::string to_decimal(const Word& w);

// Throws ConfigError on anything but plain decimal digits in range.
Word parse_decimal(std::string_view text);

}  // namespace hybridsplit
