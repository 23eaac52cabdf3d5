// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#include "hybridsplit/abi.hpp"

#include "hybridsplit/ir.hpp"

namespace hybridsplit::abi {

namespace {

void append_word(Bytes& out, const Word& w) {
    const auto be = to_be32(w);
    out.insert(out.end(), be.begin(), be.end());
}

std::size_t padded(std::size_t n) { return (n + 31) / 32 * 32; }

}  // namespace

Bytes encode_call(const Selector& selector, const std::vector<Value>& args) {
    Bytes out(selector.begin(), selector.end());
    Bytes tail;
    const std::size_t head_size = 32 * args.size();
    for (const auto& arg : args) {
        if (const auto* w = std::get_if<Word>(&arg)) {
            append_word(out, *w);
            continue;
        }
        const auto& data = std::get<Bytes>(arg);
        append_word(out, Word{head_size + tail.size()});
        append_word(tail, Word{data.size()});
        tail.insert(tail.end(), data.begin(), data.end());
        tail.resize(tail.size() + padded(data.size()) - data.size(), 0);
    }
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

Bytes encode_call(std::string_view signature, const std::vector<Value>& args) {
    return encode_call(ir::selector_of(signature), args);
}

std::optional<Selector> payload_selector(ByteView payload) {
    if (payload.size() < 4) return std::nullopt;
    return Selector{payload[0], payload[1], payload[2], payload[3]};
}

std::optional<Word> arg_word(ByteView payload, std::size_t slot) {
    if (payload.size() < 4) return std::nullopt;
    const ByteView args = payload.subspan(4);
    if (slot >= args.size() / 32) return std::nullopt;
    return word_from_be(args.subspan(slot * 32, 32));
}

std::optional<Bytes> arg_bytes(ByteView payload, std::size_t slot) {
    const auto offset = arg_word(payload, slot);
    if (!offset) return std::nullopt;
    const ByteView args = payload.subspan(4);
    if (*offset > args.size() || args.size() - static_cast<std::size_t>(*offset) < 32) return std::nullopt;
    const auto off = static_cast<std::size_t>(*offset);
    const Word len = word_from_be(args.subspan(off, 32));
    if (len > args.size() - off - 32) return std::nullopt;
    const ByteView data = args.subspan(off + 32, static_cast<std::size_t>(len));
    return Bytes(data.begin(), data.end());
}

}  // namespace hybridsplit::abi
