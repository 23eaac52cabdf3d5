// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#include "hybridsplit/bytecode.hpp"

#include <limits>

#include "hybridsplit/error.hpp"

namespace hybridsplit::bytecode {

namespace {

constexpr std::uint8_t kFlagNames = 0x01;

class Writer {
  public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint32_t v) {
        if (v > 0xffff) throw SplitError("value does not fit in u16");
        out_.push_back(static_cast<std::uint8_t>(v >> 8));
        out_.push_back(static_cast<std::uint8_t>(v));
    }
    void u32(std::uint64_t v) {
        if (v > std::numeric_limits<std::uint32_t>::max()) throw SplitError("value does not fit in u32");
        for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
    }
    void raw(ByteView b) { out_.insert(out_.end(), b.begin(), b.end()); }
    void bytes(ByteView b) {
        u32(b.size());
        raw(b);
    }
    void str(std::string_view s) { bytes(as_bytes(s)); }

    Bytes take() && { return std::move(out_); }

  private:
    Bytes out_;
};

class Reader {
  public:
    explicit Reader(ByteView in) : in_(in) {}

    std::uint8_t u8() {
        need(1);
        return in_[pos_++];
    }
    std::uint32_t u16() {
        need(2);
        const std::uint32_t v = (std::uint32_t{in_[pos_]} << 8) | in_[pos_ + 1];
        pos_ += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | in_[pos_++];
        return v;
    }
    ByteView raw(std::size_t n) {
        need(n);
        ByteView v = in_.subspan(pos_, n);
        pos_ += n;
        return v;
    }
    Bytes bytes() {
        const std::uint32_t n = u32();
        ByteView v = raw(n);
        return {v.begin(), v.end()};
    }
    std::string str() {
        const Bytes b = bytes();
        return {b.begin(), b.end()};
    }
    [[nodiscard]] std::size_t position() const { return pos_; }

  private:
    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) throw DecodeError("bytecode truncated at offset " + std::to_string(pos_));
    }

    ByteView in_;
    std::size_t pos_ = 0;
};

void write_body(Writer& w, const ir::Body& body) {
    w.u32(body.size());
    for (const auto& ins : body) {
        w.u8(static_cast<std::uint8_t>(ins.op));
        switch (ins.op) {
            case ir::Op::Push: {
                const Bytes be = to_be_minimal(ins.value);
                w.u8(static_cast<std::uint8_t>(be.size()));
                w.raw(be);
                break;
            }
            case ir::Op::KeccakConst:
                w.bytes(ins.data);
                break;
            case ir::Op::Call:
            case ir::Op::CallLocal:
            case ir::Op::OffchainCall:
                w.raw(ByteView{ins.selector.data(), ins.selector.size()});
                if (ins.a > 0xff) throw SplitError("too many call arguments");
                w.u8(static_cast<std::uint8_t>(ins.a));
                break;
            case ir::Op::Create:
                w.u16(ins.a);
                if (ins.b > 0xff) throw SplitError("too many constructor words");
                w.u8(static_cast<std::uint8_t>(ins.b));
                break;
            case ir::Op::Compute:
                w.u32(ins.a);
                break;
            case ir::Op::Dup:
            case ir::Op::Swap:
            case ir::Op::Arg:
            case ir::Op::ArgBytesHash:
            case ir::Op::Load:
            case ir::Op::Store:
            case ir::Op::MapLoad:
            case ir::Op::MapStore:
                w.u16(ins.a);
                break;
            default:
                break;
        }
    }
}

ir::Body read_body(Reader& r) {
    const std::uint32_t count = r.u32();
    ir::Body body;
    body.reserve(std::min<std::uint32_t>(count, 1u << 16));
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint8_t raw_op = r.u8();
        if (!ir::is_known_op(raw_op)) throw DecodeError("unknown opcode " + std::to_string(raw_op));
        ir::Instruction ins{.op = static_cast<ir::Op>(raw_op)};
        switch (ins.op) {
            case ir::Op::Push: {
                const std::uint8_t len = r.u8();
                if (len > 32) throw DecodeError("push operand wider than 32 bytes");
                ByteView be = r.raw(len);
                if (len > 0 && be[0] == 0) throw DecodeError("non-minimal push operand");
                ins.value = word_from_be(be);
                break;
            }
            case ir::Op::KeccakConst:
                ins.data = r.bytes();
                break;
            case ir::Op::Call:
            case ir::Op::CallLocal:
            case ir::Op::OffchainCall: {
                ByteView sel = r.raw(4);
                std::copy(sel.begin(), sel.end(), ins.selector.begin());
                ins.a = r.u8();
                break;
            }
            case ir::Op::Create:
                ins.a = r.u16();
                ins.b = r.u8();
                break;
            case ir::Op::Compute:
                ins.a = r.u32();
                break;
            case ir::Op::Dup:
            case ir::Op::Swap:
            case ir::Op::Arg:
            case ir::Op::ArgBytesHash:
            case ir::Op::Load:
            case ir::Op::Store:
            case ir::Op::MapLoad:
            case ir::Op::MapStore:
                ins.a = r.u16();
                break;
            default:
                break;
        }
        body.push_back(std::move(ins));
    }
    return body;
}

}  // namespace

Bytes encode(const ir::Contract& c, EncodeOptions options) {
    if (options.include_names) {
        for (const auto& f : c.functions) {
            if (f.name.empty()) throw SplitError("cannot encode identifiers: unnamed function");
        }
    }
    Writer w;
    w.raw(as_bytes(kMagic));
    w.u8(static_cast<std::uint8_t>(c.role));
    w.u8(options.include_names ? kFlagNames : 0);
    if (options.include_names) w.str(c.name);
    if (c.participant_count > 0xff) throw SplitError("too many participants");
    w.u8(static_cast<std::uint8_t>(c.participant_count));

    w.u16(static_cast<std::uint32_t>(c.variables.size()));
    for (const auto& v : c.variables) {
        w.u8(static_cast<std::uint8_t>(v.kind));
        if (options.include_names) w.str(v.name);
    }

    w.u16(static_cast<std::uint32_t>(c.functions.size()));
    for (const auto& f : c.functions) {
        w.raw(ByteView{f.selector.data(), f.selector.size()});
        if (options.include_names) {
            w.str(f.name);
            if (f.inputs.size() > 0xff) throw SplitError("too many inputs");
            w.u8(static_cast<std::uint8_t>(f.inputs.size()));
            for (const auto& in : f.inputs) w.str(in);
        }
        std::uint8_t flags = static_cast<std::uint8_t>(f.kind);
        if (f.transfers_currency) flags |= 0x04;
        if (f.padded) flags |= 0x08;
        w.u8(flags);
        if (f.modifiers.size() > 0xff) throw SplitError("too many modifiers");
        w.u8(static_cast<std::uint8_t>(f.modifiers.size()));
        for (const auto& m : f.modifiers) {
            w.u8(static_cast<std::uint8_t>(m.kind));
            w.u16(m.var_a);
            w.u16(m.var_b);
        }
        write_body(w, f.body);
    }
    write_body(w, c.constructor);
    return std::move(w).take();
}

std::pair<ir::Contract, std::size_t> decode_prefix(ByteView code) {
    Reader r(code);
    ir::Contract c;
    ByteView magic = r.raw(kMagic.size());
    if (!std::equal(magic.begin(), magic.end(), as_bytes(kMagic).begin())) {
        throw DecodeError("bytecode version mismatch: expected " + std::string(kMagic));
    }
    const std::uint8_t role = r.u8();
    if (role < 1 || role > 3) throw DecodeError("unknown contract role");
    c.role = static_cast<ir::ContractRole>(role);
    const std::uint8_t flags = r.u8();
    if ((flags & ~kFlagNames) != 0) throw DecodeError("unknown bytecode flags");
    const bool names = (flags & kFlagNames) != 0;
    if (names) c.name = r.str();
    c.participant_count = r.u8();

    const std::uint32_t var_count = r.u16();
    for (std::uint32_t i = 0; i < var_count; ++i) {
        const std::uint8_t kind = r.u8();
        if (kind > 3) throw DecodeError("unknown variable kind");
        ir::Variable v{.kind = static_cast<ir::VarKind>(kind)};
        if (names) v.name = r.str();
        c.variables.push_back(std::move(v));
    }

    const std::uint32_t fn_count = r.u16();
    for (std::uint32_t i = 0; i < fn_count; ++i) {
        ir::FunctionSpec f;
        ByteView sel = r.raw(4);
        std::copy(sel.begin(), sel.end(), f.selector.begin());
        if (names) {
            f.name = r.str();
            if (f.name.empty()) throw DecodeError("empty function name");
            const std::uint8_t n_inputs = r.u8();
            for (std::uint8_t k = 0; k < n_inputs; ++k) f.inputs.push_back(r.str());
        }
        const std::uint8_t fflags = r.u8();
        if ((fflags & ~0x0f) != 0 || (fflags & 0x03) == 0x03) throw DecodeError("unknown function flags");
        f.kind = static_cast<ir::FunctionKind>(fflags & 0x03);
        f.transfers_currency = (fflags & 0x04) != 0;
        f.padded = (fflags & 0x08) != 0;
        const std::uint8_t n_mods = r.u8();
        for (std::uint8_t k = 0; k < n_mods; ++k) {
            const std::uint8_t g = r.u8();
            if (g > static_cast<std::uint8_t>(ir::GuardKind::Unresolved)) throw DecodeError("unknown guard");
            ir::Modifier m{.kind = static_cast<ir::GuardKind>(g)};
            m.var_a = r.u16();
            m.var_b = r.u16();
            f.modifiers.push_back(m);
        }
        f.body = read_body(r);
        c.functions.push_back(std::move(f));
    }
    c.constructor = read_body(r);

    try {
        ir::validate(c);
    } catch (const ConfigError& e) {
        throw DecodeError(std::string("invalid bytecode: ") + e.what());
    }
    return {std::move(c), r.position()};
}

ir::Contract decode(ByteView code) {
    auto [contract, used] = decode_prefix(code);
    if (used != code.size()) throw DecodeError("trailing bytes after contract");
    return std::move(contract);
}

}  // namespace hybridsplit::bytecode
