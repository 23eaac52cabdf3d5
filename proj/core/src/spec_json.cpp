// Copyright 2026 The hybridsplit Authors
// SPDX-License-Identifier: Apache-2.0

#include "hybridsplit/spec_json.hpp"

#include <fstream>

#include "hybridsplit/error.hpp"

namespace hybridsplit::spec_json {

namespace {

using nlohmann::json;

struct GuardName {
    ir::GuardKind kind;
    std::string_view name;
    int vars;
};

constexpr std::array kGuards{
    GuardName{ir::GuardKind::Payable, "payable", 0},
    GuardName{ir::GuardKind::Private, "private", 0},
    GuardName{ir::GuardKind::Before, "before", 1},
    GuardName{ir::GuardKind::After, "after", 1},
    GuardName{ir::GuardKind::Between, "between", 2},
    GuardName{ir::GuardKind::Participant, "participant", 0},
    GuardName{ir::GuardKind::DeployedAddrOnly, "deployed_addr_only", 1},
    GuardName{ir::GuardKind::AmountMet, "amount_met", 2},
    GuardName{ir::GuardKind::AmountNotMet, "amount_not_met", 2},
    GuardName{ir::GuardKind::Unresolved, "unresolved", 1},
};

const GuardName& guard_info(ir::GuardKind k) {
    for (const auto& g : kGuards) {
        if (g.kind == k) return g;
    }
    throw ConfigError("unknown guard");
}

class Parser {
  public:
    explicit Parser(ir::Contract& c) : c_(c) {}

    std::uint32_t var(const json& j, const std::string& where) const {
        if (j.is_number_unsigned()) return j.get<std::uint32_t>();
        if (!j.is_string()) throw ConfigError(where + ": variable must be a name");
        const auto idx = c_.variable(j.get<std::string>());
        if (!idx) throw ConfigError(where + ": unknown variable '" + j.get<std::string>() + "'");
        return *idx;
    }

    static std::uint32_t u32(const json& j, const std::string& where) {
        if (!j.is_number_unsigned()) throw ConfigError(where + ": expected a non-negative integer");
        return j.get<std::uint32_t>();
    }

    static Selector selector(const json& j, const std::string& where) {
        if (!j.is_string()) throw ConfigError(where + ": expected a signature");
        const auto text = j.get<std::string>();
        if (text.find('(') != std::string::npos) return ir::selector_of(text);
        Bytes raw;
        try {
            raw = from_hex(text);
        } catch (const Error&) {
            throw ConfigError(where + ": bad selector '" + text + "'");
        }
        if (raw.size() != 4) throw ConfigError(where + ": selector must be 4 bytes");
        return {raw[0], raw[1], raw[2], raw[3]};
    }

    ir::Body body(const json& j, const std::string& where) const {
        if (!j.is_array()) throw ConfigError(where + ": body must be an array");
        ir::Body out;
        for (std::size_t pc = 0; pc < j.size(); ++pc) {
            const json& item = j[pc];
            const std::string at = where + "[" + std::to_string(pc) + "]";
            if (!item.is_array() || item.empty() || !item[0].is_string()) {
                throw ConfigError(at + ": instruction must be [op, operands...]");
            }
            const auto op = ir::op_from_name(item[0].get<std::string>());
            if (!op) throw ConfigError(at + ": unknown op '" + item[0].get<std::string>() + "'");
            ir::Instruction ins{.op = *op};
            const auto need = [&](std::size_t n) {
                if (item.size() != n + 1) throw ConfigError(at + ": " + item[0].get<std::string>() + " takes " + std::to_string(n) + " operand(s)");
            };
            switch (*op) {
                case ir::Op::Push:
                    need(1);
                    if (item[1].is_number_unsigned()) {
                        ins.value = Word{item[1].get<std::uint64_t>()};
                    } else if (item[1].is_string()) {
                        ins.value = parse_decimal(item[1].get<std::string>());
                    } else {
                        throw ConfigError(at + ": push takes a decimal string");
                    }
                    break;
                case ir::Op::Dup:
                case ir::Op::Swap:
                case ir::Op::Arg:
                case ir::Op::ArgBytesHash:
                case ir::Op::Compute:
                    need(1);
                    ins.a = u32(item[1], at);
                    break;
                case ir::Op::Load:
                case ir::Op::Store:
                case ir::Op::MapLoad:
                case ir::Op::MapStore:
                    need(1);
                    ins.a = var(item[1], at);
                    break;
                case ir::Op::KeccakConst:
                    need(1);
                    if (!item[1].is_string()) throw ConfigError(at + ": keccak_const takes hex");
                    try {
                        ins.data = from_hex(item[1].get<std::string>());
                    } catch (const Error&) {
                        throw ConfigError(at + ": keccak_const takes hex");
                    }
                    break;
                case ir::Op::Call:
                case ir::Op::CallLocal:
                case ir::Op::OffchainCall:
                    need(2);
                    ins.selector = selector(item[1], at);
                    ins.a = u32(item[2], at);
                    break;
                case ir::Op::Create:
                    need(2);
                    ins.a = u32(item[1], at);
                    ins.b = u32(item[2], at);
                    break;
                default:
                    need(0);
                    break;
            }
            out.push_back(std::move(ins));
        }
        return out;
    }

  private:
    ir::Contract& c_;
};

ir::VarKind var_kind(const std::string& text, const std::string& where) {
    if (text == "param") return ir::VarKind::Param;
    if (text == "state") return ir::VarKind::State;
    if (text == "mapping") return ir::VarKind::Mapping;
    throw ConfigError(where + ": kind must be param, state or mapping");
}

std::string_view var_kind_name(ir::VarKind k) {
    switch (k) {
        case ir::VarKind::Param:
            return "param";
        case ir::VarKind::State:
            return "state";
        case ir::VarKind::Mapping:
            return "mapping";
        case ir::VarKind::Participant:
            return "participant";
    }
    return "state";
}

SpecDocument parse_impl(const json& j) {
    SpecDocument doc;
    ir::Contract& c = doc.contract;
    c.role = ir::ContractRole::Whole;
    c.name = j.at("name").get<std::string>();

    const json& participants = j.at("participants");
    if (!participants.is_array() || participants.empty()) throw ConfigError("participants must be a non-empty array");
    for (const auto& p : participants) c.variables.push_back({p.get<std::string>(), ir::VarKind::Participant});
    c.participant_count = static_cast<std::uint32_t>(participants.size());
    for (const auto& p : j.value("parameters", json::array())) {
        const auto name = p.at("name").get<std::string>();
        c.variables.push_back({name, var_kind(p.at("kind").get<std::string>(), "parameter '" + name + "'")});
    }
    for (std::size_t i = 0; i < c.variables.size(); ++i) {
        for (std::size_t k = 0; k < i; ++k) {
            if (c.variables[i].name == c.variables[k].name) {
                throw ConfigError("duplicate variable '" + c.variables[i].name + "'");
            }
        }
    }

    Parser parser(c);
    const json& functions = j.at("functions");
    if (!functions.is_array() || functions.empty()) throw ConfigError("functions must be a non-empty array");
    for (const auto& f : functions) {
        const auto name = f.at("name").get<std::string>();
        const std::string where = "function '" + name + "'";
        std::vector<std::string> inputs = f.value("inputs", std::vector<std::string>{});
        std::vector<ir::Modifier> mods;
        for (const auto& m : f.value("modifiers", json::array())) {
            const auto gname = m.at("guard").get<std::string>();
            const GuardName* info = nullptr;
            for (const auto& g : kGuards) {
                if (g.name == gname) info = &g;
            }
            if (info == nullptr) throw ConfigError(where + ": unknown guard '" + gname + "'");
            const json vars = m.value("vars", json::array());
            if (vars.size() != static_cast<std::size_t>(info->vars)) {
                throw ConfigError(where + ": guard '" + gname + "' takes " + std::to_string(info->vars) + " variable(s)");
            }
            ir::Modifier mod{.kind = info->kind};
            if (info->vars > 0) mod.var_a = parser.var(vars[0], where);
            if (info->vars > 1) mod.var_b = parser.var(vars[1], where);
            mods.push_back(mod);
        }
        auto fn = ir::make_function(name, std::move(inputs), f.value("transfers_currency", false), std::move(mods),
                                    parser.body(f.value("body", json::array()), where));
        if (f.contains("kind")) {
            const auto kind = f.at("kind").get<std::string>();
            if (kind == "light") {
                doc.classification.overrides[name] = ir::FunctionKind::Light;
            } else if (kind == "heavy") {
                doc.classification.overrides[name] = ir::FunctionKind::Heavy;
            } else {
                throw ConfigError(where + ": kind must be light or heavy");
            }
        }
        c.functions.push_back(std::move(fn));
    }
    c.constructor = parser.body(j.value("constructor", json::array()), "constructor");

    if (j.contains("padding")) {
        const json& p = j.at("padding");
        doc.padding.dispute_after = p.value("dispute_after", doc.padding.dispute_after);
        doc.padding.deposit = p.value("deposit", doc.padding.deposit);
        doc.padding.balances = p.value("balances", doc.padding.balances);
        doc.padding.resolved = p.value("resolved", doc.padding.resolved);
        doc.padding.result_function = p.value("result_function", doc.padding.result_function);
        doc.padding.deployed_addr = p.value("deployed_addr", doc.padding.deployed_addr);
    }
    ir::validate(c);
    return doc;
}

}  // namespace

SpecDocument parse(const json& j) {
    try {
        return parse_impl(j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("contract spec: ") + e.what());
    }
}

SpecDocument load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse(j);
}

json dump(const ir::Contract& c) {
    const auto var_name = [&](std::uint32_t v) { return json(c.variables.at(v).name); };
    const auto target = [&](const Selector& sel) {
        if (const auto* f = c.find(sel)) return json(f->signature());
        return json("0x" + selector_hex(sel));
    };
    const auto body = [&](const ir::Body& b) {
        json out = json::array();
        for (const auto& ins : b) {
            json item = json::array({std::string(ir::op_name(ins.op))});
            switch (ins.op) {
                case ir::Op::Push:
                    item.push_back(to_decimal(ins.value));
                    break;
                case ir::Op::Dup:
                case ir::Op::Swap:
                case ir::Op::Arg:
                case ir::Op::ArgBytesHash:
                case ir::Op::Compute:
                    item.push_back(ins.a);
                    break;
                case ir::Op::Load:
                case ir::Op::Store:
                case ir::Op::MapLoad:
                case ir::Op::MapStore:
                    item.push_back(var_name(ins.a));
                    break;
                case ir::Op::KeccakConst:
                    item.push_back(to_hex(ins.data));
                    break;
                case ir::Op::Call:
                case ir::Op::CallLocal:
                case ir::Op::OffchainCall:
                    item.push_back(target(ins.selector));
                    item.push_back(ins.a);
                    break;
                case ir::Op::Create:
                    item.push_back(ins.a);
                    item.push_back(ins.b);
                    break;
                default:
                    break;
            }
            out.push_back(std::move(item));
        }
        return out;
    };

    json participants = json::array();
    json parameters = json::array();
    for (std::uint32_t i = 0; i < c.variables.size(); ++i) {
        if (i < c.participant_count) {
            participants.push_back(c.variables[i].name);
        } else {
            parameters.push_back({{"name", c.variables[i].name}, {"kind", var_kind_name(c.variables[i].kind)}});
        }
    }
    json functions = json::array();
    for (const auto& f : c.functions) {
        json mods = json::array();
        for (const auto& m : f.modifiers) {
            const auto& info = guard_info(m.kind);
            json g = {{"guard", info.name}};
            if (info.vars > 0) {
                json vars = json::array({var_name(m.var_a)});
                if (info.vars > 1) vars.push_back(var_name(m.var_b));
                g["vars"] = vars;
            }
            mods.push_back(std::move(g));
        }
        json fn = {{"name", f.name},
                   {"inputs", f.inputs},
                   {"transfers_currency", f.transfers_currency},
                   {"modifiers", mods},
                   {"body", body(f.body)}};
        if (f.kind != ir::FunctionKind::Unassigned) fn["kind"] = std::string(ir::to_string(f.kind));
        functions.push_back(std::move(fn));
    }
    json out = {{"name", c.name}, {"participants", participants}, {"parameters", parameters}, {"functions", functions}};
    if (!c.constructor.empty()) out["constructor"] = body(c.constructor);
    return out;
}

}  // namespace hybridsplit::spec_json
