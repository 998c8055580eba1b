#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "json_util.hpp"
#include "knowledge_base.hpp"

namespace ioring {

/// Per-pin attribute overrides; unset fields fall back to knowledge-base inference.
struct PinOverrides {
    std::optional<std::string> device_type;
    std::optional<Direction> direction;
    std::optional<std::string> domain;
    std::optional<std::map<std::string, std::string>> connections;
    std::optional<Row> row;

    bool empty() const { return !device_type && !direction && !domain && !connections && !row; }
    friend bool operator==(const PinOverrides&, const PinOverrides&) = default;
};

struct PinEntry {
    std::string name;
    PinOverrides overrides;
    friend bool operator==(const PinEntry&, const PinEntry&) = default;
};

enum class DirectiveKind { set_ring_style, set_domain_order, use_custom_cell, local_esd_domain };

struct Directive {
    DirectiveKind kind = DirectiveKind::set_ring_style;
    std::map<std::string, std::string> args;
    friend bool operator==(const Directive&, const Directive&) = default;
};

struct PadPlanSpec {
    Length die_width = 0;
    Length die_height = 0;
    /// Indexed by side_rank(); each list in along-side order.
    std::array<std::vector<PinEntry>, 4> sides;
    std::vector<Directive> directives;
    RingStyle ring_style = RingStyle::single_row;

    std::vector<PinEntry>& side(Side s) { return sides[static_cast<std::size_t>(side_rank(s))]; }
    const std::vector<PinEntry>& side(Side s) const { return sides[static_cast<std::size_t>(side_rank(s))]; }

    std::size_t pin_count() const {
        std::size_t n = 0;
        for (const auto& s : sides) n += s.size();
        return n;
    }

    friend bool operator==(const PadPlanSpec&, const PadPlanSpec&) = default;
};

enum class SpecFormat { csv, json };

namespace detail {

struct DirectiveSchema {
    DirectiveKind kind;
    std::string_view keyword; // controlled-grammar spelling
    std::string_view json_name;
    std::array<std::string_view, 2> required;
};

inline constexpr std::array<DirectiveSchema, 4> kDirectiveSchemas{{
    {DirectiveKind::set_ring_style, "SET_RING_STYLE", "set_ring_style", {"style", ""}},
    {DirectiveKind::set_domain_order, "SET_DOMAIN_ORDER", "set_domain_order", {"order", ""}},
    {DirectiveKind::use_custom_cell, "USE_CUSTOM_CELL", "use_custom_cell", {"name", "cell"}},
    {DirectiveKind::local_esd_domain, "LOCAL_ESD_DOMAIN", "local_esd_domain", {"domain", ""}},
}};

inline const DirectiveSchema& schema_of(DirectiveKind k) {
    for (const auto& s : kDirectiveSchemas)
        if (s.kind == k) return s;
    throw DirectiveError("unknown directive kind");
}

inline void check_directive_args(const DirectiveSchema& schema, const std::map<std::string, std::string>& args) {
    std::set<std::string_view> allowed;
    for (auto key : schema.required) {
        if (key.empty()) continue;
        allowed.insert(key);
        auto it = args.find(std::string(key));
        if (it == args.end() || it->second.empty())
            throw DirectiveError(std::string(schema.keyword) + " requires " + std::string(key) + "=<value>");
    }
    for (const auto& [k, _] : args)
        if (!allowed.count(k)) throw DirectiveError(std::string(schema.keyword) + " does not accept argument " + k);
    if (schema.kind == DirectiveKind::set_ring_style && !parse_ring_style(args.at("style")))
        throw DirectiveError("SET_RING_STYLE style must be single_row or staggered");
}

inline std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

inline std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    for (std::string tok; in >> tok;) out.push_back(tok);
    return out;
}

} // namespace detail

/// Parses one controlled-grammar directive line: `KIND key=value (key=value)*`.
inline Directive parse_directive(std::string_view line) {
    auto tokens = detail::split_ws(line);
    if (tokens.empty()) throw DirectiveError("empty directive");
    const detail::DirectiveSchema* schema = nullptr;
    for (const auto& s : detail::kDirectiveSchemas)
        if (s.keyword == tokens[0]) schema = &s;
    if (!schema) throw DirectiveError("unknown directive kind: " + tokens[0]);
    Directive d;
    d.kind = schema->kind;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        auto eq = tokens[i].find('=');
        if (eq == std::string::npos || eq == 0)
            throw DirectiveError("malformed argument '" + tokens[i] + "' (expected key=value)");
        auto key = tokens[i].substr(0, eq);
        if (d.args.count(key)) throw DirectiveError("argument " + key + " given twice");
        d.args[key] = tokens[i].substr(eq + 1);
    }
    detail::check_directive_args(*schema, d.args);
    return d;
}

inline std::string_view to_string(DirectiveKind k) { return detail::schema_of(k).json_name; }

/// Renders a directive back into the controlled grammar.
inline std::string format_directive(const Directive& d) {
    std::string out(detail::schema_of(d.kind).keyword);
    for (const auto& [k, v] : d.args) out += " " + k + "=" + v;
    return out;
}

namespace detail {

inline void finish_spec(PadPlanSpec& spec, Length grid) {
    if (spec.die_width <= 0 || spec.die_height <= 0) throw ParseError("die dimensions must be positive");
    if (spec.die_width % grid != 0) throw OffGridError("die width " + format_um(spec.die_width) + " um");
    if (spec.die_height % grid != 0) throw OffGridError("die height " + format_um(spec.die_height) + " um");
    std::set<std::string> seen;
    for (const auto& side : spec.sides)
        for (const auto& pin : side) {
            if (!is_legal_name(pin.name)) throw ParseError("illegal pad name '" + pin.name + "'");
            if (!seen.insert(pin.name).second) throw DuplicatePinError(pin.name);
        }
    if (seen.empty()) throw ParseError("pin plan lists no pads");
    for (const auto& d : spec.directives)
        if (d.kind == DirectiveKind::set_ring_style) spec.ring_style = *parse_ring_style(d.args.at("style"));
}

struct OrderedPin {
    long long order;
    std::size_t seq;
    PinEntry entry;
};

inline void place_ordered(PadPlanSpec& spec, std::array<std::vector<OrderedPin>, 4>& staged) {
    for (std::size_t s = 0; s < 4; ++s) {
        auto& list = staged[s];
        std::sort(list.begin(), list.end(), [](const OrderedPin& a, const OrderedPin& b) {
            return a.order != b.order ? a.order < b.order : a.seq < b.seq;
        });
        for (std::size_t i = 1; i < list.size(); ++i)
            if (list[i].order == list[i - 1].order)
                throw ParseError("pads " + list[i - 1].entry.name + " and " + list[i].entry.name +
                                 " share order " + std::to_string(list[i].order) + " on side " +
                                 std::string(to_string(kRingSides[s])));
        for (auto& p : list) spec.sides[s].push_back(std::move(p.entry));
    }
}

inline long long parse_order(const std::string& text, int line, int column) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw ParseError("order must be an integer, got '" + text + "'", line, column);
}

inline PadPlanSpec parse_csv_plan(std::string_view text, Length grid) {
    PadPlanSpec spec;
    std::optional<Length> die_w;
    std::optional<Length> die_h;
    std::map<std::string, std::size_t> columns;
    std::array<std::vector<OrderedPin>, 4> staged;
    std::size_t seq = 0;

    int line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.rfind("#!", 0) == 0) {
            std::string body = trim(std::string_view(line).substr(2));
            auto tokens = split_ws(body);
            if (!tokens.empty() && tokens[0] == "DIE") {
                for (std::size_t i = 1; i < tokens.size(); ++i) {
                    auto eq = tokens[i].find('=');
                    std::string key = tokens[i].substr(0, eq);
                    std::string val = eq == std::string::npos ? "" : tokens[i].substr(eq + 1);
                    auto nm = parse_um(val);
                    if (!nm) throw OffGridError(val + " um (not a decimal with at most nanometre precision)");
                    if (key == "w_um") die_w = *nm;
                    else if (key == "h_um") die_h = *nm;
                    else throw ParseError("unknown DIE argument '" + key + "'", line_no, 1);
                }
            } else if (!tokens.empty() && tokens[0] == "RING_STYLE") {
                auto style = tokens.size() == 2 ? parse_ring_style(tokens[1]) : std::nullopt;
                if (!style) throw ParseError("RING_STYLE expects single_row or staggered", line_no, 1);
                spec.ring_style = *style;
            } else {
                try {
                    spec.directives.push_back(parse_directive(body));
                } catch (const DirectiveError& e) {
                    throw DirectiveError("line " + std::to_string(line_no) + ": " + e.what());
                }
            }
            continue;
        }
        if (line[0] == '#') continue;

        auto fields = split(line, ',');
        if (columns.empty()) {
            for (std::size_t i = 0; i < fields.size(); ++i) columns[fields[i]] = i;
            for (const char* req : {"name", "side", "order"})
                if (!columns.count(req))
                    throw ParseError(std::string("header row lacks required column '") + req + "'", line_no, 1);
            for (const auto& [col, _] : columns)
                if (col != "name" && col != "side" && col != "order" && col != "device" &&
                    col != "direction" && col != "domain" && col != "row")
                    throw ParseError("unknown column '" + col + "'", line_no, 1);
            continue;
        }
        if (fields.size() != columns.size())
            throw ParseError("expected " + std::to_string(columns.size()) + " fields, found " +
                                 std::to_string(fields.size()),
                             line_no, 1);
        auto field = [&](const char* col) -> std::string {
            auto it = columns.find(col);
            return it == columns.end() ? std::string{} : fields[it->second];
        };
        auto column_of = [&](const char* col) { return static_cast<int>(columns.at(col)) + 1; };

        OrderedPin pin;
        pin.seq = seq++;
        pin.entry.name = field("name");
        auto side = parse_side(field("side"));
        if (!side) throw ParseError("side must be one of N,E,S,W, got '" + field("side") + "'", line_no, column_of("side"));
        pin.order = parse_order(field("order"), line_no, column_of("order"));
        if (auto v = field("device"); !v.empty()) pin.entry.overrides.device_type = v;
        if (auto v = field("direction"); !v.empty()) {
            auto dir = parse_direction(v);
            if (!dir) throw ParseError("unknown direction '" + v + "'", line_no, column_of("direction"));
            pin.entry.overrides.direction = *dir;
        }
        if (auto v = field("domain"); !v.empty()) pin.entry.overrides.domain = v;
        if (auto v = field("row"); !v.empty()) {
            auto row = parse_row(v);
            if (!row) throw ParseError("row must be outer or inner, got '" + v + "'", line_no, column_of("row"));
            pin.entry.overrides.row = *row;
        }
        staged[static_cast<std::size_t>(side_rank(*side))].push_back(std::move(pin));
    }
    if (columns.empty()) throw ParseError("missing header row");
    if (!die_w || !die_h) throw ParseError("missing '#! DIE w_um=<w> h_um=<h>' line");
    spec.die_width = *die_w;
    spec.die_height = *die_h;
    place_ordered(spec, staged);
    finish_spec(spec, grid);
    return spec;
}

inline Length json_um(const json& v, const std::string& path) {
    std::optional<Length> nm;
    if (v.is_string()) {
        nm = parse_um(v.get<std::string>());
    } else if (v.is_number_integer()) {
        nm = v.get<Length>() * 1000;
    } else if (v.is_number()) {
        double scaled = v.get<double>() * 1000.0;
        double rounded = std::round(scaled);
        if (std::abs(scaled - rounded) < 1e-6) nm = static_cast<Length>(rounded);
    } else {
        throw SchemaError(path, "expected a length in micrometres");
    }
    if (!nm) throw OffGridError(v.dump() + " um (not representable in whole nanometres)");
    return *nm;
}

inline PadPlanSpec parse_json_plan(std::string_view text, Length grid) {
    json doc = parse_json(text);
    PadPlanSpec spec;
    const json& die = require_object(doc, "die_um", "");
    spec.die_width = json_um(require(die, "w", "die_um"), "die_um.w");
    spec.die_height = json_um(require(die, "h", "die_um"), "die_um.h");

    if (auto it = doc.find("ring_style"); it != doc.end()) {
        auto style = it->is_string() ? parse_ring_style(it->get<std::string>()) : std::nullopt;
        if (!style) throw SchemaError("ring_style", "expected single_row or staggered");
        spec.ring_style = *style;
    }

    std::array<std::vector<OrderedPin>, 4> staged;
    const json& pads = require_array(doc, "pads", "");
    for (std::size_t i = 0; i < pads.size(); ++i) {
        std::string p = index_path("pads", i);
        const json& pj = pads[i];
        OrderedPin pin;
        pin.seq = i;
        pin.entry.name = require_string(pj, "name", p);
        auto side = parse_side(require_string(pj, "side", p));
        if (!side) throw SchemaError(p + ".side", "expected one of N,E,S,W");
        pin.order = require_int(pj, "order", p);
        auto& ov = pin.entry.overrides;
        for (const char* key : {"device", "device_type"})
            if (auto it = pj.find(key); it != pj.end()) {
                if (!it->is_string()) throw SchemaError(p + "." + key, "expected a string");
                ov.device_type = it->get<std::string>();
            }
        if (auto it = pj.find("direction"); it != pj.end()) {
            auto dir = it->is_string() ? parse_direction(it->get<std::string>()) : std::nullopt;
            if (!dir) throw SchemaError(p + ".direction", "unknown direction");
            ov.direction = *dir;
        }
        if (auto it = pj.find("domain"); it != pj.end()) {
            if (!it->is_string()) throw SchemaError(p + ".domain", "expected a string");
            ov.domain = it->get<std::string>();
        }
        if (auto it = pj.find("row"); it != pj.end()) {
            auto row = it->is_string() ? parse_row(it->get<std::string>()) : std::nullopt;
            if (!row) throw SchemaError(p + ".row", "expected outer or inner");
            ov.row = *row;
        }
        if (auto it = pj.find("connections"); it != pj.end()) {
            if (!it->is_object()) throw SchemaError(p + ".connections", "expected an object");
            std::map<std::string, std::string> conns;
            for (auto c = it->begin(); c != it->end(); ++c) {
                if (!c->is_string()) throw SchemaError(p + ".connections." + c.key(), "expected a string");
                conns[c.key()] = c->get<std::string>();
            }
            ov.connections = std::move(conns);
        }
        staged[static_cast<std::size_t>(side_rank(*side))].push_back(std::move(pin));
    }

    if (auto it = doc.find("directives"); it != doc.end()) {
        if (!it->is_array()) throw SchemaError("directives", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const json& dj = (*it)[i];
            std::string p = index_path("directives", i);
            if (dj.is_string()) {
                spec.directives.push_back(parse_directive(dj.get<std::string>()));
                continue;
            }
            std::string kind = require_string(dj, "kind", p);
            const DirectiveSchema* schema = nullptr;
            for (const auto& s : kDirectiveSchemas)
                if (s.json_name == kind) schema = &s;
            if (!schema) throw DirectiveError("unknown directive kind: " + kind);
            Directive d;
            d.kind = schema->kind;
            if (auto a = dj.find("args"); a != dj.end()) {
                if (!a->is_object()) throw SchemaError(p + ".args", "expected an object");
                for (auto kv = a->begin(); kv != a->end(); ++kv) {
                    if (!kv->is_string()) throw SchemaError(p + ".args." + kv.key(), "expected a string");
                    d.args[kv.key()] = kv->get<std::string>();
                }
            }
            check_directive_args(*schema, d.args);
            spec.directives.push_back(std::move(d));
        }
    }
    place_ordered(spec, staged);
    finish_spec(spec, grid);
    return spec;
}

} // namespace detail

/// Parses a pin plan. `grid` is the placement grid the die must align to.
inline PadPlanSpec parse_pin_plan(std::string_view text, SpecFormat format, Length grid = 1) {
    if (grid < 1) grid = 1;
    return format == SpecFormat::csv ? detail::parse_csv_plan(text, grid) : detail::parse_json_plan(text, grid);
}

/// Canonical JSON encoding; `order` is the 0-based position along the side.
inline std::string serialize_pin_plan(const PadPlanSpec& spec) {
    using json = detail::json;
    auto um_value = [](Length nm) -> json {
        if (nm % 1000 == 0) return nm / 1000;
        return format_um(nm);
    };
    json doc;
    doc["die_um"] = {{"w", um_value(spec.die_width)}, {"h", um_value(spec.die_height)}};
    doc["ring_style"] = to_string(spec.ring_style);
    json pads = json::array();
    for (Side s : kRingSides) {
        const auto& list = spec.side(s);
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& pin = list[i];
            json pj = {{"name", pin.name}, {"side", to_string(s)}, {"order", i}};
            const auto& ov = pin.overrides;
            if (ov.device_type) pj["device"] = *ov.device_type;
            if (ov.direction) pj["direction"] = to_string(*ov.direction);
            if (ov.domain) pj["domain"] = *ov.domain;
            if (ov.row) pj["row"] = to_string(*ov.row);
            if (ov.connections) pj["connections"] = *ov.connections;
            pads.push_back(pj);
        }
    }
    doc["pads"] = pads;
    json directives = json::array();
    for (const auto& d : spec.directives) directives.push_back({{"kind", to_string(d.kind)}, {"args", d.args}});
    doc["directives"] = directives;
    return doc.dump(2) + "\n";
}

/// CSV encoding with `#! DIE` / `#! RING_STYLE` header lines and `#!` directive lines.
/// Connection overrides have no CSV column and are dropped.
inline std::string serialize_pin_plan_csv(const PadPlanSpec& spec) {
    std::string out = "#! DIE w_um=" + format_um(spec.die_width) + " h_um=" + format_um(spec.die_height) + "\n";
    out += "#! RING_STYLE " + std::string(to_string(spec.ring_style)) + "\n";
    for (const auto& d : spec.directives) out += "#! " + format_directive(d) + "\n";
    out += "name,side,order,device,direction,domain,row\n";
    for (Side s : kRingSides) {
        const auto& list = spec.side(s);
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& ov = list[i].overrides;
            out += list[i].name + "," + std::string(to_string(s)) + "," + std::to_string(i) + "," +
                   ov.device_type.value_or("") + "," +
                   (ov.direction ? std::string(to_string(*ov.direction)) : "") + "," + ov.domain.value_or("") +
                   "," + (ov.row ? std::string(to_string(*ov.row)) : "") + "\n";
        }
    }
    return out;
}

} // namespace ioring
