#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "json_util.hpp"

namespace ioring {

enum class SignalClass { digital_io, digital_clock, analog_signal, reference_voltage, common_mode, supply, ground };
enum class Direction { input, output, bidir, power, passive };
enum class CellKind { pad, corner, filler, breaker, custom_pad };
enum class PinRole { signal, core_side, rail_vdd, rail_vss };
enum class Rail { vdd, vss };

inline constexpr std::array<Rail, 2> kRails{Rail::vdd, Rail::vss};

namespace detail {

template <typename E, std::size_t N>
struct EnumNames {
    std::array<std::pair<E, std::string_view>, N> entries;

    std::string_view name(E e) const {
        for (const auto& [v, n] : entries)
            if (v == e) return n;
        return "?";
    }
    std::optional<E> parse(std::string_view text) const {
        for (const auto& [v, n] : entries)
            if (n == text) return v;
        return std::nullopt;
    }
};

inline constexpr EnumNames<SignalClass, 7> kSignalClassNames{{{
    {SignalClass::digital_io, "digital_io"},
    {SignalClass::digital_clock, "digital_clock"},
    {SignalClass::analog_signal, "analog_signal"},
    {SignalClass::reference_voltage, "reference_voltage"},
    {SignalClass::common_mode, "common_mode"},
    {SignalClass::supply, "supply"},
    {SignalClass::ground, "ground"},
}}};

inline constexpr EnumNames<Direction, 5> kDirectionNames{{{
    {Direction::input, "input"},
    {Direction::output, "output"},
    {Direction::bidir, "bidir"},
    {Direction::power, "power"},
    {Direction::passive, "passive"},
}}};

inline constexpr EnumNames<CellKind, 5> kCellKindNames{{{
    {CellKind::pad, "pad"},
    {CellKind::corner, "corner"},
    {CellKind::filler, "filler"},
    {CellKind::breaker, "breaker"},
    {CellKind::custom_pad, "custom_pad"},
}}};

inline constexpr EnumNames<PinRole, 4> kPinRoleNames{{{
    {PinRole::signal, "signal"},
    {PinRole::core_side, "core_side"},
    {PinRole::rail_vdd, "rail_vdd"},
    {PinRole::rail_vss, "rail_vss"},
}}};

} // namespace detail

inline std::string_view to_string(SignalClass v) { return detail::kSignalClassNames.name(v); }
inline std::string_view to_string(Direction v) { return detail::kDirectionNames.name(v); }
inline std::string_view to_string(CellKind v) { return detail::kCellKindNames.name(v); }
inline std::string_view to_string(PinRole v) { return detail::kPinRoleNames.name(v); }
inline std::string_view to_string(Rail r) { return r == Rail::vdd ? "vdd" : "vss"; }

inline std::optional<SignalClass> parse_signal_class(std::string_view t) { return detail::kSignalClassNames.parse(t); }
inline std::optional<Direction> parse_direction(std::string_view t) { return detail::kDirectionNames.parse(t); }
inline std::optional<CellKind> parse_cell_kind(std::string_view t) { return detail::kCellKindNames.parse(t); }
inline std::optional<PinRole> parse_pin_role(std::string_view t) { return detail::kPinRoleNames.parse(t); }

inline bool is_pad_kind(CellKind k) { return k == CellKind::pad || k == CellKind::custom_pad; }

/// Net, pad and instance names: non-empty, alphanumeric plus underscore.
inline bool is_legal_name(std::string_view name) {
    if (name.empty()) return false;
    return std::all_of(name.begin(), name.end(),
                       [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

struct DomainDef {
    std::string name;
    std::string vdd_net;
    std::string vss_net;

    const std::string& net(Rail r) const { return r == Rail::vdd ? vdd_net : vss_net; }
    friend bool operator==(const DomainDef&, const DomainDef&) = default;
};

struct NamePatternRule {
    std::string pattern;
    SignalClass signal_class = SignalClass::digital_io;
    std::string device_type;
    Direction direction = Direction::bidir;
    std::string domain;
    std::map<std::string, std::string> connections;

    /// Anchored: the whole name must match.
    bool matches(const std::string& name) const {
        if (regex_) return std::regex_match(name, *regex_);
        return std::regex_match(name, std::regex(pattern, std::regex::ECMAScript));
    }

    /// Caches the compiled pattern. Not thread-safe; the loader calls it once.
    void compile() { regex_ = std::make_shared<const std::regex>(pattern, std::regex::ECMAScript); }

    friend bool operator==(const NamePatternRule& a, const NamePatternRule& b) {
        return a.pattern == b.pattern && a.signal_class == b.signal_class &&
               a.device_type == b.device_type && a.direction == b.direction &&
               a.domain == b.domain && a.connections == b.connections;
    }

private:
    std::shared_ptr<const std::regex> regex_;
};

struct CellPin {
    std::string name;
    PinRole role = PinRole::signal;
    Rect rect;
    friend bool operator==(const CellPin&, const CellPin&) = default;
};

struct CellMaster {
    std::string name;
    CellKind kind = CellKind::pad;
    Length width = 0;
    Length height = 0;
    std::vector<CellPin> pins;
    bool rail_vdd = true;
    bool rail_vss = true;
    std::string domain_tag = "any";
    /// Set on supply pads: the rail whose net this pad's bond pad delivers.
    std::optional<Rail> supply;

    bool continuity(Rail r) const { return r == Rail::vdd ? rail_vdd : rail_vss; }

    const CellPin* pin(std::string_view pin_name) const {
        for (const auto& p : pins)
            if (p.name == pin_name) return &p;
        return nullptr;
    }

    bool serves(std::string_view domain) const { return domain_tag == "any" || domain_tag == domain; }

    friend bool operator==(const CellMaster&, const CellMaster&) = default;
};

struct DesignRules {
    Length grid = 1;
    Length abut_tol = 0;
    bool corner_required = true;
    bool domain_isolation_required = true;
    bool esd_supply_per_domain = true;
    Length stagger_row_offset = 0;
    Length stagger_min_overlap = 0;
    friend bool operator==(const DesignRules&, const DesignRules&) = default;
};

/// Immutable after loading; share freely across threads.
struct KnowledgeBase {
    std::vector<NamePatternRule> patterns;
    std::map<std::string, CellMaster> cells;
    DesignRules rules;
    std::vector<DomainDef> domains;
    /// Document text the KB was loaded from; handed verbatim to external structurers.
    std::string source;

    const CellMaster* cell(std::string_view name) const {
        auto it = cells.find(std::string(name));
        return it == cells.end() ? nullptr : &it->second;
    }

    const DomainDef* domain(std::string_view name) const {
        for (const auto& d : domains)
            if (d.name == name) return &d;
        return nullptr;
    }

    const CellMaster& corner() const {
        for (const auto& [_, c] : cells)
            if (c.kind == CellKind::corner) return c;
        throw ValidationError("CORNER_COUNT", "knowledge base has no corner cell");
    }

    /// Breaker master serving `domain`; first by name.
    const CellMaster& breaker_for(std::string_view domain) const {
        for (const auto& [_, c] : cells)
            if (c.kind == CellKind::breaker && c.serves(domain)) return c;
        throw ValidationError("NO_BREAKER", "no breaker cell serves domain " + std::string(domain));
    }

    /// Filler masters usable in `domain`, widest first.
    std::vector<const CellMaster*> fillers_for(std::string_view domain) const {
        std::vector<const CellMaster*> out;
        for (const auto& [_, c] : cells)
            if (c.kind == CellKind::filler && c.serves(domain)) out.push_back(&c);
        std::sort(out.begin(), out.end(), [](const CellMaster* a, const CellMaster* b) {
            return a->width != b->width ? a->width > b->width : a->name < b->name;
        });
        return out;
    }

    friend bool operator==(const KnowledgeBase& a, const KnowledgeBase& b) {
        return a.patterns == b.patterns && a.cells == b.cells && a.rules == b.rules &&
               a.domains == b.domains;
    }
};

/// Expands `{name}`, `{domain}`, `{vdd}` and `{vss}` in a net template.
/// Throws ValidationError on an unknown placeholder.
inline std::string expand_net_template(std::string_view tmpl, std::string_view pad_name,
                                       const DomainDef& domain) {
    std::string out;
    for (std::size_t i = 0; i < tmpl.size();) {
        if (tmpl[i] != '{') {
            out += tmpl[i++];
            continue;
        }
        auto close = tmpl.find('}', i);
        if (close == std::string_view::npos)
            throw ValidationError("BAD_TEMPLATE", "unterminated placeholder in " + std::string(tmpl));
        auto key = tmpl.substr(i + 1, close - i - 1);
        if (key == "name") out += pad_name;
        else if (key == "domain") out += domain.name;
        else if (key == "vdd") out += domain.vdd_net;
        else if (key == "vss") out += domain.vss_net;
        else throw ValidationError("BAD_TEMPLATE", "unknown placeholder {" + std::string(key) + "}");
        i = close + 1;
    }
    return out;
}

/// First rule, in KB order, whose pattern matches the whole name.
inline const NamePatternRule* match_pattern(const std::string& name, const KnowledgeBase& kb) {
    for (const auto& rule : kb.patterns)
        if (rule.matches(name)) return &rule;
    return nullptr;
}

struct KbLoader {
    using json = detail::json;

    static Rect parse_rect(const json& v, const std::string& path) {
        if (!v.is_array() || v.size() != 4)
            throw SchemaError(path, "expected [x0, y0, x1, y1]");
        std::array<Length, 4> c{};
        for (std::size_t i = 0; i < 4; ++i) {
            if (!v[i].is_number_integer()) throw SchemaError(detail::index_path(path, i), "expected an integer");
            c[i] = v[i].get<Length>();
        }
        return {c[0], c[1], c[2], c[3]};
    }

    template <typename E>
    static E parse_enum(const json& obj, const std::string& key, const std::string& path,
                        std::optional<E> (*fn)(std::string_view)) {
        std::string text = detail::require_string(obj, key, path);
        auto v = fn(text);
        if (!v) throw SchemaError(detail::join_path(path, key), "unknown value '" + text + "'");
        return *v;
    }

    static KnowledgeBase from_json(const json& doc) {
        KnowledgeBase kb;
        if (!doc.is_object()) throw SchemaError("$", "knowledge base must be a JSON object");

        const json& patterns = detail::require_array(doc, "patterns", "");
        for (std::size_t i = 0; i < patterns.size(); ++i) {
            std::string p = detail::index_path("patterns", i);
            const json& pj = patterns[i];
            NamePatternRule r;
            r.pattern = detail::require_string(pj, "pattern", p);
            r.signal_class = parse_enum<SignalClass>(pj, "signal_class", p, &parse_signal_class);
            r.device_type = detail::require_string(pj, "device_type", p);
            r.direction = parse_enum<Direction>(pj, "direction", p, &parse_direction);
            r.domain = detail::require_string(pj, "domain", p);
            const json& conns = detail::require_object(pj, "connections", p);
            for (auto it = conns.begin(); it != conns.end(); ++it) {
                if (!it->is_string())
                    throw SchemaError(detail::join_path(p, "connections." + it.key()), "expected a string");
                r.connections[it.key()] = it->get<std::string>();
            }
            kb.patterns.push_back(std::move(r));
        }

        const json& cells = detail::require_object(doc, "cells", "");
        for (auto it = cells.begin(); it != cells.end(); ++it) {
            std::string p = "cells." + it.key();
            const json& cj = *it;
            CellMaster c;
            c.name = it.key();
            c.kind = parse_enum<CellKind>(cj, "kind", p, &parse_cell_kind);
            c.width = detail::require_int(cj, "width_nm", p);
            c.height = detail::require_int(cj, "height_nm", p);
            const json& pins = detail::require_array(cj, "pins", p);
            for (std::size_t i = 0; i < pins.size(); ++i) {
                std::string pp = detail::index_path(p + ".pins", i);
                CellPin pin;
                pin.name = detail::require_string(pins[i], "name", pp);
                pin.role = parse_enum<PinRole>(pins[i], "role", pp, &parse_pin_role);
                pin.rect = parse_rect(detail::require(pins[i], "rect", pp), pp + ".rect");
                c.pins.push_back(std::move(pin));
            }
            const json& rc = detail::require_object(cj, "rail_continuity", p);
            c.rail_vdd = detail::require_bool(rc, "vdd", p + ".rail_continuity");
            c.rail_vss = detail::require_bool(rc, "vss", p + ".rail_continuity");
            c.domain_tag = detail::require_string(cj, "domain_tag", p);
            if (auto s = cj.find("supply"); s != cj.end()) {
                if (!s->is_string() || (*s != "vdd" && *s != "vss"))
                    throw SchemaError(p + ".supply", "expected \"vdd\" or \"vss\"");
                c.supply = *s == "vdd" ? Rail::vdd : Rail::vss;
            }
            kb.cells.emplace(c.name, std::move(c));
        }

        const json& rules = detail::require_object(doc, "rules", "");
        kb.rules.grid = detail::require_int(rules, "grid", "rules");
        kb.rules.abut_tol = detail::require_int(rules, "abut_tol", "rules");
        kb.rules.corner_required = detail::require_bool(rules, "corner_required", "rules");
        kb.rules.domain_isolation_required = detail::require_bool(rules, "domain_isolation_required", "rules");
        kb.rules.esd_supply_per_domain = detail::require_bool(rules, "esd_supply_per_domain", "rules");
        kb.rules.stagger_row_offset = detail::require_int(rules, "stagger_row_offset", "rules");
        kb.rules.stagger_min_overlap = detail::require_int(rules, "stagger_min_overlap", "rules");

        const json& domains = detail::require_array(doc, "domains", "");
        for (std::size_t i = 0; i < domains.size(); ++i) {
            std::string p = detail::index_path("domains", i);
            kb.domains.push_back({detail::require_string(domains[i], "name", p),
                                  detail::require_string(domains[i], "vdd_net", p),
                                  detail::require_string(domains[i], "vss_net", p)});
        }
        return kb;
    }

    static void validate(const KnowledgeBase& kb) {
        auto fail = [](const char* code, const std::string& what) { throw ValidationError(code, what); };

        std::set<std::string> domain_names;
        for (const auto& d : kb.domains) {
            if (!domain_names.insert(d.name).second) fail("DUPLICATE_DOMAIN", "domain " + d.name + " defined twice");
            if (!is_legal_name(d.vdd_net) || !is_legal_name(d.vss_net))
                fail("BAD_NET_NAME", "domain " + d.name + " has an illegal rail net name");
            if (d.vdd_net == d.vss_net) fail("RAIL_NETS", "domain " + d.name + " uses one net for both rails");
        }

        int corners = 0;
        bool breaker = false;
        for (const auto& [name, c] : kb.cells) {
            if (c.width <= 0 || c.height <= 0) fail("CELL_SIZE", "cell " + name + " has non-positive size");
            if (c.domain_tag != "any" && !domain_names.count(c.domain_tag))
                fail("UNKNOWN_DOMAIN", "cell " + name + " is tagged with unknown domain " + c.domain_tag);
            for (const auto& p : c.pins) {
                if (!Rect{0, 0, c.width, c.height}.contains(p.rect) || p.rect.empty())
                    fail("PIN_BOUNDS", "pin " + name + "." + p.name + " lies outside the cell");
                if ((c.kind == CellKind::filler || c.kind == CellKind::corner) &&
                    (p.role == PinRole::signal || p.role == PinRole::core_side))
                    fail("SIGNAL_PIN", "cell " + name + " of kind " + std::string(to_string(c.kind)) +
                                           " must not carry signal pins");
            }
            if (c.kind == CellKind::corner) ++corners;
            if (c.kind == CellKind::breaker) {
                breaker = true;
                if (c.rail_vdd || c.rail_vss)
                    fail("BREAKER_CONTINUITY", "breaker " + name + " must cut both rails");
            }
            if (c.supply && (!is_pad_kind(c.kind) || !c.continuity(*c.supply)))
                fail("SUPPLY_CELL", "supply marker on " + name + " requires a pad that carries that rail");
        }
        if (corners != 1) fail("CORNER_COUNT", "exactly one corner cell required, found " + std::to_string(corners));
        if (!breaker) fail("NO_BREAKER", "at least one breaker cell required");
        for (const auto& d : kb.domains) {
            auto fillers = kb.fillers_for(d.name);
            if (fillers.empty()) fail("NO_FILLER", "domain " + d.name + " has no filler cell");
            std::set<Length> widths;
            for (const auto* f : fillers)
                if (!widths.insert(f->width).second)
                    fail("FILLER_WIDTH", "domain " + d.name + " has two fillers of width " + std::to_string(f->width));
        }

        const auto& r = kb.rules;
        if (r.grid < 1) fail("GRID", "grid must be at least 1 nm");
        if (r.abut_tol < 0 || r.abut_tol >= r.grid) fail("ABUT_TOL", "abut_tol must lie in [0, grid)");
        if (r.stagger_row_offset < 0 || r.stagger_min_overlap < 0)
            fail("STAGGER_RULE", "stagger parameters must be non-negative");

        for (std::size_t i = 0; i < kb.patterns.size(); ++i) {
            const auto& p = kb.patterns[i];
            std::string where = "pattern #" + std::to_string(i) + " '" + p.pattern + "'";
            if (p.pattern.empty()) fail("BAD_PATTERN", where + " is empty");
            try {
                std::regex re(p.pattern, std::regex::ECMAScript);
            } catch (const std::regex_error& e) {
                fail("BAD_PATTERN", where + " does not compile: " + e.what());
            }
            const CellMaster* cell = kb.cell(p.device_type);
            if (!cell) fail("UNKNOWN_CELL", where + " references missing cell " + p.device_type);
            const DomainDef* dom = kb.domain(p.domain);
            if (!dom) fail("UNKNOWN_DOMAIN", where + " references missing domain " + p.domain);
            for (const auto& [pin, tmpl] : p.connections) {
                if (!cell->pin(pin)) fail("UNKNOWN_PIN", where + " connects missing pin " + p.device_type + "." + pin);
                if (!is_legal_name(expand_net_template(tmpl, "X", *dom)))
                    fail("BAD_NET_NAME", where + " template '" + tmpl + "' expands to an illegal net name");
            }
        }
    }
};

/// Parses and validates a knowledge-base JSON document.
inline KnowledgeBase load_knowledge_base(std::string_view text) {
    bool blank = std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); });
    if (blank) throw ParseError("empty knowledge-base document", 1, 1);
    KnowledgeBase kb = KbLoader::from_json(detail::parse_json(text));
    KbLoader::validate(kb);
    for (auto& p : kb.patterns) p.compile();
    kb.source = std::string(text);
    return kb;
}

inline std::string serialize_knowledge_base(const KnowledgeBase& kb) {
    using json = detail::json;
    json doc;
    json patterns = json::array();
    for (const auto& p : kb.patterns) {
        json conns = json::object();
        for (const auto& [pin, tmpl] : p.connections) conns[pin] = tmpl;
        patterns.push_back({{"pattern", p.pattern},
                            {"signal_class", to_string(p.signal_class)},
                            {"device_type", p.device_type},
                            {"direction", to_string(p.direction)},
                            {"domain", p.domain},
                            {"connections", conns}});
    }
    doc["patterns"] = patterns;
    json cells = json::object();
    for (const auto& [name, c] : kb.cells) {
        json pins = json::array();
        for (const auto& p : c.pins)
            pins.push_back({{"name", p.name},
                            {"role", to_string(p.role)},
                            {"rect", {p.rect.x0, p.rect.y0, p.rect.x1, p.rect.y1}}});
        json cj = {{"kind", to_string(c.kind)},
                   {"width_nm", c.width},
                   {"height_nm", c.height},
                   {"pins", pins},
                   {"rail_continuity", {{"vdd", c.rail_vdd}, {"vss", c.rail_vss}}},
                   {"domain_tag", c.domain_tag}};
        if (c.supply) cj["supply"] = to_string(*c.supply);
        cells[name] = cj;
    }
    doc["cells"] = cells;
    const auto& r = kb.rules;
    doc["rules"] = {{"grid", r.grid},
                    {"abut_tol", r.abut_tol},
                    {"corner_required", r.corner_required},
                    {"domain_isolation_required", r.domain_isolation_required},
                    {"esd_supply_per_domain", r.esd_supply_per_domain},
                    {"stagger_row_offset", r.stagger_row_offset},
                    {"stagger_min_overlap", r.stagger_min_overlap}};
    json domains = json::array();
    for (const auto& d : kb.domains)
        domains.push_back({{"name", d.name}, {"vdd_net", d.vdd_net}, {"vss_net", d.vss_net}});
    doc["domains"] = domains;
    return doc.dump(2) + "\n";
}

} // namespace ioring
