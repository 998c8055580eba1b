#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "json_util.hpp"
#include "knowledge_base.hpp"

namespace ioring {

enum class Provenance { explicit_pin, inferred };

inline std::string_view to_string(Provenance p) { return p == Provenance::explicit_pin ? "explicit" : "inferred"; }

inline std::optional<Provenance> parse_provenance(std::string_view t) {
    if (t == "explicit") return Provenance::explicit_pin;
    if (t == "inferred") return Provenance::inferred;
    return std::nullopt;
}

struct IntentNode {
    std::string id;
    std::string name;
    std::string device_type;
    Side side = Side::S;
    int index = 0;
    Direction direction = Direction::passive;
    std::string domain;
    Row row = Row::outer;
    std::map<std::string, std::string> connections;
    Provenance provenance = Provenance::explicit_pin;

    friend bool operator==(const IntentNode&, const IntentNode&) = default;
};

/// The ring as an ordered node sequence: SW corner first, then S, E, N, W
/// counter-clockwise, each side opening with its corner. Adjacency is implied
/// by order and closes from the last W node back to the SW corner.
struct IntentGraph {
    Length die_width = 0;
    Length die_height = 0;
    RingStyle ring_style = RingStyle::single_row;
    std::vector<IntentNode> nodes;

    const IntentNode* find(std::string_view id) const {
        for (const auto& n : nodes)
            if (n.id == id) return &n;
        return nullptr;
    }

    const IntentNode* find_by_name(std::string_view name) const {
        for (const auto& n : nodes)
            if (n.name == name) return &n;
        return nullptr;
    }

    friend bool operator==(const IntentGraph&, const IntentGraph&) = default;
};

/// Sorts nodes into ring order by (side, index); stable for ties.
inline void sort_ring_order(IntentGraph& g) {
    std::stable_sort(g.nodes.begin(), g.nodes.end(), [](const IntentNode& a, const IntentNode& b) {
        if (a.side != b.side) return side_rank(a.side) < side_rank(b.side);
        return a.index < b.index;
    });
}

/// Rewrites indices as 0-based contiguous positions along each side, keeping order.
inline void renumber_positions(IntentGraph& g) {
    std::array<int, 4> next{};
    for (auto& n : g.nodes) n.index = next[static_cast<std::size_t>(side_rank(n.side))]++;
}

enum class Severity { error, warning };

struct Issue {
    Severity severity = Severity::error;
    std::string code;
    std::string message;
    std::optional<std::string> node_id;
    friend bool operator==(const Issue&, const Issue&) = default;
};

struct ValidationReport {
    bool passed = true;
    std::vector<Issue> issues;

    bool has(std::string_view code) const {
        return std::any_of(issues.begin(), issues.end(), [&](const Issue& i) { return i.code == code; });
    }

    std::vector<std::string> error_codes() const {
        std::set<std::string> codes;
        for (const auto& i : issues)
            if (i.severity == Severity::error) codes.insert(i.code);
        return {codes.begin(), codes.end()};
    }

    void add(Severity s, std::string code, std::string message, std::optional<std::string> node = std::nullopt) {
        if (s == Severity::error) passed = false;
        issues.push_back({s, std::move(code), std::move(message), std::move(node)});
    }
};

/// Codes that stop geometry resolution. The remaining error codes describe
/// electrical intent (domain isolation, ESD supplies) and are left for DRC and
/// LVS to localise.
inline bool is_structural_code(std::string_view code) { return code != "DOMAIN_LEAK" && code != "ESD_SUPPLY"; }

inline bool structurally_sound(const ValidationReport& r) {
    return std::none_of(r.issues.begin(), r.issues.end(), [](const Issue& i) {
        return i.severity == Severity::error && is_structural_code(i.code);
    });
}

inline ValidationReport validate_intent_graph(const IntentGraph& g, const KnowledgeBase& kb) {
    ValidationReport r;
    const auto E = Severity::error;
    const auto& rules = kb.rules;

    if (g.die_width <= 0 || g.die_height <= 0) r.add(E, "DIE_SIZE", "die dimensions must be positive");
    else if (g.die_width % rules.grid != 0 || g.die_height % rules.grid != 0)
        r.add(E, "DIE_OFF_GRID", "die dimensions are not multiples of the " + std::to_string(rules.grid) + " nm grid");

    std::set<std::string> ids;
    std::set<std::string> names;
    std::set<std::pair<int, int>> positions;
    int pads = 0;
    int corners = 0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const auto& n = g.nodes[i];
        if (n.id.empty() || !ids.insert(n.id).second) r.add(E, "DUPLICATE_ID", "node id '" + n.id + "' is empty or repeated", n.id);
        if (!is_legal_name(n.name)) r.add(E, "BAD_NAME", "node name '" + n.name + "' is not alphanumeric/underscore", n.id);
        else if (!names.insert(n.name).second) r.add(E, "DUPLICATE_NAME", "node name " + n.name + " is repeated", n.id);
        if (!positions.insert({side_rank(n.side), n.index}).second)
            r.add(E, "DUPLICATE_POSITION", "two nodes at " + std::string(to_string(n.side)) + "[" + std::to_string(n.index) + "]", n.id);
        if (i > 0) {
            const auto& p = g.nodes[i - 1];
            if (side_rank(p.side) > side_rank(n.side) || (p.side == n.side && p.index > n.index))
                r.add(E, "POSITION_ORDER", "node " + n.name + " is out of ring order", n.id);
        }

        const CellMaster* cell = kb.cell(n.device_type);
        if (!cell) {
            r.add(E, "UNKNOWN_DEVICE", "device type '" + n.device_type + "' of " + n.name + " is not in the knowledge base", n.id);
        } else {
            if (cell->kind == CellKind::corner) ++corners;
            if (is_pad_kind(cell->kind)) ++pads;
            if (cell->kind == CellKind::filler)
                r.add(E, "FILLER_NODE", "filler cells are introduced by geometry resolution, not intent nodes", n.id);
            if ((cell->kind == CellKind::corner || cell->kind == CellKind::breaker) && n.provenance == Provenance::explicit_pin)
                r.add(Severity::warning, "PROVENANCE", n.name + " is a " + std::string(to_string(cell->kind)) + " but marked explicit", n.id);
            if (n.row == Row::inner && !is_pad_kind(cell->kind))
                r.add(E, "INNER_NONPAD", n.name + " is not a pad and cannot sit in the inner row", n.id);
            for (const auto& [pin, net] : n.connections) {
                if (!cell->pin(pin)) r.add(E, "UNKNOWN_PIN", n.name + " connects pin " + pin + " absent from " + cell->name, n.id);
                if (!is_legal_name(net)) r.add(E, "BAD_NET_NAME", n.name + "." + pin + " connects illegal net '" + net + "'", n.id);
            }
        }
        if (!kb.domain(n.domain)) r.add(E, "UNKNOWN_DOMAIN", n.name + " belongs to undefined domain '" + n.domain + "'", n.id);
        if (n.row == Row::inner && g.ring_style == RingStyle::single_row)
            r.add(E, "ROW_STYLE", n.name + " is in the inner row of a single-row ring", n.id);
    }

    if (corners < 4) r.add(E, "MISSING_CORNER", "ring has " + std::to_string(corners) + " corner nodes, 4 required");
    if (corners > 4) r.add(E, "EXTRA_CORNER", "ring has " + std::to_string(corners) + " corner nodes, 4 required");
    if (pads == 0 && !g.nodes.empty()) r.add(E, "NO_PADS", "ring contains no pad nodes");

    // Each side opens with its corner; no corner elsewhere.
    for (Side s : kRingSides) {
        bool first = true;
        int index_expect = 0;
        bool gap = false;
        for (const auto& n : g.nodes) {
            if (n.side != s) continue;
            const CellMaster* cell = kb.cell(n.device_type);
            bool is_corner = cell && cell->kind == CellKind::corner;
            if (first && !is_corner && corners == 4)
                r.add(E, "MISPLACED_CORNER", "side " + std::string(to_string(s)) + " does not open with a corner", n.id);
            if (!first && is_corner)
                r.add(E, "MISPLACED_CORNER", "corner " + n.name + " is not the first node of side " + std::string(to_string(s)), n.id);
            if (n.index != index_expect) gap = true;
            ++index_expect;
            first = false;
        }
        if (first && corners == 4)
            r.add(E, "MISPLACED_CORNER", "side " + std::string(to_string(s)) + " has no nodes");
        if (gap)
            r.add(Severity::warning, "INDEX_GAP", "indices on side " + std::string(to_string(s)) + " are not contiguous from 0");
    }

    if (rules.domain_isolation_required && g.nodes.size() > 1) {
        auto is_breaker = [&](const IntentNode& n) {
            const CellMaster* c = kb.cell(n.device_type);
            return c && c->kind == CellKind::breaker;
        };
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            const auto& a = g.nodes[i];
            const auto& b = g.nodes[(i + 1) % g.nodes.size()];
            if (a.domain != b.domain && !is_breaker(a) && !is_breaker(b))
                r.add(E, "DOMAIN_LEAK", a.name + " (" + a.domain + ") abuts " + b.name + " (" + b.domain + ") without a breaker", b.id);
        }
    }

    if (rules.esd_supply_per_domain) {
        std::map<std::string, std::pair<bool, bool>> supplied;
        for (const auto& n : g.nodes) {
            const CellMaster* c = kb.cell(n.device_type);
            if (!c || !is_pad_kind(c->kind)) continue;
            auto& entry = supplied[n.domain];
            if (c->supply == Rail::vdd) entry.first = true;
            if (c->supply == Rail::vss) entry.second = true;
        }
        for (const auto& [domain, s] : supplied)
            if (!s.first || !s.second)
                r.add(E, "ESD_SUPPLY", "domain " + domain + " lacks a " + (s.first ? "VSS" : "VDD") + " supply pad");
    }
    return r;
}

inline detail::json validation_report_json(const ValidationReport& r) {
    using json = detail::json;
    json issues = json::array();
    for (const auto& i : r.issues) {
        json ij = {{"severity", i.severity == Severity::error ? "error" : "warning"},
                   {"code", i.code},
                   {"message", i.message}};
        if (i.node_id) ij["node_id"] = *i.node_id;
        issues.push_back(ij);
    }
    return {{"passed", r.passed}, {"issues", issues}};
}

inline detail::json intent_graph_json(const IntentGraph& g) {
    using json = detail::json;
    json nodes = json::array();
    for (const auto& n : g.nodes) {
        json conns = json::object();
        for (const auto& [pin, net] : n.connections) conns[pin] = net;
        nodes.push_back({{"id", n.id},
                         {"name", n.name},
                         {"device_type", n.device_type},
                         {"side", to_string(n.side)},
                         {"index", n.index},
                         {"direction", to_string(n.direction)},
                         {"domain", n.domain},
                         {"row", to_string(n.row)},
                         {"connections", conns},
                         {"provenance", to_string(n.provenance)}});
    }
    return {{"die_nm", {{"w", g.die_width}, {"h", g.die_height}}},
            {"ring_style", to_string(g.ring_style)},
            {"nodes", nodes}};
}

/// Canonical form: sorted keys, two-space indent, trailing newline.
inline std::string serialize_intent_graph(const IntentGraph& g) { return intent_graph_json(g).dump(2) + "\n"; }

inline IntentGraph intent_graph_from_json(const detail::json& doc) {
    using namespace detail;
    IntentGraph g;
    const json& die = require_object(doc, "die_nm", "");
    g.die_width = require_int(die, "w", "die_nm");
    g.die_height = require_int(die, "h", "die_nm");
    auto style = parse_ring_style(require_string(doc, "ring_style", ""));
    if (!style) throw SchemaError("ring_style", "expected single_row or staggered");
    g.ring_style = *style;
    const json& nodes = require_array(doc, "nodes", "");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::string p = index_path("nodes", i);
        const json& nj = nodes[i];
        IntentNode n;
        n.id = require_string(nj, "id", p);
        n.name = require_string(nj, "name", p);
        n.device_type = require_string(nj, "device_type", p);
        auto side = parse_side(require_string(nj, "side", p));
        if (!side) throw SchemaError(p + ".side", "expected one of S,E,N,W");
        n.side = *side;
        n.index = static_cast<int>(require_int(nj, "index", p));
        auto dir = parse_direction(require_string(nj, "direction", p));
        if (!dir) throw SchemaError(p + ".direction", "unknown direction");
        n.direction = *dir;
        n.domain = require_string(nj, "domain", p);
        auto row = parse_row(require_string(nj, "row", p));
        if (!row) throw SchemaError(p + ".row", "expected outer or inner");
        n.row = *row;
        const json& conns = require_object(nj, "connections", p);
        for (auto it = conns.begin(); it != conns.end(); ++it) {
            if (!it->is_string()) throw SchemaError(p + ".connections." + it.key(), "expected a string");
            n.connections[it.key()] = it->get<std::string>();
        }
        auto prov = parse_provenance(require_string(nj, "provenance", p));
        if (!prov) throw SchemaError(p + ".provenance", "expected explicit or inferred");
        n.provenance = *prov;
        g.nodes.push_back(std::move(n));
    }
    sort_ring_order(g);
    return g;
}

/// Parses intent-graph JSON. Nodes are put into ring order by (side, index),
/// so editing positions in the document is enough to reorder pads.
inline IntentGraph parse_intent_graph(std::string_view text) {
    return intent_graph_from_json(detail::parse_json(text));
}

} // namespace ioring
