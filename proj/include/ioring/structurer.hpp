#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "intent_graph.hpp"
#include "knowledge_base.hpp"
#include "spec_ingest.hpp"

namespace ioring {

struct NodeAttributes {
    std::string device_type;
    Direction direction = Direction::passive;
    std::string domain;
    std::map<std::string, std::string> connections;
    std::optional<SignalClass> signal_class;
    /// No pattern matched and the overrides were incomplete.
    bool unresolved = false;

    friend bool operator==(const NodeAttributes&, const NodeAttributes&) = default;
};

enum class StructurerMode { deterministic, external };

struct StructurerConfig {
    StructurerMode mode = StructurerMode::deterministic;
    std::optional<std::string> endpoint;
    /// Fail on unresolvable pins instead of emitting them for hand completion.
    bool strict = false;
};

/// KB pattern inference overlaid field-wise with the pin's overrides.
inline NodeAttributes infer_node_attributes(const PinEntry& entry, const KnowledgeBase& kb, bool strict = false) {
    const auto& ov = entry.overrides;
    const NamePatternRule* rule = match_pattern(entry.name, kb);
    NodeAttributes a;
    if (!rule) {
        bool complete = ov.device_type && ov.direction && ov.domain;
        if (!complete && strict) throw UnresolvedPinError(entry.name);
        a.unresolved = !complete;
    } else {
        a.device_type = rule->device_type;
        a.direction = rule->direction;
        a.domain = rule->domain;
        a.signal_class = rule->signal_class;
    }
    if (ov.device_type) a.device_type = *ov.device_type;
    if (ov.direction) a.direction = *ov.direction;
    if (ov.domain) a.domain = *ov.domain;
    if (a.unresolved) return a;

    const DomainDef* domain = kb.domain(a.domain);
    if (!domain) throw DomainConfigError("pin " + entry.name + " references undefined domain '" + a.domain + "'");
    std::map<std::string, std::string> templates;
    if (ov.connections) templates = *ov.connections;
    else if (rule) templates = rule->connections;
    else if (const CellMaster* cell = kb.cell(a.device_type)) {
        // Override-only pin: wire the device's own signal pins by role.
        for (const auto& p : cell->pins) {
            if (p.role == PinRole::signal) templates[p.name] = "{name}";
            if (p.role == PinRole::core_side) templates[p.name] = "{name}_C";
        }
    }
    for (const auto& [pin, tmpl] : templates) a.connections[pin] = expand_net_template(tmpl, entry.name, *domain);
    return a;
}

namespace detail {

inline std::string node_id(std::size_t seq) {
    std::string digits = std::to_string(seq);
    if (digits.size() < 3) digits.insert(0, 3 - digits.size(), '0');
    return "n" + digits;
}

inline constexpr std::array<std::string_view, 4> kCornerNames{"CORNER_SW", "CORNER_SE", "CORNER_NE", "CORNER_NW"};

/// Supply coverage per domain among pad nodes: (has VDD pad, has VSS pad).
inline std::map<std::string, std::pair<bool, bool>> supply_coverage(const IntentGraph& g, const KnowledgeBase& kb) {
    std::map<std::string, std::pair<bool, bool>> out;
    for (const auto& n : g.nodes) {
        const CellMaster* c = kb.cell(n.device_type);
        if (!c || !is_pad_kind(c->kind) || n.domain.empty()) continue;
        auto& e = out[n.domain];
        e.first = e.first || c->supply == Rail::vdd;
        e.second = e.second || c->supply == Rail::vss;
    }
    return out;
}

} // namespace detail

/// Inserts a breaker after every node whose successor (cyclically) lies in a
/// different domain. Corners first adopt the domain of the nearest preceding
/// pad, so rails turn corners without needing isolation there.
inline void insert_corner_domains_and_breakers(std::vector<IntentNode>& ring, const KnowledgeBase& kb,
                                               bool insert_breakers) {
    const std::size_t n = ring.size();
    auto is_corner = [&](const IntentNode& node) {
        const CellMaster* c = kb.cell(node.device_type);
        return c && c->kind == CellKind::corner;
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_corner(ring[i])) continue;
        for (std::size_t k = 1; k < n; ++k) {
            const auto& prev = ring[(i + n - k) % n];
            if (!is_corner(prev)) {
                ring[i].domain = prev.domain;
                break;
            }
        }
    }
    if (!insert_breakers || n < 2) return;
    std::vector<IntentNode> out;
    out.reserve(n + 8);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(ring[i]);
        const auto& next = ring[(i + 1) % n];
        if (ring[i].domain == next.domain) continue;
        IntentNode brk;
        brk.name = "BRK_" + ring[i].name;
        brk.device_type = kb.breaker_for(ring[i].domain).name;
        brk.side = ring[i].side;
        brk.direction = Direction::passive;
        brk.domain = ring[i].domain;
        brk.row = Row::outer;
        brk.provenance = Provenance::inferred;
        out.push_back(std::move(brk));
    }
    ring = std::move(out);
}

/// Deterministic structuring: explicit completion of every listed pin, then
/// implicit insertion of corners and domain breakers.
inline IntentGraph structure_intent(const PadPlanSpec& spec, const KnowledgeBase& kb, const StructurerConfig& cfg = {}) {
    const auto& rules = kb.rules;
    if (spec.die_width % rules.grid != 0 || spec.die_height % rules.grid != 0)
        throw OffGridError("die " + format_um(spec.die_width) + " x " + format_um(spec.die_height) + " um on a " +
                           std::to_string(rules.grid) + " nm grid");

    std::map<std::string, std::string> custom_cells;
    std::vector<std::string> local_esd;
    std::optional<std::vector<std::string>> domain_order;
    for (const auto& d : spec.directives) {
        switch (d.kind) {
        case DirectiveKind::use_custom_cell: {
            const std::string& cell = d.args.at("cell");
            const CellMaster* m = kb.cell(cell);
            if (!m || !is_pad_kind(m->kind)) throw DirectiveError("USE_CUSTOM_CELL names unknown pad cell " + cell);
            custom_cells[d.args.at("name")] = cell;
            break;
        }
        case DirectiveKind::local_esd_domain:
            if (!kb.domain(d.args.at("domain")))
                throw DomainConfigError("LOCAL_ESD_DOMAIN names undefined domain " + d.args.at("domain"));
            local_esd.push_back(d.args.at("domain"));
            break;
        case DirectiveKind::set_domain_order: {
            domain_order = detail::split(d.args.at("order"), ',');
            for (const auto& name : *domain_order)
                if (!kb.domain(name)) throw DomainConfigError("SET_DOMAIN_ORDER names undefined domain " + name);
            break;
        }
        case DirectiveKind::set_ring_style:
            break;
        }
    }

    const CellMaster& corner = kb.corner();
    std::vector<IntentNode> ring;
    std::set<std::string> listed;
    for (Side s : kRingSides) {
        IntentNode c;
        c.name = std::string(detail::kCornerNames[static_cast<std::size_t>(side_rank(s))]);
        c.device_type = corner.name;
        c.side = s;
        c.direction = Direction::passive;
        c.provenance = Provenance::inferred;
        ring.push_back(std::move(c));
        for (const auto& entry : spec.side(s)) {
            NodeAttributes a = infer_node_attributes(entry, kb, cfg.strict);
            IntentNode n;
            n.name = entry.name;
            n.device_type = a.device_type;
            n.side = s;
            n.direction = a.direction;
            n.domain = a.domain;
            n.row = entry.overrides.row.value_or(Row::outer);
            n.connections = std::move(a.connections);
            n.provenance = Provenance::explicit_pin;
            if (auto it = custom_cells.find(entry.name); it != custom_cells.end()) n.device_type = it->second;
            listed.insert(entry.name);
            ring.push_back(std::move(n));
        }
    }
    for (const auto& [pin, _] : custom_cells)
        if (!listed.count(pin)) throw DirectiveError("USE_CUSTOM_CELL names pin " + pin + " absent from the plan");

    insert_corner_domains_and_breakers(ring, kb, rules.domain_isolation_required);

    IntentGraph g;
    g.die_width = spec.die_width;
    g.die_height = spec.die_height;
    g.ring_style = spec.ring_style;
    g.nodes = std::move(ring);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) g.nodes[i].id = detail::node_id(i);
    renumber_positions(g);

    auto coverage = detail::supply_coverage(g, kb);
    auto require_supplies = [&](const std::string& domain) {
        auto it = coverage.find(domain);
        if (it == coverage.end()) throw EsdRuleError(domain, "no pads belong to the domain");
        if (!it->second.first) throw EsdRuleError(domain, "no VDD-class supply pad");
        if (!it->second.second) throw EsdRuleError(domain, "no VSS-class supply pad");
    };
    if (rules.esd_supply_per_domain)
        for (const auto& [domain, _] : coverage) require_supplies(domain);
    for (const auto& domain : local_esd) require_supplies(domain);

    if (domain_order) {
        std::vector<std::string> seen;
        for (const auto& n : g.nodes) {
            const CellMaster* c = kb.cell(n.device_type);
            if (c && is_pad_kind(c->kind) && std::find(seen.begin(), seen.end(), n.domain) == seen.end())
                seen.push_back(n.domain);
        }
        std::vector<std::string> expected;
        for (const auto& d : *domain_order)
            if (std::find(seen.begin(), seen.end(), d) != seen.end()) expected.push_back(d);
        std::vector<std::string> actual;
        for (const auto& d : seen)
            if (std::find(domain_order->begin(), domain_order->end(), d) != domain_order->end()) actual.push_back(d);
        if (actual != expected)
            throw DomainConfigError("domains do not appear in the order requested by SET_DOMAIN_ORDER");
    }
    return g;
}

/// Rebuilds a pin plan from a graph's explicit nodes, carrying every resolved
/// attribute as an override.
inline PadPlanSpec spec_from_graph(const IntentGraph& g) {
    PadPlanSpec spec;
    spec.die_width = g.die_width;
    spec.die_height = g.die_height;
    spec.ring_style = g.ring_style;
    for (const auto& n : g.nodes) {
        if (n.provenance != Provenance::explicit_pin) continue;
        PinEntry e;
        e.name = n.name;
        e.overrides.device_type = n.device_type;
        e.overrides.direction = n.direction;
        e.overrides.domain = n.domain;
        e.overrides.row = n.row;
        e.overrides.connections = n.connections;
        spec.side(n.side).push_back(std::move(e));
    }
    return spec;
}

} // namespace ioring
