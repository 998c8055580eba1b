#pragma once

#include <compare>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "intent_graph.hpp"
#include "knowledge_base.hpp"
#include "layout_resolver.hpp"

namespace ioring {

struct PinRef {
    std::string inst;
    std::string pin;
    friend bool operator==(const PinRef&, const PinRef&) = default;
    friend auto operator<=>(const PinRef&, const PinRef&) = default;
};

inline std::string to_string(const PinRef& p) { return p.inst + "." + p.pin; }

struct Netlist {
    std::map<std::string, std::string> instances; // name -> master
    std::map<std::string, std::set<PinRef>> nets;

    /// Net holding `p`, or nullptr.
    const std::string* net_of(const PinRef& p) const {
        for (const auto& [name, pins] : nets)
            if (pins.count(p)) return &name;
        return nullptr;
    }

    friend bool operator==(const Netlist&, const Netlist&) = default;
};

inline bool is_rail_role(PinRole r) { return r == PinRole::rail_vdd || r == PinRole::rail_vss; }
inline Rail rail_of(PinRole r) { return r == PinRole::rail_vdd ? Rail::vdd : Rail::vss; }

/// Schematic netlist: signal pins follow node connections, rail pins go to the
/// node's domain supply nets. Breakers and corners carry no pins.
inline Netlist generate_netlist(const IntentGraph& graph, const KnowledgeBase& kb) {
    Netlist nl;
    for (const auto& n : graph.nodes) {
        const CellMaster* m = kb.cell(n.device_type);
        if (!m) throw ConsistencyError("node " + n.id + " has unknown device type " + n.device_type);
        if (m->kind == CellKind::filler) continue;
        nl.instances[n.name] = m->name;
        const DomainDef* d = kb.domain(n.domain);
        for (const auto& pin : m->pins) {
            if (is_rail_role(pin.role)) {
                if (d) nl.nets[d->net(rail_of(pin.role))].insert({n.name, pin.name});
            } else if (auto it = n.connections.find(pin.name); it != n.connections.end()) {
                nl.nets[it->second].insert({n.name, pin.name});
            }
        }
    }
    return nl;
}

namespace detail {

struct DisjointSet {
    std::vector<std::size_t> parent;
    explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    // Smaller index becomes the root so results do not depend on union order.
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent[b] = a;
    }
};

} // namespace detail

/// Layout netlist. Rails are traced by union-find over abutting instances
/// whose masters carry the rail; each component is named after the domain of
/// the supply pads it contains. Components without a supply pad become
/// FLOAT_<n> and are reported through `warnings`.
inline Netlist extract_netlist(const LayoutDB& layout, const IntentGraph& graph, const KnowledgeBase& kb,
                               std::vector<std::string>* warnings = nullptr) {
    Netlist nl;
    const auto& insts = layout.instances;
    const std::size_t n = insts.size();
    std::vector<Rect> boxes;
    std::vector<const CellMaster*> masters;
    for (const auto& i : insts) {
        const CellMaster* m = kb.cell(i.master);
        if (!m) throw ConsistencyError("instance " + i.id + " uses unknown master " + i.master);
        masters.push_back(m);
        boxes.push_back(transform_bbox(*m, i.origin, i.orient));
        if (m->kind != CellKind::filler) nl.instances[i.name] = m->name;
    }

    // Signal nets come from the pad's own pin identities.
    for (std::size_t k = 0; k < n; ++k) {
        const IntentNode* node = graph.find(insts[k].id);
        if (!node) continue;
        for (const auto& pin : masters[k]->pins) {
            if (is_rail_role(pin.role)) continue;
            if (auto it = node->connections.find(pin.name); it != node->connections.end())
                nl.nets[it->second].insert({insts[k].name, pin.name});
        }
    }

    std::map<std::string, int> used_names;
    int floating = 0;
    for (Rail rail : kRails) {
        detail::DisjointSet ds(n);
        for (std::size_t a = 0; a < n; ++a) {
            if (!masters[a]->continuity(rail)) continue;
            for (std::size_t b = a + 1; b < n; ++b)
                if (masters[b]->continuity(rail) && shared_edge(boxes[a], boxes[b], kb.rules.abut_tol) > 0)
                    ds.unite(a, b);
        }
        // root -> (seed net names, member pins)
        std::map<std::size_t, std::pair<std::set<std::string>, std::set<PinRef>>> comps;
        for (std::size_t k = 0; k < n; ++k) {
            if (masters[k]->kind == CellKind::filler) continue;
            std::size_t root = ds.find(k);
            for (const auto& pin : masters[k]->pins)
                if (is_rail_role(pin.role) && rail_of(pin.role) == rail) comps[root].second.insert({insts[k].name, pin.name});
            if (masters[k]->supply && is_pad_kind(masters[k]->kind))
                if (const DomainDef* d = kb.domain(insts[k].domain)) comps[root].first.insert(d->net(rail));
        }
        for (auto& [root, comp] : comps) {
            auto& [seeds, pins] = comp;
            if (pins.empty()) continue;
            std::string name;
            if (seeds.empty()) {
                name = "FLOAT_" + std::to_string(floating++);
                if (warnings)
                    warnings->push_back("floating " + std::string(to_string(rail)) + " rail segment " + name +
                                        " reaches no supply pad (first member " + insts[root].name + ")");
            } else {
                name = *seeds.begin();
                if (seeds.size() > 1 && warnings) {
                    std::string all;
                    for (const auto& s : seeds) all += (all.empty() ? "" : ",") + s;
                    warnings->push_back("rail segment joins supplies " + all);
                }
            }
            int dup = used_names[name]++;
            if (dup > 0) name += "_" + std::to_string(dup);
            nl.nets[name].insert(pins.begin(), pins.end());
        }
    }
    return nl;
}

/// Parses the `INST` / `NET` line format; `#` starts a comment line.
inline Netlist parse_netlist_text(std::string_view text) {
    Netlist nl;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw) || kw[0] == '#') continue;
        if (kw == "INST") {
            std::string name, master, extra;
            if (!(ls >> name >> master) || (ls >> extra)) throw ParseError("INST needs <name> <master>", lineno, 1);
            nl.instances[name] = master;
        } else if (kw == "NET") {
            std::string net, ref;
            if (!(ls >> net)) throw ParseError("NET needs a net name", lineno, 1);
            auto& pins = nl.nets[net];
            while (ls >> ref) {
                auto dot = ref.rfind('.');
                if (dot == std::string::npos || dot == 0 || dot + 1 == ref.size())
                    throw ParseError("pin reference '" + ref + "' is not <inst>.<pin>", lineno, 1);
                pins.insert({ref.substr(0, dot), ref.substr(dot + 1)});
            }
        } else {
            throw ParseError("unknown keyword " + kw, lineno, 1);
        }
    }
    return nl;
}

} // namespace ioring
