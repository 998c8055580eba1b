#pragma once

#include <map>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "geometry.hpp"
#include "intent_graph.hpp"
#include "knowledge_base.hpp"
#include "layout_resolver.hpp"
#include "netlist.hpp"

namespace ioring {

inline std::string emit_netlist_text(const Netlist& nl) {
    std::string out;
    for (const auto& [name, master] : nl.instances) out += "INST " + name + " " + master + "\n";
    for (const auto& [net, pins] : nl.nets) {
        out += "NET " + net;
        for (const auto& p : pins) out += " " + to_string(p);
        out += "\n";
    }
    return out;
}

/// Layout/schematic script. Pads, corners and breakers come first in ring
/// order, then fillers in placement order, then one `ioNet` per net.
inline std::string emit_script(const LayoutDB& layout, const Netlist& netlist, const IntentGraph& graph) {
    std::ostringstream os;
    os << "; ioring script\n";
    os << "ioDie " << format_um(layout.die_width) << ' ' << format_um(layout.die_height) << '\n';

    std::map<std::string, const PlacedInstance*> by_id;
    for (const auto& i : layout.instances) {
        if (i.kind == CellKind::filler) continue;
        if (!graph.find(i.id)) throw ConsistencyError("layout instance " + i.id + " has no intent-graph node");
        by_id[i.id] = &i;
    }
    for (const auto& n : graph.nodes) {
        auto it = by_id.find(n.id);
        if (it == by_id.end()) continue;
        const PlacedInstance& i = *it->second;
        os << "ioInst \"" << i.name << "\" \"" << i.master << "\" " << format_um(i.origin.x) << ' '
           << format_um(i.origin.y) << ' ' << to_string(i.orient) << ' ' << to_string(i.row) << '\n';
    }
    for (const auto& i : layout.instances) {
        if (i.kind != CellKind::filler) continue;
        os << "ioFill \"" << i.master << "\" " << format_um(i.origin.x) << ' ' << format_um(i.origin.y) << ' '
           << to_string(i.orient) << '\n';
    }
    for (const auto& [net, pins] : netlist.nets) {
        os << "ioNet \"" << net << '"';
        for (const auto& p : pins) os << ' ' << to_string(p);
        os << '\n';
    }
    return os.str();
}

namespace detail {

inline std::string_view kind_color(CellKind k) {
    switch (k) {
    case CellKind::pad: return "#6a9fd8";
    case CellKind::custom_pad: return "#a57fcf";
    case CellKind::corner: return "#5c5c5c";
    case CellKind::filler: return "#d0d0d0";
    case CellKind::breaker: return "#d9534f";
    }
    return "#000000";
}

} // namespace detail

/// Top view in micrometres, y pointing up like the die coordinates.
inline std::string emit_svg(const LayoutDB& layout, const KnowledgeBase& kb) {
    const Length W = layout.die_width;
    const Length H = layout.die_height;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << format_um(W) << ' ' << format_um(H) << "\">\n";
    os << "  <rect class=\"die\" x=\"0.000\" y=\"0.000\" width=\"" << format_um(W) << "\" height=\"" << format_um(H)
       << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"2\"/>\n";
    std::string labels;
    for (const auto& i : layout.instances) {
        const CellMaster* m = kb.cell(i.master);
        if (!m) continue;
        Rect r = transform_bbox(*m, i.origin, i.orient);
        os << "  <rect id=\"" << i.id << "\" x=\"" << format_um(r.x0) << "\" y=\"" << format_um(H - r.y1)
           << "\" width=\"" << format_um(r.width()) << "\" height=\"" << format_um(r.height()) << "\" fill=\""
           << detail::kind_color(m->kind) << "\" stroke=\"#202020\" stroke-width=\"0.5\"/>\n";
        if (is_pad_kind(m->kind)) {
            Length cx = (r.x0 + r.x1) / 2;
            Length cy = H - (r.y0 + r.y1) / 2;
            labels += "  <text x=\"" + format_um(cx) + "\" y=\"" + format_um(cy) +
                      "\" font-size=\"8\" text-anchor=\"middle\">" + i.name + "</text>\n";
        }
    }
    os << labels << "</svg>\n";
    return os.str();
}

} // namespace ioring
