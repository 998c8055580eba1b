#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "intent_graph.hpp"
#include "json_util.hpp"
#include "knowledge_base.hpp"

namespace ioring {

struct FillerPlan {
    Length gap = 0;
    std::vector<Length> pieces;
    friend bool operator==(const FillerPlan&, const FillerPlan&) = default;
};

/// Minimum-count exact decomposition of `gap` into the given widths.
/// Ties go to the lexicographically largest sequence (pieces come out widest
/// first). Greedy is tried first and kept when it already meets the
/// ceil(gap / widest) lower bound.
inline FillerPlan solve_fillers(Length gap, std::vector<Length> widths) {
    if (gap < 0) throw UnfillableGapError(gap);
    std::sort(widths.begin(), widths.end(), std::greater<>());
    widths.erase(std::unique(widths.begin(), widths.end()), widths.end());
    if (widths.empty() || widths.back() <= 0) throw Error("filler widths must be non-empty and positive");
    FillerPlan plan{gap, {}};
    if (gap == 0) return plan;

    Length rem = gap;
    for (Length w : widths)
        while (rem >= w) {
            plan.pieces.push_back(w);
            rem -= w;
        }
    const Length lower = (gap + widths.front() - 1) / widths.front();
    if (rem == 0 && static_cast<Length>(plan.pieces.size()) == lower) return plan;

    Length g = 0;
    for (Length w : widths) g = std::gcd(g, w);
    if (gap % g != 0) throw UnfillableGapError(gap);
    const Length n = gap / g;
    if (n > 50'000'000) throw UnfillableGapError(gap);
    std::vector<Length> units;
    for (Length w : widths) units.push_back(w / g);

    constexpr int kInf = std::numeric_limits<int>::max();
    std::vector<int> dp(static_cast<std::size_t>(n) + 1, kInf);
    dp[0] = 0;
    for (Length v = 1; v <= n; ++v)
        for (Length u : units)
            if (u <= v && dp[static_cast<std::size_t>(v - u)] != kInf)
                dp[static_cast<std::size_t>(v)] = std::min(dp[static_cast<std::size_t>(v)], dp[static_cast<std::size_t>(v - u)] + 1);
    if (dp[static_cast<std::size_t>(n)] == kInf) throw UnfillableGapError(gap);

    plan.pieces.clear();
    for (Length v = n; v > 0;) {
        for (Length u : units) {
            if (u <= v && dp[static_cast<std::size_t>(v - u)] == dp[static_cast<std::size_t>(v)] - 1) {
                plan.pieces.push_back(u * g);
                v -= u;
                break;
            }
        }
    }
    return plan;
}

/// Normalised bounding box of an oriented cell; min corner equals `origin`.
inline Rect transform_bbox(const CellMaster& master, Point origin, Orient orient) {
    return placed_bbox(master.width, master.height, origin, orient);
}

struct PlacedInstance {
    std::string id;   // intent node id, or FILL_<side>_<k>
    std::string name; // node name; fillers reuse the id
    std::string master;
    CellKind kind = CellKind::pad;
    Side side = Side::S;
    Point origin;
    Orient orient = Orient::R0;
    Row row = Row::outer;
    std::string domain;

    friend bool operator==(const PlacedInstance&, const PlacedInstance&) = default;
};

struct LayoutDB {
    Length die_width = 0;
    Length die_height = 0;
    RingStyle ring_style = RingStyle::single_row;
    std::vector<PlacedInstance> instances;

    Rect die() const { return {0, 0, die_width, die_height}; }

    const PlacedInstance* find(std::string_view id) const {
        for (const auto& i : instances)
            if (i.id == id) return &i;
        return nullptr;
    }

    friend bool operator==(const LayoutDB&, const LayoutDB&) = default;
};

inline Rect instance_bbox(const PlacedInstance& inst, const KnowledgeBase& kb) {
    const CellMaster* m = kb.cell(inst.master);
    if (!m) throw ConsistencyError("instance " + inst.id + " uses unknown master " + inst.master);
    return transform_bbox(*m, inst.origin, inst.orient);
}

inline Length side_length(Side s, Length die_w, Length die_h) {
    return (s == Side::S || s == Side::N) ? die_w : die_h;
}

/// Interval [t0, t1) a box covers along its side, measured from the side's
/// start corner in traversal direction.
inline std::pair<Length, Length> along_interval(Side s, const Rect& r, Length die_w, Length die_h) {
    switch (s) {
    case Side::S: return {r.x0, r.x1};
    case Side::E: return {r.y0, r.y1};
    case Side::N: return {die_w - r.x1, die_w - r.x0};
    case Side::W: return {die_h - r.y1, die_h - r.y0};
    }
    return {0, 0};
}

/// Distance of a box's die-facing edge from its side's die edge.
inline Length depth_of(Side s, const Rect& r, Length die_w, Length die_h) {
    switch (s) {
    case Side::S: return r.y0;
    case Side::E: return die_w - r.x1;
    case Side::N: return die_h - r.y1;
    case Side::W: return r.x0;
    }
    return 0;
}

/// Origin of a cell of the given along-length and depth-extent starting at
/// along-coordinate `t`, `inset` nm in from the die edge.
inline Point side_origin(Side s, Length t, Length along, Length extent, Length inset, Length die_w, Length die_h) {
    switch (s) {
    case Side::S: return {t, inset};
    case Side::E: return {die_w - inset - extent, t};
    case Side::N: return {die_w - t - along, die_h - inset - extent};
    case Side::W: return {inset, die_h - t - along};
    }
    return {};
}

/// Orders instances by (side, row, along-side start).
inline void sort_instances(LayoutDB& db, const KnowledgeBase& kb) {
    auto key = [&](const PlacedInstance& i) {
        return std::make_tuple(side_rank(i.side), static_cast<int>(i.row),
                               along_interval(i.side, instance_bbox(i, kb), db.die_width, db.die_height).first, i.id);
    };
    std::stable_sort(db.instances.begin(), db.instances.end(),
                     [&](const PlacedInstance& a, const PlacedInstance& b) { return key(a) < key(b); });
}

inline LayoutDB resolve_geometry(const IntentGraph& graph, const KnowledgeBase& kb) {
    ValidationReport report = validate_intent_graph(graph, kb);
    if (!structurally_sound(report)) {
        for (const auto& i : report.issues)
            if (i.severity == Severity::error && is_structural_code(i.code)) throw ValidationError(i.code, i.message);
    }
    const Length W = graph.die_width;
    const Length H = graph.die_height;
    const auto& rules = kb.rules;

    LayoutDB db;
    db.die_width = W;
    db.die_height = H;
    db.ring_style = graph.ring_style;

    std::array<std::vector<const IntentNode*>, 4> by_side;
    for (const auto& n : graph.nodes) by_side[static_cast<std::size_t>(side_rank(n.side))].push_back(&n);

    auto place = [&](const IntentNode& n, const CellMaster& m, Length t, Length inset) {
        PlacedInstance p;
        p.id = n.id;
        p.name = n.name;
        p.master = m.name;
        p.kind = m.kind;
        p.side = n.side;
        p.origin = side_origin(n.side, t, m.width, m.height, inset, W, H);
        p.orient = side_orient(n.side);
        p.row = n.row;
        p.domain = n.domain;
        db.instances.push_back(std::move(p));
    };

    std::vector<Rect> inner_boxes;
    std::vector<std::string> inner_names;
    for (Side s : kRingSides) {
        const auto& nodes = by_side[static_cast<std::size_t>(side_rank(s))];
        const Length L = side_length(s, W, H);
        const auto& next_nodes = by_side[static_cast<std::size_t>(side_rank(next_side(s)))];
        const CellMaster& next_corner = *kb.cell(next_nodes.front()->device_type);

        // Outer row, edge to edge; remember each outer node's span for staggering.
        struct Span {
            const IntentNode* node;
            const CellMaster* master;
            Length t0, t1;
        };
        std::vector<Span> outer;
        Length t = 0;
        for (const IntentNode* n : nodes) {
            if (n->row != Row::outer) continue;
            const CellMaster& m = *kb.cell(n->device_type);
            place(*n, m, t, 0);
            outer.push_back({n, &m, t, t + m.width});
            t += m.width;
        }
        const Length gap = L - t - next_corner.width;
        if (gap < 0) throw RingOverflowError(std::string(to_string(s)), -gap);

        std::string filler_domain = next_nodes.front()->domain;
        auto fillers = kb.fillers_for(filler_domain);
        std::vector<Length> widths;
        for (const auto* f : fillers) widths.push_back(f->width);
        FillerPlan plan;
        try {
            plan = solve_fillers(gap, widths);
        } catch (const UnfillableGapError&) {
            throw UnfillableGapError(gap, std::string(to_string(s)));
        }
        for (std::size_t k = 0; k < plan.pieces.size(); ++k) {
            const CellMaster* m = *std::find_if(fillers.begin(), fillers.end(),
                                                [&](const CellMaster* f) { return f->width == plan.pieces[k]; });
            PlacedInstance p;
            p.id = "FILL_" + std::string(to_string(s)) + "_" + std::to_string(k);
            p.name = p.id;
            p.master = m->name;
            p.kind = CellKind::filler;
            p.side = s;
            p.origin = side_origin(s, t, m->width, m->height, 0, W, H);
            p.orient = side_orient(s);
            p.domain = filler_domain;
            db.instances.push_back(std::move(p));
            t += m->width;
        }

        // Inner row: each inner pad straddles the junction of its outer neighbours.
        std::optional<std::size_t> prev_outer;
        for (const IntentNode* n : nodes) {
            if (n->row == Row::outer) {
                prev_outer = prev_outer ? *prev_outer + 1 : 0;
                continue;
            }
            auto fail = [&](const std::string& why) { throw StaggerConflictError("inner pad " + n->name + ": " + why); };
            if (!prev_outer || *prev_outer + 1 >= outer.size()) fail("needs an outer pad on both sides");
            const Span& a = outer[*prev_outer];
            const Span& b = outer[*prev_outer + 1];
            if (!is_pad_kind(a.master->kind) || !is_pad_kind(b.master->kind))
                fail("outer neighbours " + a.node->name + " and " + b.node->name + " must both be pads");
            const CellMaster& m = *kb.cell(n->device_type);
            Length t0 = a.t1 - m.width / 2;
            t0 -= ((t0 % rules.grid) + rules.grid) % rules.grid;
            const Length t1 = t0 + m.width;
            const Length ov_a = std::min(a.t1, t1) - std::max(a.t0, t0);
            const Length ov_b = std::min(b.t1, t1) - std::max(b.t0, t0);
            if (ov_a < rules.stagger_min_overlap || ov_b < rules.stagger_min_overlap)
                fail("overlap with outer neighbours below " + std::to_string(rules.stagger_min_overlap) + " nm");
            place(*n, m, t0, rules.stagger_row_offset);
            Rect box = instance_bbox(db.instances.back(), kb);
            for (std::size_t k = 0; k < inner_boxes.size(); ++k)
                if (overlaps(box, inner_boxes[k])) fail("collides with inner pad " + inner_names[k]);
            inner_boxes.push_back(box);
            inner_names.push_back(n->name);
        }
    }
    sort_instances(db, kb);
    return db;
}

inline detail::json layout_json(const LayoutDB& db) {
    using json = detail::json;
    json insts = json::array();
    for (const auto& i : db.instances)
        insts.push_back({{"id", i.id},
                         {"name", i.name},
                         {"master", i.master},
                         {"kind", to_string(i.kind)},
                         {"side", to_string(i.side)},
                         {"x", i.origin.x},
                         {"y", i.origin.y},
                         {"orient", to_string(i.orient)},
                         {"row", to_string(i.row)},
                         {"domain", i.domain}});
    return {{"die_nm", {{"w", db.die_width}, {"h", db.die_height}}},
            {"ring_style", to_string(db.ring_style)},
            {"instances", insts}};
}

inline std::string serialize_layout(const LayoutDB& db) { return layout_json(db).dump(2) + "\n"; }

inline LayoutDB parse_layout(std::string_view text) {
    using namespace detail;
    json doc = parse_json(text);
    LayoutDB db;
    const json& die = require_object(doc, "die_nm", "");
    db.die_width = require_int(die, "w", "die_nm");
    db.die_height = require_int(die, "h", "die_nm");
    auto style = parse_ring_style(require_string(doc, "ring_style", ""));
    if (!style) throw SchemaError("ring_style", "expected single_row or staggered");
    db.ring_style = *style;
    const json& insts = require_array(doc, "instances", "");
    for (std::size_t k = 0; k < insts.size(); ++k) {
        std::string p = index_path("instances", k);
        const json& ij = insts[k];
        PlacedInstance i;
        i.id = require_string(ij, "id", p);
        i.name = require_string(ij, "name", p);
        i.master = require_string(ij, "master", p);
        auto kind = parse_cell_kind(require_string(ij, "kind", p));
        auto side = parse_side(require_string(ij, "side", p));
        auto orient = parse_orient(require_string(ij, "orient", p));
        auto row = parse_row(require_string(ij, "row", p));
        if (!kind) throw SchemaError(p + ".kind", "unknown cell kind");
        if (!side) throw SchemaError(p + ".side", "expected one of S,E,N,W");
        if (!orient) throw SchemaError(p + ".orient", "expected R0, R90, R180 or R270");
        if (!row) throw SchemaError(p + ".row", "expected outer or inner");
        i.kind = *kind;
        i.side = *side;
        i.orient = *orient;
        i.row = *row;
        i.origin = {require_int(ij, "x", p), require_int(ij, "y", p)};
        i.domain = require_string(ij, "domain", p);
        db.instances.push_back(std::move(i));
    }
    return db;
}

} // namespace ioring
