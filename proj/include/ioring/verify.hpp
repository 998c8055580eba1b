#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "geometry.hpp"
#include "json_util.hpp"
#include "knowledge_base.hpp"
#include "layout_resolver.hpp"
#include "netlist.hpp"

namespace ioring {

struct DrcViolation {
    std::string rule; // DRC.1 .. DRC.8
    std::string message;
    Rect location;
    std::vector<std::string> instances;
    friend bool operator==(const DrcViolation&, const DrcViolation&) = default;
};

struct DrcReport {
    bool passed = true;
    std::vector<DrcViolation> violations;

    bool has(std::string_view rule) const {
        return std::any_of(violations.begin(), violations.end(), [&](const auto& v) { return v.rule == rule; });
    }
    std::set<std::string> rules() const {
        std::set<std::string> out;
        for (const auto& v : violations) out.insert(v.rule);
        return out;
    }
    friend bool operator==(const DrcReport&, const DrcReport&) = default;
};

namespace detail {

struct DrcCell {
    const PlacedInstance* inst;
    const CellMaster* master;
    Rect box;
    Length t0, t1; // along own side
};

inline std::string ids_text(const std::vector<std::string>& ids) {
    std::string out;
    for (const auto& id : ids) out += (out.empty() ? "" : ", ") + id;
    return out;
}

/// Die-space rectangle covering along-interval [t0, t1) of side `s` at full ring depth.
inline Rect side_band(Side s, Length t0, Length t1, Length depth, Length die_w, Length die_h) {
    switch (s) {
    case Side::S: return {t0, 0, t1, depth};
    case Side::E: return {die_w - depth, t0, die_w, t1};
    case Side::N: return {die_w - t1, die_h - depth, die_w - t0, die_h};
    case Side::W: return {0, die_h - t1, depth, die_h - t0};
    }
    return {};
}

} // namespace detail

inline DrcReport run_drc(const LayoutDB& layout, const KnowledgeBase& kb) {
    using detail::DrcCell;
    DrcReport rep;
    const Length W = layout.die_width;
    const Length H = layout.die_height;
    const auto& rules = kb.rules;
    const Rect die = layout.die();
    auto add = [&](std::string rule, std::string msg, Rect loc, std::vector<std::string> ids) {
        rep.violations.push_back({std::move(rule), std::move(msg), loc, std::move(ids)});
    };

    std::vector<DrcCell> cells;
    for (const auto& i : layout.instances) {
        const CellMaster* m = kb.cell(i.master);
        if (!m) {
            add("DRC.2", "instance " + i.id + " uses unknown master " + i.master, {i.origin.x, i.origin.y, i.origin.x, i.origin.y}, {i.id});
            continue;
        }
        Rect box = transform_bbox(*m, i.origin, i.orient);
        auto [t0, t1] = along_interval(i.side, box, W, H);
        cells.push_back({&i, m, box, t0, t1});
    }
    Length ring_depth = 0;
    for (const auto& c : cells)
        if (c.master->kind == CellKind::corner) ring_depth = std::max(ring_depth, c.master->height);
    if (ring_depth == 0) ring_depth = kb.corner().height;

    // DRC.8 grid
    for (const auto& c : cells) {
        const Point& o = c.inst->origin;
        if (o.x % rules.grid != 0 || o.y % rules.grid != 0)
            add("DRC.8", c.inst->id + " origin (" + format_um(o.x) + ", " + format_um(o.y) + ") um is off the " +
                             std::to_string(rules.grid) + " nm grid", c.box, {c.inst->id});
    }

    // DRC.2 containment
    for (const auto& c : cells)
        if (!die.contains(c.box)) add("DRC.2", c.inst->id + " extends outside the die", c.box, {c.inst->id});

    // DRC.3 same-row overlap
    for (std::size_t a = 0; a < cells.size(); ++a)
        for (std::size_t b = a + 1; b < cells.size(); ++b) {
            if (cells[a].inst->row != cells[b].inst->row) continue;
            Rect x = intersection(cells[a].box, cells[b].box);
            if (!x.empty()) {
                std::vector<std::string> ids{cells[a].inst->id, cells[b].inst->id};
                std::sort(ids.begin(), ids.end());
                add("DRC.3", ids[0] + " overlaps " + ids[1], x, ids);
            }
        }

    // DRC.4 corners
    const std::array<Rect, 4> corner_slots{Rect{0, 0, ring_depth, ring_depth},
                                           Rect{W - ring_depth, 0, W, ring_depth},
                                           Rect{W - ring_depth, H - ring_depth, W, H},
                                           Rect{0, H - ring_depth, ring_depth, H}};
    static constexpr std::array<std::string_view, 4> kCornerLabels{"SW", "SE", "NE", "NW"};
    std::array<const DrcCell*, 4> corner_at{};
    for (const auto& c : cells) {
        if (c.master->kind != CellKind::corner) continue;
        std::optional<std::size_t> slot;
        for (std::size_t k = 0; k < 4; ++k)
            if (c.box == corner_slots[k]) slot = k;
        if (!slot) {
            add("DRC.4", "corner " + c.inst->id + " is not at a die corner", c.box, {c.inst->id});
        } else if (corner_at[*slot]) {
            add("DRC.4", "two corners at the same die corner", c.box, {corner_at[*slot]->inst->id, c.inst->id});
        } else {
            corner_at[*slot] = &c;
            Orient want = side_orient(kRingSides[*slot]);
            if (c.inst->orient != want)
                add("DRC.4", "corner " + c.inst->id + " has orientation " + std::string(to_string(c.inst->orient)) +
                                 ", expected " + std::string(to_string(want)), c.box, {c.inst->id});
        }
    }
    for (std::size_t k = 0; k < 4; ++k)
        if (!corner_at[k]) add("DRC.4", "no corner cell at the " + std::string(kCornerLabels[k]) + " die corner", corner_slots[k], {});

    // Per-side outer sequences, each closed by the next side's corner.
    std::array<std::vector<const DrcCell*>, 4> outer;
    for (const auto& c : cells)
        if (c.inst->row == Row::outer) outer[static_cast<std::size_t>(side_rank(c.inst->side))].push_back(&c);
    for (auto& seq : outer)
        std::stable_sort(seq.begin(), seq.end(), [](const DrcCell* a, const DrcCell* b) { return a->t0 < b->t0; });

    for (Side s : kRingSides) {
        const Length L = side_length(s, W, H);
        std::vector<std::pair<Length, Length>> spans;
        std::vector<std::string> ids;
        for (const DrcCell* c : outer[static_cast<std::size_t>(side_rank(s))]) {
            spans.push_back({c->t0, c->t1});
            ids.push_back(c->inst->id);
        }
        if (const DrcCell* end = corner_at[static_cast<std::size_t>(side_rank(next_side(s)))]) {
            auto [t0, t1] = along_interval(s, end->box, W, H);
            spans.push_back({t0, t1});
            ids.push_back(end->inst->id);
        }

        // DRC.1 abutment
        for (std::size_t k = 0; k + 1 < spans.size(); ++k) {
            Length gap = spans[k + 1].first - spans[k].second;
            if (gap > rules.abut_tol)
                add("DRC.1", ids[k] + " and " + ids[k + 1] + " are " + std::to_string(gap) + " nm apart",
                    detail::side_band(s, spans[k].second, spans[k + 1].first, ring_depth, W, H), {ids[k], ids[k + 1]});
        }

        // DRC.5 closure
        std::sort(spans.begin(), spans.end());
        Length covered = 0;
        auto hole = [&](Length a, Length b) {
            add("DRC.5", "side " + std::string(to_string(s)) + " is uncovered from " + std::to_string(a) + " to " +
                             std::to_string(b) + " nm", detail::side_band(s, a, b, ring_depth, W, H), {});
        };
        for (const auto& [a, b] : spans) {
            if (a > covered + rules.abut_tol) hole(covered, std::min(a, L));
            covered = std::max(covered, b);
            if (covered >= L) break;
        }
        if (covered < L - rules.abut_tol) hole(covered, L);
    }

    // DRC.6 domain isolation around the cyclic outer sequence.
    auto is_breaker = [](const DrcCell* c) { return c->master->kind == CellKind::breaker; };
    std::vector<const DrcCell*> ring;
    for (const auto& seq : outer) ring.insert(ring.end(), seq.begin(), seq.end());
    for (std::size_t k = 0; ring.size() > 1 && k < ring.size(); ++k) {
        const DrcCell* a = ring[k];
        const DrcCell* b = ring[(k + 1) % ring.size()];
        if (a->inst->domain != b->inst->domain && !is_breaker(a) && !is_breaker(b))
            add("DRC.6", a->inst->id + " (" + a->inst->domain + ") meets " + b->inst->id + " (" + b->inst->domain +
                             ") without a breaker", b->box, {a->inst->id, b->inst->id});
    }
    for (const auto& c : cells) {
        if (c.inst->row != Row::inner) continue;
        for (const DrcCell* o : outer[static_cast<std::size_t>(side_rank(c.inst->side))]) {
            if (std::min(c.t1, o->t1) - std::max(c.t0, o->t0) <= 0) continue;
            if (o->inst->domain != c.inst->domain && !is_breaker(o))
                add("DRC.6", "inner " + c.inst->id + " (" + c.inst->domain + ") overlaps " + o->inst->id + " (" +
                                 o->inst->domain + ") without a breaker", c.box, {c.inst->id, o->inst->id});
        }
    }

    // DRC.7 stagger
    for (const auto& c : cells) {
        if (c.inst->row != Row::inner) continue;
        if (layout.ring_style == RingStyle::single_row) {
            add("DRC.7", "inner-row cell " + c.inst->id + " in a single-row ring", c.box, {c.inst->id});
            continue;
        }
        Length depth = depth_of(c.inst->side, c.box, W, H);
        if (depth != rules.stagger_row_offset)
            add("DRC.7", "inner cell " + c.inst->id + " sits " + std::to_string(depth) + " nm from the die edge, expected " +
                             std::to_string(rules.stagger_row_offset), c.box, {c.inst->id});
        int anchored = 0;
        for (const DrcCell* o : outer[static_cast<std::size_t>(side_rank(c.inst->side))])
            if (is_pad_kind(o->master->kind) && std::min(c.t1, o->t1) - std::max(c.t0, o->t0) >= rules.stagger_min_overlap)
                ++anchored;
        if (anchored < 2)
            add("DRC.7", "inner cell " + c.inst->id + " overlaps " + std::to_string(anchored) + " outer pads by at least " +
                             std::to_string(rules.stagger_min_overlap) + " nm, 2 required", c.box, {c.inst->id});
    }

    std::sort(rep.violations.begin(), rep.violations.end(), [](const DrcViolation& a, const DrcViolation& b) {
        return std::tie(a.rule, a.location, a.instances, a.message) < std::tie(b.rule, b.location, b.instances, b.message);
    });
    rep.passed = rep.violations.empty();
    return rep;
}

enum class LvsDiffKind { missing_instance, extra_instance, open, short_circuit, pin_mismatch };

inline std::string_view to_string(LvsDiffKind k) {
    switch (k) {
    case LvsDiffKind::missing_instance: return "missing_instance";
    case LvsDiffKind::extra_instance: return "extra_instance";
    case LvsDiffKind::open: return "open";
    case LvsDiffKind::short_circuit: return "short";
    case LvsDiffKind::pin_mismatch: return "pin_mismatch";
    }
    return "?";
}

struct LvsDiff {
    LvsDiffKind kind;
    std::string detail;
    friend bool operator==(const LvsDiff&, const LvsDiff&) = default;
    friend auto operator<=>(const LvsDiff&, const LvsDiff&) = default;
};

struct LvsReport {
    bool clean = true;
    std::vector<LvsDiff> diffs;

    std::size_t count(LvsDiffKind k) const {
        return static_cast<std::size_t>(std::count_if(diffs.begin(), diffs.end(), [&](const LvsDiff& d) { return d.kind == k; }));
    }
    bool has(LvsDiffKind k) const { return count(k) > 0; }
    friend bool operator==(const LvsReport&, const LvsReport&) = default;
};

/// Compares instance sets by (name, master) and net partitions over the pins
/// of instances present on both sides. Net names only label diagnostics.
inline LvsReport run_lvs(const Netlist& schematic, const Netlist& extracted) {
    LvsReport rep;
    std::set<std::string> matched;
    for (const auto& [name, master] : schematic.instances) {
        auto it = extracted.instances.find(name);
        if (it != extracted.instances.end() && it->second == master) matched.insert(name);
        else rep.diffs.push_back({LvsDiffKind::missing_instance, name + " (" + master + ")"});
    }
    for (const auto& [name, master] : extracted.instances)
        if (!matched.count(name)) rep.diffs.push_back({LvsDiffKind::extra_instance, name + " (" + master + ")"});

    auto pin_map = [&](const Netlist& nl) {
        std::map<PinRef, std::string> out;
        for (const auto& [net, pins] : nl.nets)
            for (const auto& p : pins)
                if (matched.count(p.inst)) out.emplace(p, net);
        return out;
    };
    const auto sch = pin_map(schematic);
    const auto ext = pin_map(extracted);

    std::map<std::string, std::set<std::string>> sch_to_ext;
    std::map<std::string, std::set<std::string>> ext_to_sch;
    for (const auto& [pin, snet] : sch) {
        auto it = ext.find(pin);
        if (it == ext.end()) {
            rep.diffs.push_back({LvsDiffKind::pin_mismatch, to_string(pin) + " is on schematic net " + snet + " only"});
            continue;
        }
        sch_to_ext[snet].insert(it->second);
        ext_to_sch[it->second].insert(snet);
    }
    for (const auto& [pin, enet] : ext)
        if (!sch.count(pin))
            rep.diffs.push_back({LvsDiffKind::pin_mismatch, to_string(pin) + " is on extracted net " + enet + " only"});

    auto join = [](const std::set<std::string>& s) {
        std::string out;
        for (const auto& x : s) out += (out.empty() ? "" : ", ") + x;
        return out;
    };
    for (const auto& [snet, enets] : sch_to_ext)
        if (enets.size() > 1) rep.diffs.push_back({LvsDiffKind::open, "net " + snet + " split across " + join(enets)});
    for (const auto& [enet, snets] : ext_to_sch)
        if (snets.size() > 1) rep.diffs.push_back({LvsDiffKind::short_circuit, "net " + enet + " merges " + join(snets)});

    std::sort(rep.diffs.begin(), rep.diffs.end());
    rep.clean = rep.diffs.empty();
    return rep;
}

inline detail::json drc_report_json(const DrcReport& r, const std::string& case_id = {}) {
    using json = detail::json;
    json vs = json::array();
    for (const auto& v : r.violations)
        vs.push_back({{"rule", v.rule},
                      {"message", v.message},
                      {"rect", {v.location.x0, v.location.y0, v.location.x1, v.location.y1}},
                      {"instances", v.instances}});
    return {{"tool", "drc"}, {"passed", r.passed}, {"violations", vs}, {"case_id", case_id}};
}

inline detail::json lvs_report_json(const LvsReport& r, const std::string& case_id = {}) {
    using json = detail::json;
    json ds = json::array();
    for (const auto& d : r.diffs) ds.push_back({{"kind", to_string(d.kind)}, {"detail", d.detail}});
    return {{"tool", "lvs"}, {"status", r.clean ? "clean" : "mismatch"}, {"diffs", ds}, {"case_id", case_id}};
}

} // namespace ioring
