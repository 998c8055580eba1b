// Geometry resolution and the filler solver.
#include <gtest/gtest.h>

#include <chrono>
#include <functional>
#include <numeric>
#include <random>

#include "support.hpp"

using namespace ioring;
using namespace ioring::testing;
using json = nlohmann::json;

namespace {

KnowledgeBase kb_with(const std::function<void(json&)>& mutate) {
    json doc = json::parse(kDefaultKnowledgeBase);
    mutate(doc);
    return load_knowledge_base(doc.dump());
}

std::vector<const PlacedInstance*> on_side(const LayoutDB& db, Side s, Row row) {
    std::vector<const PlacedInstance*> out;
    for (const auto& i : db.instances)
        if (i.side == s && i.row == row) out.push_back(&i);
    return out;
}

} // namespace

// ---- filler solver ------------------------------------------------------------

TEST(FillerSolver, Examples) {
    EXPECT_TRUE(solve_fillers(0, {500, 1000}).pieces.empty());
    FillerPlan p = solve_fillers(17500, {10000, 5000, 2000, 1000, 500});
    EXPECT_EQ(p.pieces, (std::vector<Length>{10000, 5000, 2000, 500}));
    EXPECT_EQ(filler_oracle(17500, {10000, 5000, 2000, 1000, 500}).count, 4u);
    try {
        solve_fillers(300, {500, 1000});
        FAIL();
    } catch (const UnfillableGapError& e) {
        EXPECT_EQ(e.gap(), 300);
    }
    EXPECT_FALSE(filler_oracle(300, {500, 1000}).feasible);
}

TEST(FillerSolver, ExactCoverWhenGreedyIsNotMinimal) {
    // Greedy takes 4000 + 4x500; two 3000 pieces do it in two.
    EXPECT_EQ(solve_fillers(6000, {4000, 3000, 500}).pieces, (std::vector<Length>{3000, 3000}));
    // Greedy dead-ends (5000 leaves 1000); exact cover finds 3000+3000.
    EXPECT_EQ(solve_fillers(6000, {5000, 3000}).pieces, (std::vector<Length>{3000, 3000}));
    EXPECT_THROW(solve_fillers(7000, {5000, 3000}), UnfillableGapError);
}

TEST(FillerSolver, DefaultSetMatchesOracleOnFullSweep) {
    auto widths = default_filler_widths();
    int agree = 0, total = 0;
    for (Length gap = 0; gap <= 100000; gap += 500) {
        ++total;
        FillerOracle want = filler_oracle(gap, widths);
        ASSERT_TRUE(want.feasible);
        FillerPlan got = solve_fillers(gap, widths);
        Length sum = std::accumulate(got.pieces.begin(), got.pieces.end(), Length{0});
        EXPECT_EQ(sum, gap);
        EXPECT_EQ(got.pieces.size(), want.count) << gap;
        EXPECT_EQ(got.pieces, want.pieces) << gap;
        agree += got.pieces.size() == want.count;
    }
    EXPECT_EQ(total, 201);
    EXPECT_EQ(agree, 201);
}

TEST(FillerSolver, RandomWidthSetsMatchOracle) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        std::set<Length> set;
        int k = 1 + static_cast<int>(rng() % 4);
        while (static_cast<int>(set.size()) < k) set.insert(500 * static_cast<Length>(1 + rng() % 12));
        std::vector<Length> widths(set.begin(), set.end());
        Length gap = 500 * static_cast<Length>(rng() % 60);
        FillerOracle want = filler_oracle(gap, widths);
        if (!want.feasible) {
            EXPECT_THROW(solve_fillers(gap, widths), UnfillableGapError);
            continue;
        }
        EXPECT_EQ(solve_fillers(gap, widths).pieces, want.pieces) << "gap " << gap;
    }
}

// ---- resolve_geometry -----------------------------------------------------

TEST(Resolver, CaseStudyArithmetic) {
    IntentGraph g = structure_intent(load_plan("demo.csv"), default_kb());
    LayoutDB db = resolve_geometry(g, default_kb());
    const Length corner = default_kb().corner().width;
    const Length pad = default_kb().cell("PDIO_D")->width;
    const Length occupied = 2 * corner + 12 * pad;
    EXPECT_EQ(occupied, 960000);
    for (Side s : kRingSides) {
        Length fill = 0;
        for (const auto* i : on_side(db, s, Row::outer))
            if (i->kind == CellKind::filler) fill += default_kb().cell(i->master)->width;
        EXPECT_EQ(fill, 1000000 - occupied) << to_string(s);
    }
    const PlacedInstance& p = first_pad(db, Side::S);
    EXPECT_EQ(p.name, "DVDD_0");
    EXPECT_EQ(p.origin, (Point{120000, 0}));
    EXPECT_EQ(p.orient, Orient::R0);
}

TEST(Resolver, CornerSlotsAndOrientations) {
    IntentGraph g = structure_intent(load_plan("mixed.csv"), default_kb());
    LayoutDB db = resolve_geometry(g, default_kb());
    const std::map<std::string, std::pair<Point, Orient>> want{
        {"CORNER_SW", {{0, 0}, Orient::R0}},
        {"CORNER_SE", {{880000, 0}, Orient::R90}},
        {"CORNER_NE", {{880000, 880000}, Orient::R180}},
        {"CORNER_NW", {{0, 880000}, Orient::R270}}};
    for (const auto& i : db.instances) {
        if (i.kind != CellKind::corner) continue;
        EXPECT_EQ(i.origin, want.at(i.name).first) << i.name;
        EXPECT_EQ(i.orient, want.at(i.name).second) << i.name;
    }
    for (const auto& i : db.instances) EXPECT_EQ(i.orient, side_orient(i.side)) << i.id;
}

TEST(Resolver, OverflowReportsExcess) {
    KnowledgeBase kb = kb_with([](json& d) { d["cells"]["PDIO_D"]["width_nm"] = 80000; });
    std::vector<std::string> south;
    for (int k = 0; k < 13; ++k) south.push_back("D" + std::to_string(k));
    IntentGraph g = structure_intent(make_plan(1000000, south, {"DVDD", "DVSS"}), kb);
    try {
        resolve_geometry(g, kb);
        FAIL();
    } catch (const RingOverflowError& e) {
        EXPECT_EQ(e.side(), "S");
        EXPECT_EQ(e.excess(), 2 * 120000 + 13 * 80000 - 1000000);
        EXPECT_EQ(e.excess(), 280000);
    }
}

TEST(Resolver, UnfillableGapNamesSide) {
    KnowledgeBase kb = kb_with([](json& d) { d["cells"].erase("FILLER05"); });
    auto spec = make_plan(1000000, {"DVDD", "DVSS"});
    spec.die_width = 1000500;
    IntentGraph g = structure_intent(spec, kb);
    try {
        resolve_geometry(g, kb);
        FAIL();
    } catch (const UnfillableGapError& e) {
        EXPECT_NE(std::string(e.what()).find("side S"), std::string::npos) << e.what();
    }
}

TEST(Resolver, StaggeredInnerPadsOverlapBothNeighbours) {
    int checked = 0;
    for (const auto& c : bench42()) {
        if (c.spec.ring_style != RingStyle::staggered) continue;
        IntentGraph g = structure_intent(c.spec, default_kb());
        LayoutDB db = resolve_geometry(g, default_kb());
        for (Side s : kRingSides) {
            auto outer = on_side(db, s, Row::outer);
            for (const auto* in : on_side(db, s, Row::inner)) {
                auto [t0, t1] = along_interval(s, instance_bbox(*in, default_kb()), db.die_width, db.die_height);
                EXPECT_EQ(depth_of(s, instance_bbox(*in, default_kb()), db.die_width, db.die_height),
                          default_kb().rules.stagger_row_offset);
                int anchored = 0;
                for (const auto* o : outer) {
                    if (!is_pad_kind(o->kind)) continue;
                    auto [o0, o1] = along_interval(s, instance_bbox(*o, default_kb()), db.die_width, db.die_height);
                    Length ov = std::min(t1, o1) - std::max(t0, o0);
                    if (ov > 0) {
                        EXPECT_GE(ov, default_kb().rules.stagger_min_overlap) << in->name << " vs " << o->name;
                        ++anchored;
                    }
                }
                EXPECT_EQ(anchored, 2) << in->name;
                ++checked;
            }
        }
        EXPECT_TRUE(run_drc(db, default_kb()).passed) << c.case_id;
    }
    EXPECT_GT(checked, 0);
}

TEST(Resolver, StaggerConflicts) {
    auto spec = make_plan(1000000, {"D0", "DVDD", "DVSS", "D1"});
    spec.ring_style = RingStyle::staggered;
    spec.side(Side::S)[0].overrides.row = Row::inner;
    IntentGraph g = structure_intent(spec, default_kb());
    EXPECT_THROW(resolve_geometry(g, default_kb()), StaggerConflictError);

    // Inner pad between a pad and a breaker.
    auto mixed = make_plan(1000000, {"DVDD", "DVSS", "D0", "DX", "AVDD", "AVSS"});
    mixed.ring_style = RingStyle::staggered;
    mixed.side(Side::S)[3].overrides.row = Row::inner;
    mixed.side(Side::S)[3].overrides.domain = "AVDD";
    mixed.side(Side::S)[3].overrides.device_type = "APIO";
    IntentGraph h = structure_intent(mixed, default_kb());
    EXPECT_THROW(resolve_geometry(h, default_kb()), StaggerConflictError);

    // Overlap rule tighter than half a pad cannot be met at a junction.
    KnowledgeBase strict = kb_with([](json& d) { d["rules"]["stagger_min_overlap"] = 40000; });
    auto ok = make_plan(1000000, {"DVDD", "D0", "DVSS"});
    ok.ring_style = RingStyle::staggered;
    ok.side(Side::S)[1].overrides.row = Row::inner;
    EXPECT_NO_THROW(resolve_geometry(structure_intent(ok, default_kb()), default_kb()));
    EXPECT_THROW(resolve_geometry(structure_intent(ok, strict), strict), StaggerConflictError);

    // Two inner pads at the same junction collide.
    auto twice = make_plan(1000000, {"DVDD", "D0", "D1", "DVSS"});
    twice.ring_style = RingStyle::staggered;
    twice.side(Side::S)[1].overrides.row = Row::inner;
    twice.side(Side::S)[2].overrides.row = Row::inner;
    EXPECT_THROW(resolve_geometry(structure_intent(twice, default_kb()), default_kb()), StaggerConflictError);
}

TEST(Resolver, RejectsStructurallyInvalidGraph) {
    IntentGraph g = without_node(structure_intent(load_plan("demo.csv"), default_kb()), "CORNER_SW");
    try {
        resolve_geometry(g, default_kb());
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.code(), "MISSING_CORNER");
    }
}

TEST(Resolver, SuiteInvariants) {
    for (const auto& c : bench42()) {
        SCOPED_TRACE(c.case_id);
        IntentGraph g = structure_intent(c.spec, default_kb());
        LayoutDB db = resolve_geometry(g, default_kb());
        const auto& kb = default_kb();
        std::set<std::string> ids;
        for (const auto& i : db.instances) {
            EXPECT_TRUE(ids.insert(i.id).second) << i.id;
            Rect r = instance_bbox(i, kb);
            EXPECT_TRUE(db.die().contains(r)) << i.id;
            EXPECT_EQ(i.origin.x % kb.rules.grid, 0);
            EXPECT_EQ(i.origin.y % kb.rules.grid, 0);
        }
        for (Side s : kRingSides) {
            // Perimeter closure: own corner + pads + breakers + fillers + next corner.
            Length sum = 0;
            for (const auto* i : on_side(db, s, Row::outer)) sum += kb.cell(i->master)->width;
            sum += kb.corner().width;
            EXPECT_EQ(sum, side_length(s, db.die_width, db.die_height)) << to_string(s);

            for (Row row : {Row::outer, Row::inner}) {
                auto cells = on_side(db, s, row);
                for (std::size_t a = 0; a < cells.size(); ++a)
                    for (std::size_t b = a + 1; b < cells.size(); ++b)
                        EXPECT_FALSE(overlaps(instance_bbox(*cells[a], kb), instance_bbox(*cells[b], kb)))
                            << cells[a]->id << " " << cells[b]->id;
                Length prev = -1;
                for (const auto* i : cells) {
                    Length t0 = along_interval(s, instance_bbox(*i, kb), db.die_width, db.die_height).first;
                    EXPECT_GT(t0, prev) << i->id;
                    prev = t0;
                }
            }
            // Order preservation: pads along the side follow graph index order.
            std::vector<std::string> placed, listed;
            for (const auto* i : on_side(db, s, Row::outer))
                if (is_pad_kind(i->kind)) placed.push_back(i->name);
            for (const auto& n : g.nodes)
                if (n.side == s && n.row == Row::outer && is_pad_kind(kb.cell(n.device_type)->kind)) listed.push_back(n.name);
            EXPECT_EQ(placed, listed);
        }
        EXPECT_TRUE(run_drc(db, kb).passed);
    }
}

TEST(Resolver, LayoutJsonRoundTrip) {
    LayoutDB db = resolve_geometry(structure_intent(bench_case("hard-01").spec, default_kb()), default_kb());
    std::string text = serialize_layout(db);
    EXPECT_EQ(parse_layout(text), db);
    json doc = json::parse(text);
    doc["instances"][0].erase("orient");
    try {
        parse_layout(doc.dump());
        FAIL();
    } catch (const SchemaError& e) {
        EXPECT_EQ(e.path(), "instances[0].orient");
    }
}
