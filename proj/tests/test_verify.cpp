#include <gtest/gtest.h>

#include <random>

#include "mutations.hpp"

using namespace ioring;
using namespace ioring::testing;

namespace {

std::size_t rail_net_count(const Netlist& nl, const KnowledgeBase& kb = default_kb()) {
    std::size_t n = 0;
    for (const auto& [name, pins] : nl.nets) {
        bool rail = false;
        for (const auto& p : pins) {
            const CellMaster* m = kb.cell(nl.instances.at(p.inst));
            const CellPin* pin = m ? m->pin(p.pin) : nullptr;
            rail = rail || (pin && is_rail_role(pin->role));
        }
        n += rail ? 1 : 0;
    }
    return n;
}

IntentGraph strip_breakers(IntentGraph g) {
    std::erase_if(g.nodes, [](const IntentNode& n) { return default_kb().cell(n.device_type)->kind == CellKind::breaker; });
    renumber_positions(g);
    return g;
}

void shift_inward(PlacedInstance& i, Length d) {
    switch (i.side) {
    case Side::S: i.origin.y += d; break;
    case Side::E: i.origin.x -= d; break;
    case Side::N: i.origin.y -= d; break;
    case Side::W: i.origin.x += d; break;
    }
}

const BenchCase& staggered_case() {
    for (const auto& c : bench42())
        if (c.spec.ring_style == RingStyle::staggered) return c;
    throw std::runtime_error("no staggered case");
}

} // namespace

// ---- netlist ----------------------------------------------------------------

TEST(Netlist, SignalAndRailPinsOfAnalogPad) {
    auto g = structure_intent(load_plan("mixed.csv"), default_kb());
    Netlist nl = generate_netlist(g, default_kb());
    ASSERT_EQ(nl.instances.at("VCM"), "APIO");
    EXPECT_EQ(*nl.net_of({"VCM", "PAD"}), "VCM");
    EXPECT_EQ(*nl.net_of({"VCM", "C"}), "VCM_C");
    EXPECT_EQ(*nl.net_of({"VCM", "VDD"}), "AVDD");
    EXPECT_EQ(*nl.net_of({"VCM", "VSS"}), "AVSS");
}

TEST(Netlist, TwoDomainRailsAreDisjoint) {
    Pipeline p = run_spec(load_plan("mixed.csv"));
    for (const char* net : {"DVDD", "DVSS", "AVDD", "AVSS"}) ASSERT_TRUE(p.extracted.nets.count(net)) << net;
    std::set<PinRef> seen;
    for (const char* net : {"DVDD", "DVSS", "AVDD", "AVSS"})
        for (const auto& pin : p.extracted.nets.at(net)) EXPECT_TRUE(seen.insert(pin).second) << to_string(pin);
    EXPECT_EQ(rail_net_count(p.extracted), 4u);
    EXPECT_TRUE(p.lvs.clean);
}

TEST(Netlist, CornersAndBreakersCarryNoPins) {
    Pipeline p = run_spec(load_plan("mixed.csv"));
    for (const auto& [net, pins] : p.schematic.nets)
        for (const auto& pin : pins) {
            auto kind = default_kb().cell(p.schematic.instances.at(pin.inst))->kind;
            EXPECT_NE(kind, CellKind::corner) << net;
            EXPECT_NE(kind, CellKind::breaker) << net;
        }
    EXPECT_TRUE(p.schematic.instances.count("CORNER_SW"));
}

TEST(Netlist, ExtractionEqualsGenerationOverBench) {
    for (const auto& c : bench42()) {
        Pipeline p = run_spec(c.spec);
        EXPECT_TRUE(p.lvs.clean) << c.case_id;
        EXPECT_EQ(p.schematic.instances, p.extracted.instances) << c.case_id;
    }
}

TEST(Netlist, UnseededRailsFloatWithWarnings) {
    KnowledgeBase kb = default_kb();
    kb.rules.esd_supply_per_domain = false;
    auto spec = make_plan(1000000, {"D0", "D1"}, {"D2"}, {"D3"}, {"D4"});
    auto g = structure_intent(spec, kb);
    auto layout = resolve_geometry(g, kb);
    std::vector<std::string> warnings;
    Netlist nl = extract_netlist(layout, g, kb, &warnings);
    EXPECT_TRUE(nl.nets.count("FLOAT_0"));
    EXPECT_TRUE(nl.nets.count("FLOAT_1"));
    EXPECT_FALSE(nl.nets.count("DVDD"));
    ASSERT_EQ(warnings.size(), 2u);
    EXPECT_NE(warnings[0].find("FLOAT_0"), std::string::npos);
}

TEST(Netlist, BreakersSplitRails) {
    auto g = structure_intent(load_plan("mixed.csv"), default_kb());
    auto cut = extract_netlist(resolve_geometry(g, default_kb()), g, default_kb());
    auto joined_graph = strip_breakers(g);
    std::vector<std::string> warnings;
    auto joined = extract_netlist(resolve_geometry(joined_graph, default_kb()), joined_graph, default_kb(), &warnings);
    EXPECT_EQ(rail_net_count(cut), 4u);
    EXPECT_EQ(rail_net_count(joined), 2u);
    EXPECT_FALSE(warnings.empty()); // the merged segment joins two supplies
}

TEST(Netlist, ExtractionIgnoresInstanceOrder) {
    const BenchCase& c = mutation_case();
    Pipeline p = run_spec(c.spec);
    std::mt19937 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        LayoutDB shuffled = p.layout;
        std::shuffle(shuffled.instances.begin(), shuffled.instances.end(), rng);
        EXPECT_EQ(extract_netlist(shuffled, p.graph, default_kb()), p.extracted);
        EXPECT_EQ(run_drc(shuffled, default_kb()), p.drc);
    }
}

TEST(Netlist, TextRoundTrip) {
    Pipeline p = run_spec(load_plan("mixed.csv"));
    EXPECT_EQ(parse_netlist_text(emit_netlist_text(p.schematic)), p.schematic);
    EXPECT_EQ(parse_netlist_text("# c\n\nINST A PAD\nNET N1 A.PAD\n").nets.at("N1").count({"A", "PAD"}), 1u);
}

TEST(Netlist, TextErrorsCarryLine) {
    auto line_of = [](const std::string& text) {
        try {
            parse_netlist_text(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return -1;
    };
    EXPECT_EQ(line_of("INST A PAD\nINST B\n"), 2);
    EXPECT_EQ(line_of("NET N1 A.PAD B\n"), 1);
    EXPECT_EQ(line_of("INST A PAD\n\nWIRE x\n"), 3);
}

// ---- DRC / LVS --------------------------------------------------------------

TEST(Verify, MutationSuiteDetectsEveryFault) {
    auto outcomes = run_mutation_suite();
    ASSERT_EQ(outcomes.size(), 11u);
    for (const auto& o : outcomes) EXPECT_TRUE(o.detected) << o.name << ": " << o.observed;
}

TEST(Verify, InnerPadOffRowRaisesStagger) {
    const BenchCase& c = staggered_case();
    Pipeline p = run_spec(c.spec);
    ASSERT_TRUE(p.drc.passed);
    auto it = std::find_if(p.layout.instances.begin(), p.layout.instances.end(),
                           [](const PlacedInstance& i) { return i.row == Row::inner; });
    ASSERT_NE(it, p.layout.instances.end());
    shift_inward(*it, 500);
    reverify(p);
    EXPECT_EQ(p.drc.rules(), std::set<std::string>{"DRC.7"});
}

TEST(Verify, InnerPadInSingleRowRingRaisesStagger) {
    Pipeline p = run_spec(staggered_case().spec);
    p.layout.ring_style = RingStyle::single_row;
    reverify(p);
    EXPECT_TRUE(p.drc.has("DRC.7"));
    for (const auto& v : p.drc.violations)
        if (v.rule == "DRC.7") {
            EXPECT_NE(v.message.find("single-row"), std::string::npos);
        }
}

TEST(Verify, OpenAndShortAreMirrorImages) {
    Pipeline p = run_spec(load_plan("mixed.csv"));
    Netlist merged = p.extracted;
    auto pins = merged.nets.at("DVSS");
    merged.nets.erase("DVSS");
    merged.nets["AVSS"].insert(pins.begin(), pins.end());
    LvsReport forward = run_lvs(p.schematic, merged);
    LvsReport backward = run_lvs(merged, p.schematic);
    EXPECT_EQ(forward.count(LvsDiffKind::short_circuit), 1u);
    EXPECT_EQ(forward.count(LvsDiffKind::open), 0u);
    EXPECT_EQ(backward.count(LvsDiffKind::open), 1u);
    EXPECT_EQ(backward.count(LvsDiffKind::short_circuit), 0u);
}

TEST(Verify, PinPresentOnOneSideOnly) {
    Netlist a;
    a.instances = {{"X", "PDIO_D"}};
    a.nets["N"] = {{"X", "PAD"}};
    Netlist b = a;
    b.nets["N"].insert({"X", "C"});
    auto rep = run_lvs(a, b);
    EXPECT_EQ(rep.count(LvsDiffKind::pin_mismatch), 1u);
    b.instances["X"] = "APIO";
    rep = run_lvs(a, b);
    EXPECT_EQ(rep.count(LvsDiffKind::missing_instance), 1u);
    EXPECT_EQ(rep.count(LvsDiffKind::extra_instance), 1u);
}

TEST(Verify, CombinedFaultsKeepEachSignal) {
    const BenchCase& c = mutation_case();
    const Pipeline base = run_spec(c.spec);
    auto with = [&](auto edit) {
        Pipeline p = base;
        edit(p);
        reverify(p);
        return p.drc.rules();
    };
    auto off_die = [](Pipeline& p) { first_pad(p.layout, Side::S).origin.y -= 1000; };
    auto off_grid = [](Pipeline& p) { first_pad(p.layout, Side::N).origin.x += 1; };
    auto a = with(off_die);
    auto b = with(off_grid);
    auto both = with([&](Pipeline& p) {
        off_die(p);
        off_grid(p);
    });
    for (const auto& r : a) EXPECT_TRUE(both.count(r)) << r;
    for (const auto& r : b) EXPECT_TRUE(both.count(r)) << r;
}

TEST(Verify, ReportsAreDeterministicAndShaped) {
    const BenchCase& c = mutation_case();
    Pipeline p = run_spec(c.spec);
    p.layout.instances.erase(p.layout.instances.begin()); // drop the SW corner
    reverify(p);
    auto again = p;
    reverify(again);
    EXPECT_EQ(drc_report_json(p.drc, c.case_id).dump(), drc_report_json(again.drc, c.case_id).dump());
    auto drc = drc_report_json(p.drc, c.case_id);
    EXPECT_EQ(drc["tool"], "drc");
    EXPECT_EQ(drc["passed"], false);
    ASSERT_FALSE(drc["violations"].empty());
    EXPECT_EQ(drc["violations"][0]["rect"].size(), 4u);
    EXPECT_TRUE(std::is_sorted(p.drc.violations.begin(), p.drc.violations.end(), [](const auto& x, const auto& y) {
        return std::tie(x.rule, x.location, x.instances, x.message) < std::tie(y.rule, y.location, y.instances, y.message);
    }));
    auto lvs = lvs_report_json(p.lvs, c.case_id);
    EXPECT_EQ(lvs["status"], "mismatch");
    EXPECT_EQ(lvs["diffs"][0]["kind"], "missing_instance");
    EXPECT_TRUE(std::is_sorted(p.lvs.diffs.begin(), p.lvs.diffs.end()));
}
