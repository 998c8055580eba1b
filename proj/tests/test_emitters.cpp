#include <gtest/gtest.h>

#include <cstdlib>
#include <regex>

#include "support.hpp"

using namespace ioring;
using namespace ioring::testing;

namespace {

// Golden snapshots; IORING_UPDATE_GOLDEN=1 rewrites them instead of comparing.
void expect_golden(const std::string& name, const std::string& actual) {
    const auto path = golden_path(name);
    if (std::getenv("IORING_UPDATE_GOLDEN")) {
        write_file_atomic(path, actual);
        return;
    }
    ASSERT_TRUE(std::filesystem::exists(path)) << path << " missing; rerun with IORING_UPDATE_GOLDEN=1";
    EXPECT_EQ(read_file(path), actual) << name;
}

PadPlanSpec minimal_plan() { return make_plan(1000000, {"DVDD_0"}, {"D0"}, {"D1"}, {"DVSS_0"}); }

std::size_t count_lines(const std::string& text, const std::string& prefix) {
    std::size_t n = 0;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) n += line.starts_with(prefix) ? 1 : 0;
    return n;
}

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
    return n;
}

} // namespace

TEST(Emitters, MinimalRingScript) {
    Pipeline p = run_spec(minimal_plan());
    std::string script = emit_script(p.layout, p.schematic, p.graph);
    EXPECT_EQ(count_lines(script, "ioInst "), 8u);
    // Each side: 1000000 - 2 * 120000 corner - 60000 pad = 700000, i.e. 35 FILLER20.
    EXPECT_EQ(count_lines(script, "ioFill \"FILLER20\""), 140u);
    EXPECT_EQ(count_lines(script, "ioFill "), 140u);
    EXPECT_NE(script.find("ioDie 1000.000 1000.000\n"), std::string::npos);
    EXPECT_NE(script.find("ioInst \"DVDD_0\" \"PVDD_D\" 120.000 0.000 R0 outer\n"), std::string::npos);
    EXPECT_NE(script.find("ioInst \"CORNER_SW\" \"PCORNER\" 0.000 0.000 R0 outer\n"), std::string::npos);
    EXPECT_EQ(count_lines(script, "ioNet "), p.schematic.nets.size());
    expect_golden("minimal.script", script);
    expect_golden("minimal.netlist", emit_netlist_text(p.schematic));
    expect_golden("minimal.svg", emit_svg(p.layout, default_kb()));
}

TEST(Emitters, DemoAndHardGoldens) {
    Pipeline demo = run_spec(load_plan("demo.csv"));
    expect_golden("demo.script", emit_script(demo.layout, demo.schematic, demo.graph));
    expect_golden("demo.netlist", emit_netlist_text(demo.schematic));
    const BenchCase& hard = bench_case("hard-01");
    Pipeline h = run_spec(hard.spec);
    expect_golden("hard-01.script", emit_script(h.layout, h.schematic, h.graph));
    expect_golden("hard-01.netlist", emit_netlist_text(h.schematic));
}

TEST(Emitters, ScriptCoversEveryInstanceAndNet) {
    for (const auto& c : bench42()) {
        Pipeline p = run_spec(c.spec);
        std::string script = emit_script(p.layout, p.schematic, p.graph);
        std::size_t fill = count_kind(p.layout, CellKind::filler);
        EXPECT_EQ(count_lines(script, "ioInst "), p.layout.instances.size() - fill) << c.case_id;
        EXPECT_EQ(count_lines(script, "ioFill "), fill) << c.case_id;
        EXPECT_EQ(count_lines(script, "ioNet "), p.schematic.nets.size()) << c.case_id;
        for (const auto& n : p.graph.nodes) EXPECT_NE(script.find("\"" + n.name + "\""), std::string::npos) << n.name;
    }
}

TEST(Emitters, ScriptOrientationsFollowSides) {
    Pipeline p = run_spec(load_plan("mixed.csv"));
    std::string script = emit_script(p.layout, p.schematic, p.graph);
    const std::regex inst(R"re(ioInst "([^"]+)" "[^"]+" \S+ \S+ (R\d+) (outer|inner))re");
    std::size_t checked = 0;
    for (std::sregex_iterator it(script.begin(), script.end(), inst), end; it != end; ++it) {
        const IntentNode* n = p.graph.find_by_name((*it)[1].str());
        ASSERT_NE(n, nullptr);
        EXPECT_EQ((*it)[2].str(), to_string(side_orient(n->side))) << n->name;
        ++checked;
    }
    EXPECT_EQ(checked, p.graph.nodes.size());
}

TEST(Emitters, ScriptRejectsLayoutWithoutIntent) {
    Pipeline p = run_spec(minimal_plan());
    IntentGraph g = p.graph;
    g.nodes.pop_back();
    EXPECT_THROW(emit_script(p.layout, p.schematic, g), ConsistencyError);
}

TEST(Emitters, SvgDrawsEveryInstance) {
    Pipeline p = run_spec(load_plan("demo.csv"));
    std::string svg = emit_svg(p.layout, default_kb());
    EXPECT_GE(count_of(svg, "<rect "), 52u);
    EXPECT_EQ(count_of(svg, "<rect "), p.layout.instances.size() + 1);
    EXPECT_EQ(count_of(svg, "<text "), 48u);
    EXPECT_TRUE(svg.starts_with("<svg "));
    EXPECT_TRUE(svg.ends_with("</svg>\n"));
}

TEST(Emitters, EmptyLayoutIsJustTheDie) {
    LayoutDB empty;
    empty.die_width = 500000;
    empty.die_height = 400000;
    std::string svg = emit_svg(empty, default_kb());
    EXPECT_EQ(count_of(svg, "<rect "), 1u);
    EXPECT_NE(svg.find("width=\"500.000\" height=\"400.000\""), std::string::npos);
}

TEST(Emitters, NetlistTextFormat) {
    Netlist nl;
    nl.instances["A"] = "PAD";
    nl.nets["N1"] = {{"A", "PAD"}};
    EXPECT_EQ(emit_netlist_text(nl), "INST A PAD\nNET N1 A.PAD\n");
    EXPECT_EQ(parse_netlist_text(emit_netlist_text(nl)), nl);
}

TEST(Emitters, TwoDomainNetlistHasFourRails) {
    Pipeline p = run_spec(load_plan("mixed.csv"));
    std::string text = emit_netlist_text(p.schematic);
    for (const char* rail : {"NET DVDD ", "NET DVSS ", "NET AVDD ", "NET AVSS "})
        EXPECT_EQ(count_of(text, rail), 1u) << rail;
    EXPECT_EQ(count_of(text, "\nNET AVDD_SAR"), 0u);
}
