#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "emitters.hpp"
#include "errors.hpp"
#include "intent_graph.hpp"
#include "json_util.hpp"
#include "knowledge_base.hpp"
#include "layout_resolver.hpp"
#include "netlist.hpp"
#include "spec_ingest.hpp"
#include "structurer.hpp"
#include "verify.hpp"

namespace ioring {

enum class Tier { simple, medium, hard };
inline constexpr std::array<Tier, 3> kTiers{Tier::simple, Tier::medium, Tier::hard};

inline std::string_view to_string(Tier t) {
    switch (t) {
    case Tier::simple: return "simple";
    case Tier::medium: return "medium";
    case Tier::hard: return "hard";
    }
    return "?";
}

inline std::optional<Tier> parse_tier(std::string_view t) {
    for (Tier x : kTiers)
        if (to_string(x) == t) return x;
    return std::nullopt;
}

enum class Ablation { no_kb, no_intent_graph, no_adaptor };
using AblationSet = std::set<Ablation>;

inline std::string_view to_string(Ablation a) {
    switch (a) {
    case Ablation::no_kb: return "no_kb";
    case Ablation::no_intent_graph: return "no_intent_graph";
    case Ablation::no_adaptor: return "no_adaptor";
    }
    return "?";
}

inline std::optional<Ablation> parse_ablation(std::string_view t) {
    for (Ablation a : {Ablation::no_kb, Ablation::no_intent_graph, Ablation::no_adaptor})
        if (to_string(a) == t) return a;
    return std::nullopt;
}

struct GoldenStructure {
    Length die_width = 0;
    Length die_height = 0;
    RingStyle ring_style = RingStyle::single_row;
    std::array<std::vector<std::string>, 4> sides; // pad names in along-side order
    std::map<std::string, std::string> domains;    // pad name -> intended domain
    friend bool operator==(const GoldenStructure&, const GoldenStructure&) = default;
};

inline GoldenStructure golden_from_spec(const PadPlanSpec& spec, std::map<std::string, std::string> domains = {}) {
    GoldenStructure g;
    g.die_width = spec.die_width;
    g.die_height = spec.die_height;
    g.ring_style = spec.ring_style;
    for (Side s : kRingSides)
        for (const auto& e : spec.side(s)) g.sides[static_cast<std::size_t>(side_rank(s))].push_back(e.name);
    g.domains = std::move(domains);
    return g;
}

struct BenchCase {
    std::string case_id;
    Tier tier = Tier::simple;
    PadPlanSpec spec;
    GoldenStructure golden;
    friend bool operator==(const BenchCase&, const BenchCase&) = default;
};

namespace detail {

// Generator geometry assumes the default library: corner, pad and breaker widths.
inline constexpr Length kGenCorner = 120000;
inline constexpr Length kGenPad = 60000;
inline constexpr Length kGenBreaker = 10000;

/// Pads that fit on one side with room for three breakers.
inline int side_capacity(Length die) { return static_cast<int>((die - 2 * kGenCorner - 3 * kGenBreaker) / kGenPad); }

/// Portable draws: std distributions differ across standard libraries.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    std::uint64_t below(std::uint64_t n) { return eng() % n; }
    int range(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
    bool chance(double p) { return static_cast<double>(eng() >> 11) * 0x1.0p-53 < p; }
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }
};

struct GenPad {
    std::string name;
    std::string domain;
    std::optional<std::string> domain_override;
};

struct NameSource {
    std::map<std::string, int> next;
    std::string take(const std::string& prefix) { return prefix + std::to_string(next[prefix]++); }
};

/// One contiguous power-domain block: supply pairs plus signals, shuffled.
inline std::vector<GenPad> domain_block(const std::string& domain, int size, Rng& rng, NameSource& names) {
    const int pairs = std::max(1, size / 10);
    std::vector<GenPad> out;
    std::vector<std::string> fixed;
    std::string vdd, vss, sig;
    bool sar = domain == "AVDD_SAR";
    if (domain == "DVDD") {
        vdd = "DVDD_";
        vss = "DVSS_";
        sig = "D";
        fixed = {"DCLK"};
    } else if (domain == "AVDD") {
        vdd = "AVDD_";
        vss = "AVSS_";
        sig = "AIN";
        fixed = {"VINP", "VINN", "VCM", "VREFP", "VREFN"};
    } else {
        vdd = "AVDD_SAR_";
        vss = "AVSS_SAR_";
        sig = "ASAR";
    }
    for (int k = 0; k < pairs; ++k) {
        out.push_back({names.take(vdd), domain, {}});
        out.push_back({names.take(vss), domain, {}});
    }
    for (std::size_t k = 0; static_cast<int>(out.size()) < size; ++k) {
        std::string name = k < fixed.size() && !names.next.count(fixed[k]) ? fixed[k] : names.take(sig);
        if (k < fixed.size()) names.next[fixed[k]] = 1;
        out.push_back({name, domain, sar ? std::optional<std::string>(domain) : std::nullopt});
    }
    rng.shuffle(out);
    return out;
}

inline PinEntry to_entry(const GenPad& p, Row row = Row::outer) {
    PinEntry e;
    e.name = p.name;
    e.overrides.domain = p.domain_override;
    if (row == Row::inner) e.overrides.row = Row::inner;
    return e;
}

inline BenchCase make_case(std::uint64_t seed, Tier tier, int number) {
    BenchCase c;
    c.tier = tier;
    std::string num = std::to_string(number);
    c.case_id = std::string(to_string(tier)) + "-" + (number < 10 ? "0" : "") + num;
    Rng rng(seed * 0x9E3779B97F4A7C15ULL ^ fnv1a(c.case_id));
    NameSource names;

    Length die = 1000000;
    int n = 0;
    std::vector<std::pair<std::string, int>> blocks;
    int feature = (number - 1) % 4;
    bool staggered = false;
    switch (tier) {
    case Tier::simple:
        die = rng.chance(0.5) ? 700000 : 800000;
        n = rng.range(16, 24);
        blocks = {{"DVDD", n}};
        break;
    case Tier::medium: {
        die = 1000000;
        n = rng.range(40, std::min(48, 4 * side_capacity(die)));
        int d = rng.range(n / 3, 2 * n / 3);
        blocks = {{"DVDD", d}, {"AVDD", n - d}};
        break;
    }
    case Tier::hard:
        if (feature == 0) {
            die = 1000000;
            staggered = true;
            n = 4 * 12;
        } else if (feature == 1) {
            die = rng.chance(0.5) ? 1500000 : 2000000;
            n = rng.range(48, std::min(96, 4 * side_capacity(die)));
        } else {
            die = rng.chance(0.5) ? 1000000 : 1200000;
            n = rng.range(48, std::min(96, 4 * side_capacity(die)));
        }
        if (feature == 3) {
            int sar = rng.range(8, n / 4);
            int d = rng.range((n - sar) / 3, 2 * (n - sar) / 3);
            blocks = {{"DVDD", d}, {"AVDD", n - sar - d}, {"AVDD_SAR", sar}};
        } else {
            int d = rng.range(n / 3, 2 * n / 3);
            blocks = {{"DVDD", d}, {"AVDD", n - d}};
        }
        break;
    }

    std::vector<GenPad> ring;
    for (const auto& [domain, size] : blocks) {
        auto b = domain_block(domain, size, rng, names);
        ring.insert(ring.end(), b.begin(), b.end());
    }
    std::rotate(ring.begin(), ring.begin() + static_cast<std::ptrdiff_t>(rng.below(ring.size())), ring.end());

    c.spec.die_width = die;
    c.spec.die_height = die;
    std::map<std::string, std::string> domains;
    std::size_t at = 0;
    for (Side s : kRingSides) {
        std::size_t count = static_cast<std::size_t>(n / 4 + (side_rank(s) < n % 4 ? 1 : 0));
        std::vector<GenPad> outer(ring.begin() + static_cast<std::ptrdiff_t>(at),
                                  ring.begin() + static_cast<std::ptrdiff_t>(at + count));
        at += count;
        auto& entries = c.spec.side(s);
        for (std::size_t k = 0; k < outer.size(); ++k) {
            entries.push_back(to_entry(outer[k]));
            domains[outer[k].name] = outer[k].domain;
            // Inner pad on every other junction away from the corners, between same-domain pads.
            std::size_t j = k + 1;
            if (staggered && j >= 3 && j + 3 <= outer.size() && j % 2 == 1 && outer[k].domain == outer[k + 1].domain) {
                GenPad inner{names.take(outer[k].domain == "DVDD" ? "DS" : "AS"), outer[k].domain, {}};
                if (outer[k].domain == "AVDD_SAR") inner.domain_override = "AVDD_SAR";
                entries.push_back(to_entry(inner, Row::inner));
                domains[inner.name] = inner.domain;
            }
        }
    }
    if (staggered) {
        c.spec.directives.push_back(parse_directive("SET_RING_STYLE style=staggered"));
        c.spec.ring_style = RingStyle::staggered;
    }
    if (tier == Tier::hard && feature == 2) c.spec.directives.push_back(parse_directive("USE_CUSTOM_CELL name=VINP cell=APAD_LOWCAP"));
    if (tier == Tier::hard && feature == 3) c.spec.directives.push_back(parse_directive("LOCAL_ESD_DOMAIN domain=AVDD_SAR"));
    c.golden = golden_from_spec(c.spec, std::move(domains));
    return c;
}

} // namespace detail

/// Ten cases per tier, deterministic in `seed`.
inline std::vector<BenchCase> generate_bench(std::uint64_t seed) {
    std::vector<BenchCase> cases;
    for (Tier t : kTiers)
        for (int k = 1; k <= 10; ++k) cases.push_back(detail::make_case(seed, t, k));
    return cases;
}

/// Hard-tier features a case actually exhibits.
inline std::vector<std::string> hard_features(const PadPlanSpec& spec) {
    std::vector<std::string> out;
    if (spec.ring_style == RingStyle::staggered) out.push_back("staggered");
    if (2 * std::max(spec.die_width, spec.die_height) >= 3 * 1000000) out.push_back("large_die");
    for (const auto& d : spec.directives) {
        if (d.kind == DirectiveKind::use_custom_cell) out.push_back("custom_cell");
        if (d.kind == DirectiveKind::local_esd_domain) out.push_back("local_esd");
    }
    return out;
}

/// Tier constraints over a generated suite; empty when all hold.
inline std::vector<std::string> tier_audit(const std::vector<BenchCase>& cases) {
    std::vector<std::string> problems;
    std::map<Tier, int> counts;
    for (const auto& c : cases) {
        ++counts[c.tier];
        std::set<std::string> doms;
        for (const auto& [_, d] : c.golden.domains) doms.insert(d);
        const std::size_t pads = c.spec.pin_count();
        switch (c.tier) {
        case Tier::simple:
            if (doms.size() != 1) problems.push_back(c.case_id + ": simple case spans " + std::to_string(doms.size()) + " domains");
            if (pads < 16 || pads > 24) problems.push_back(c.case_id + ": simple case has " + std::to_string(pads) + " pads");
            break;
        case Tier::medium:
            if (doms.size() < 2) problems.push_back(c.case_id + ": medium case is single-domain");
            if (c.spec.die_width != 1000000 || c.spec.die_height != 1000000)
                problems.push_back(c.case_id + ": medium die is not 1000000 x 1000000 nm");
            if (c.spec.ring_style != RingStyle::single_row) problems.push_back(c.case_id + ": medium case is staggered");
            break;
        case Tier::hard:
            if (hard_features(c.spec).empty()) problems.push_back(c.case_id + ": hard case has no hard feature");
            break;
        }
    }
    for (Tier t : kTiers)
        if (counts[t] != 10) problems.push_back(std::string(to_string(t)) + " tier has " + std::to_string(counts[t]) + " cases");
    return problems;
}

struct ShapeResult {
    bool passed = true;
    std::vector<std::string> reasons;
};

/// Deterministic stand-in for visual layout judging: die, style, corners and
/// per-side pad order must all match the golden structure.
inline ShapeResult shape_check(const LayoutDB& layout, const GoldenStructure& golden, const KnowledgeBase& kb) {
    ShapeResult r;
    auto fail = [&](std::string why) {
        r.passed = false;
        r.reasons.push_back(std::move(why));
    };
    if (layout.die_width != golden.die_width || layout.die_height != golden.die_height)
        fail("die " + std::to_string(layout.die_width) + "x" + std::to_string(layout.die_height) + " nm differs from golden " +
             std::to_string(golden.die_width) + "x" + std::to_string(golden.die_height));
    if (layout.ring_style != golden.ring_style) fail("ring style " + std::string(to_string(layout.ring_style)) + " differs from golden");
    int corners = 0;
    std::array<std::vector<std::pair<std::pair<Length, int>, std::string>>, 4> pads;
    for (const auto& i : layout.instances) {
        const CellMaster* m = kb.cell(i.master);
        CellKind kind = m ? m->kind : i.kind;
        if (kind == CellKind::corner) ++corners;
        if (!is_pad_kind(kind)) continue;
        Length t0 = m ? along_interval(i.side, transform_bbox(*m, i.origin, i.orient), layout.die_width, layout.die_height).first : 0;
        pads[static_cast<std::size_t>(side_rank(i.side))].push_back({{t0, static_cast<int>(i.row)}, i.name});
    }
    if (corners != 4) fail("layout has " + std::to_string(corners) + " corners");
    for (Side s : kRingSides) {
        auto& v = pads[static_cast<std::size_t>(side_rank(s))];
        std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<std::string> names;
        for (const auto& p : v) names.push_back(p.second);
        if (names != golden.sides[static_cast<std::size_t>(side_rank(s))])
            fail("pad order on side " + std::string(to_string(s)) + " differs from golden");
    }
    return r;
}

enum class Outcome { pass, fail, not_applicable };

inline std::string_view to_string(Outcome o) {
    switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::fail: return "fail";
    case Outcome::not_applicable: return "n_a";
    }
    return "?";
}

inline Outcome outcome(bool ok) { return ok ? Outcome::pass : Outcome::fail; }

struct CaseArtifacts {
    std::string spec_json;
    std::string intent_json;
    std::string script;
    std::string netlist;
    std::string svg;
    std::string drc_json;
    std::string lvs_json;
};

inline constexpr std::array<std::string_view, 5> kMetricNames{"intent", "shape", "drc", "lvs", "combined"};

struct BenchResult {
    std::string case_id;
    Tier tier = Tier::simple;
    std::array<Outcome, 5> metrics{Outcome::fail, Outcome::fail, Outcome::fail, Outcome::fail, Outcome::fail};
    std::vector<std::string> reasons;
    std::vector<std::pair<std::string, double>> timings_ms;
    CaseArtifacts artifacts;

    Outcome metric1_ig() const { return metrics[0]; }
    Outcome metric2_shape() const { return metrics[1]; }
    Outcome metric3_drc() const { return metrics[2]; }
    Outcome metric4_lvs() const { return metrics[3]; }
    Outcome metric5_combined() const { return metrics[4]; }
    double total_ms() const {
        double t = 0;
        for (const auto& [_, ms] : timings_ms) t += ms;
        return t;
    }
};

/// Test-only degradation of the structurer: each inferred breaker is dropped
/// with a tier-dependent probability.
struct FaultInjection {
    std::array<double, 3> breaker_drop{0.0, 0.0, 0.0};
    std::uint64_t seed = 0;
};

struct EvalOptions {
    AblationSet ablations;
    std::optional<FaultInjection> faults;
};

inline void drop_breakers(IntentGraph& g, const KnowledgeBase& kb, double p, std::uint64_t seed) {
    if (p <= 0) return;
    detail::Rng rng(seed);
    std::vector<IntentNode> kept;
    for (auto& n : g.nodes) {
        const CellMaster* c = kb.cell(n.device_type);
        bool breaker = c && c->kind == CellKind::breaker && n.provenance == Provenance::inferred;
        if (breaker && rng.chance(p)) continue;
        kept.push_back(std::move(n));
    }
    g.nodes = std::move(kept);
    renumber_positions(g);
}

/// Runs spec -> intent graph -> layout -> verification for one case.
inline BenchResult evaluate_case(const BenchCase& bc, const KnowledgeBase& base_kb, const EvalOptions& opt = {}) {
    using clock = std::chrono::steady_clock;
    BenchResult r;
    r.case_id = bc.case_id;
    r.tier = bc.tier;
    auto& m = r.metrics;
    auto stage_start = clock::now();
    auto lap = [&](const char* stage) {
        auto now = clock::now();
        r.timings_ms.push_back({stage, std::chrono::duration<double, std::milli>(now - stage_start).count()});
        stage_start = now;
    };
    r.artifacts.spec_json = serialize_pin_plan(bc.spec);

    if (opt.ablations.count(Ablation::no_intent_graph)) {
        m[0] = Outcome::not_applicable;
        r.reasons.push_back("intent graph bypassed: direct spec-to-layout emission has no resolved devices");
        return r;
    }
    KnowledgeBase kb = base_kb;
    if (opt.ablations.count(Ablation::no_kb)) kb.patterns.clear();

    IntentGraph graph;
    try {
        graph = structure_intent(bc.spec, kb, StructurerConfig{});
    } catch (const std::exception& e) {
        r.reasons.push_back(std::string("structure: ") + e.what());
        lap("structure");
        return r;
    }
    if (opt.faults) {
        double p = opt.faults->breaker_drop[static_cast<std::size_t>(bc.tier)];
        drop_breakers(graph, kb, p, opt.faults->seed ^ detail::fnv1a(bc.case_id));
    }
    ValidationReport vr = validate_intent_graph(graph, kb);
    r.artifacts.intent_json = serialize_intent_graph(graph);
    lap("structure");
    if (!vr.passed) {
        for (const auto& i : vr.issues)
            if (i.severity == Severity::error) r.reasons.push_back("intent: " + i.code + " " + i.message);
        return r;
    }
    m[0] = Outcome::pass;

    Netlist schematic = generate_netlist(graph, kb);
    LayoutDB layout;
    layout.die_width = graph.die_width;
    layout.die_height = graph.die_height;
    layout.ring_style = graph.ring_style;
    bool adaptor = !opt.ablations.count(Ablation::no_adaptor);
    if (!adaptor) r.reasons.push_back("adaptor disabled: layout left empty");
    try {
        if (adaptor) layout = resolve_geometry(graph, kb);
    } catch (const std::exception& e) {
        r.reasons.push_back(std::string("resolve: ") + e.what());
        lap("resolve");
        return r;
    }
    lap("resolve");

    ShapeResult shape = shape_check(layout, bc.golden, kb);
    m[1] = outcome(shape.passed);
    for (const auto& why : shape.reasons) r.reasons.push_back("shape: " + why);

    DrcReport drc = run_drc(layout, kb);
    m[2] = outcome(drc.passed);
    lap("drc");
    Netlist extracted = extract_netlist(layout, graph, kb);
    LvsReport lvs = run_lvs(schematic, extracted);
    m[3] = outcome(lvs.clean);
    m[4] = outcome(drc.passed && lvs.clean);
    lap("lvs");
    if (!drc.passed) r.reasons.push_back("drc: " + std::to_string(drc.violations.size()) + " violations, first " + drc.violations.front().rule);
    if (!lvs.clean) r.reasons.push_back("lvs: " + std::to_string(lvs.diffs.size()) + " diffs, first " + std::string(to_string(lvs.diffs.front().kind)));

    r.artifacts.script = emit_script(layout, adaptor ? schematic : Netlist{}, graph);
    r.artifacts.netlist = emit_netlist_text(schematic);
    r.artifacts.svg = emit_svg(layout, kb);
    r.artifacts.drc_json = drc_report_json(drc, bc.case_id).dump(2) + "\n";
    r.artifacts.lvs_json = lvs_report_json(lvs, bc.case_id).dump(2) + "\n";
    lap("emit");
    return r;
}

/// Evaluates cases on `jobs` worker threads; results come back sorted by case id.
inline std::vector<BenchResult> run_cases(const std::vector<BenchCase>& cases, const KnowledgeBase& kb,
                                          const EvalOptions& opt = {}, unsigned jobs = 1) {
    std::vector<BenchResult> results(cases.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cases.size(); i = next++) {
            try {
                results[i] = evaluate_case(cases[i], kb, opt);
            } catch (const std::exception& e) {
                results[i] = BenchResult{};
                results[i].case_id = cases[i].case_id;
                results[i].tier = cases[i].tier;
                results[i].reasons.push_back(std::string("internal: ") + e.what());
            }
        }
    };
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, cases.size()))));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < jobs; ++k) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    std::sort(results.begin(), results.end(), [](const BenchResult& a, const BenchResult& b) { return a.case_id < b.case_id; });
    return results;
}

struct MetricCount {
    int passed = 0;
    int total = 0;
    int not_applicable = 0;
    friend bool operator==(const MetricCount&, const MetricCount&) = default;
};

using MetricRow = std::array<MetricCount, 5>;

struct MetricsTable {
    std::map<std::string, MetricRow> tiers;
    MetricRow overall{};
};

/// Percentage in hundredths, rounded half-up with integer arithmetic.
inline long long percent_hundredths(long long passed, long long total) {
    return (20000 * passed + total) / (2 * total);
}

inline std::string percent_string(long long passed, long long total) {
    if (total <= 0) return "n/a";
    long long h = percent_hundredths(passed, total);
    std::string frac = std::to_string(h % 100);
    if (frac.size() < 2) frac.insert(0, "0");
    return std::to_string(h / 100) + "." + frac;
}

inline MetricsTable aggregate_metrics(const std::vector<BenchResult>& results) {
    if (results.empty()) throw EmptyInputError("no bench results to aggregate");
    MetricsTable t;
    for (const auto& r : results) {
        auto& row = t.tiers[std::string(to_string(r.tier))];
        for (std::size_t k = 0; k < 5; ++k) {
            for (MetricRow* target : {&row, &t.overall}) {
                MetricCount& c = (*target)[k];
                if (r.metrics[k] == Outcome::not_applicable) {
                    ++c.not_applicable;
                } else {
                    ++c.total;
                    if (r.metrics[k] == Outcome::pass) ++c.passed;
                }
            }
        }
    }
    return t;
}

inline detail::json metric_row_json(const MetricRow& row) {
    detail::json out = detail::json::object();
    for (std::size_t k = 0; k < 5; ++k)
        out[std::string(kMetricNames[k])] = {{"passed", row[k].passed},
                                             {"total", row[k].total},
                                             {"not_applicable", row[k].not_applicable},
                                             {"percent", percent_string(row[k].passed, row[k].total)}};
    return out;
}

inline detail::json metrics_table_json(const MetricsTable& t) {
    detail::json tiers = detail::json::object();
    for (const auto& [name, row] : t.tiers) tiers[name] = metric_row_json(row);
    return {{"tiers", tiers}, {"overall", metric_row_json(t.overall)}};
}

inline std::string format_metrics_table(const MetricsTable& t) {
    std::ostringstream os;
    auto line = [&](const std::string& label, const MetricRow& row) {
        os << label;
        for (std::size_t pad = label.size(); pad < 9; ++pad) os << ' ';
        for (std::size_t k = 0; k < 5; ++k) {
            std::string cell = percent_string(row[k].passed, row[k].total);
            for (std::size_t pad = cell.size(); pad < 10; ++pad) os << ' ';
            os << cell;
        }
        os << '\n';
    };
    os << "tier        intent     shape       drc       lvs  combined\n";
    for (Tier tier : kTiers)
        if (auto it = t.tiers.find(std::string(to_string(tier))); it != t.tiers.end()) line(it->first, it->second);
    line("overall", t.overall);
    return os.str();
}

inline detail::json bench_result_json(const BenchResult& r, bool with_timings = true) {
    using json = detail::json;
    json j = {{"case_id", r.case_id},
              {"tier", to_string(r.tier)},
              {"metric1_ig", to_string(r.metrics[0])},
              {"metric2_shape", to_string(r.metrics[1])},
              {"metric3_drc", to_string(r.metrics[2])},
              {"metric4_lvs", to_string(r.metrics[3])},
              {"metric5_combined", to_string(r.metrics[4])},
              {"reasons", r.reasons},
              {"artifact_digest", {{"script", detail::hex64(detail::fnv1a(r.artifacts.script))},
                                   {"svg", detail::hex64(detail::fnv1a(r.artifacts.svg))}}}};
    if (with_timings) {
        json t = json::object();
        for (const auto& [stage, ms] : r.timings_ms) t[stage] = ms;
        j["timings_ms"] = t;
    }
    return j;
}

struct BenchReport {
    std::uint64_t seed = 0;
    AblationSet ablations;
    std::vector<BenchResult> results;
    MetricsTable table;
};

inline detail::json bench_report_json(const BenchReport& rep, bool with_timings = true) {
    using json = detail::json;
    json abl = json::array();
    for (Ablation a : rep.ablations) abl.push_back(to_string(a));
    json cases = json::array();
    for (const auto& r : rep.results) cases.push_back(bench_result_json(r, with_timings));
    json j = {{"seed", rep.seed},
              {"ablation", abl},
              {"generator", "seeded synthetic suite: 10 simple, 10 medium, 10 hard cases"},
              {"cases", cases},
              {"table", metrics_table_json(rep.table)}};
    return j;
}

/// Digest of the report with timings left out, so reruns compare equal.
inline std::string bench_digest(const BenchReport& rep) {
    return detail::hex64(detail::fnv1a(bench_report_json(rep, false).dump()));
}

inline std::string serialize_bench_report(const BenchReport& rep) {
    auto j = bench_report_json(rep, true);
    j["digest"] = bench_digest(rep);
    return j.dump(2) + "\n";
}

inline BenchReport run_bench(std::uint64_t seed, const KnowledgeBase& kb, const EvalOptions& opt = {},
                             std::optional<Tier> tier = std::nullopt, unsigned jobs = 1) {
    auto cases = generate_bench(seed);
    if (tier) std::erase_if(cases, [&](const BenchCase& c) { return c.tier != *tier; });
    BenchReport rep;
    rep.seed = seed;
    rep.ablations = opt.ablations;
    rep.results = run_cases(cases, kb, opt, jobs);
    rep.table = aggregate_metrics(rep.results);
    return rep;
}

} // namespace ioring
