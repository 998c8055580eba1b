#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "bench.hpp"
#include "default_kb.hpp"
#include "emitters.hpp"
#include "errors.hpp"
#include "intent_graph.hpp"
#include "knowledge_base.hpp"
#include "layout_resolver.hpp"
#include "netlist.hpp"
#include "spec_ingest.hpp"
#include "structurer.hpp"
#include "structurer_external.hpp"
#include "verify.hpp"

namespace ioring {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int io = 1;
inline constexpr int validation = 2;
inline constexpr int drc = 3;
inline constexpr int lvs = 4;
inline constexpr int drc_and_lvs = 5;
} // namespace exit_code

inline int verification_exit(bool drc_ok, bool lvs_ok) {
    if (drc_ok && lvs_ok) return exit_code::ok;
    if (!drc_ok && !lvs_ok) return exit_code::drc_and_lvs;
    return drc_ok ? exit_code::lvs : exit_code::drc;
}

namespace fs = std::filesystem;

class IoError : public Error {
public:
    using Error::Error;
};

inline std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Replaces `p` atomically: write a sibling temp file, then rename over.
inline void write_file_atomic(const fs::path& p, std::string_view content) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    fs::path tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, p, ec);
    if (ec) throw IoError("cannot move " + tmp.string() + " to " + p.string() + ": " + ec.message());
}

struct CliOptions {
    std::string kb_path;
    bool json = false;
    unsigned jobs = 1;
    std::uint64_t seed = 42;
    bool strict = false;
    std::vector<std::string> ablate;
    std::string structurer = "deterministic";
    std::string endpoint;

    std::string spec_path;
    std::string spec_format;
    std::string intent_path;
    std::string layout_path;
    std::string out;
    std::string tier;
    std::string cases_dir;
    std::string report_path;
};

namespace detail {

/// Exit status carried out of a command body.
struct CliExit {
    int code;
    std::string message;
};

inline SpecFormat spec_format_for(const CliOptions& o) {
    std::string f = o.spec_format;
    if (f.empty()) f = fs::path(o.spec_path).extension() == ".json" ? "json" : "csv";
    if (f == "csv") return SpecFormat::csv;
    if (f == "json") return SpecFormat::json;
    throw CliExit{exit_code::io, "unknown spec format " + f};
}

inline AblationSet ablations_of(const CliOptions& o) {
    AblationSet out;
    for (const auto& a : o.ablate) {
        auto v = parse_ablation(a);
        if (!v) throw CliExit{exit_code::io, "unknown ablation " + a};
        out.insert(*v);
    }
    return out;
}

inline KnowledgeBase load_kb(const CliOptions& o) {
    KnowledgeBase kb = load_knowledge_base(o.kb_path.empty() ? std::string(kDefaultKnowledgeBase) : read_file(o.kb_path));
    if (ablations_of(o).count(Ablation::no_kb)) kb.patterns.clear();
    return kb;
}

inline StructurerConfig structurer_config(const CliOptions& o) {
    StructurerConfig cfg;
    cfg.strict = o.strict;
    if (o.structurer == "external") {
        cfg.mode = StructurerMode::external;
        std::string ep = o.endpoint;
        if (ep.empty())
            if (const char* env = std::getenv("IORING_ENDPOINT")) ep = env;
        if (ep.empty()) throw CliExit{exit_code::io, "external structurer needs --endpoint or IORING_ENDPOINT"};
        cfg.endpoint = ep;
    } else if (o.structurer != "deterministic") {
        throw CliExit{exit_code::io, "unknown structurer " + o.structurer};
    }
    return cfg;
}

/// Structures a spec file; structurer errors that reflect the design map to exit 2.
inline IntentGraph structure_from_spec(const CliOptions& o, const KnowledgeBase& kb) {
    PadPlanSpec spec = parse_pin_plan(read_file(o.spec_path), spec_format_for(o), kb.rules.grid);
    StructurerConfig cfg = structurer_config(o);
    try {
        if (cfg.mode == StructurerMode::external) return structure_intent_external(spec, kb, cfg);
        return structure_intent(spec, kb, cfg);
    } catch (const UnresolvedPinError& e) {
        throw CliExit{exit_code::validation, e.what()};
    } catch (const DomainConfigError& e) {
        throw CliExit{exit_code::validation, e.what()};
    } catch (const EsdRuleError& e) {
        throw CliExit{exit_code::validation, e.what()};
    } catch (const DirectiveError& e) {
        throw CliExit{exit_code::validation, e.what()};
    } catch (const ValidationError& e) {
        throw CliExit{exit_code::validation, e.what()};
    }
}

inline IntentGraph load_graph(const CliOptions& o, const KnowledgeBase& kb) {
    if (!o.intent_path.empty()) return parse_intent_graph(read_file(o.intent_path));
    if (!o.spec_path.empty()) return structure_from_spec(o, kb);
    throw CliExit{exit_code::io, "give --intent or --spec"};
}

inline LayoutDB resolve_or_exit(const IntentGraph& g, const KnowledgeBase& kb) {
    try {
        return resolve_geometry(g, kb);
    } catch (const ValidationError& e) {
        throw CliExit{exit_code::validation, e.what()};
    } catch (const RingOverflowError& e) {
        throw CliExit{exit_code::validation, e.what()};
    } catch (const UnfillableGapError& e) {
        throw CliExit{exit_code::validation, e.what()};
    } catch (const StaggerConflictError& e) {
        throw CliExit{exit_code::validation, e.what()};
    }
}

inline void print_issues(const ValidationReport& r, std::ostream& err) {
    for (const auto& i : r.issues)
        err << (i.severity == Severity::error ? "error " : "warning ") << i.code << ": " << i.message << "\n";
}

inline fs::path out_dir(const CliOptions& o) { return o.out.empty() ? fs::path(".") : fs::path(o.out); }

struct Verification {
    DrcReport drc;
    LvsReport lvs;
    std::vector<std::string> warnings;
};

inline Verification verify_layout(const LayoutDB& layout, const IntentGraph& g, const KnowledgeBase& kb) {
    Verification v;
    v.drc = run_drc(layout, kb);
    Netlist extracted = extract_netlist(layout, g, kb, &v.warnings);
    v.lvs = run_lvs(generate_netlist(g, kb), extracted);
    return v;
}

inline int report_verification(const Verification& v, const CliOptions& o, std::ostream& out, std::ostream& err) {
    for (const auto& w : v.warnings) err << "warning: " << w << "\n";
    for (const auto& x : v.drc.violations) err << x.rule << ": " << x.message << "\n";
    for (const auto& d : v.lvs.diffs) err << "LVS " << to_string(d.kind) << ": " << d.detail << "\n";
    if (o.json) out << json{{"drc", drc_report_json(v.drc)}, {"lvs", lvs_report_json(v.lvs)}}.dump(2) << "\n";
    else out << "DRC " << (v.drc.passed ? "clean" : "FAIL") << ", LVS " << (v.lvs.clean ? "clean" : "FAIL") << "\n";
    return verification_exit(v.drc.passed, v.lvs.clean);
}

inline int cmd_structure(const CliOptions& o, std::ostream& out, std::ostream& err) {
    if (o.spec_path.empty()) throw CliExit{exit_code::io, "structure needs --spec"};
    if (ablations_of(o).count(Ablation::no_intent_graph)) throw CliExit{exit_code::validation, "intent graph stage is ablated"};
    KnowledgeBase kb = load_kb(o);
    IntentGraph g = structure_from_spec(o, kb);
    ValidationReport r = validate_intent_graph(g, kb);
    write_file_atomic(o.out.empty() ? "intent.json" : o.out, serialize_intent_graph(g));
    print_issues(r, err);
    if (o.json) out << validation_report_json(r).dump(2) << "\n";
    else out << "intent graph: " << g.nodes.size() << " nodes, validation " << (r.passed ? "passed" : "FAILED") << "\n";
    return r.passed ? exit_code::ok : exit_code::validation;
}

inline int cmd_resolve(const CliOptions& o, std::ostream& out, std::ostream& err) {
    KnowledgeBase kb = load_kb(o);
    IntentGraph g = load_graph(o, kb);
    ValidationReport r = validate_intent_graph(g, kb);
    print_issues(r, err);
    LayoutDB layout = resolve_or_exit(g, kb);
    write_file_atomic(o.out.empty() ? "layout.json" : o.out, serialize_layout(layout));
    if (o.json) out << layout_json(layout).dump(2) << "\n";
    else out << "layout: " << layout.instances.size() << " instances\n";
    return exit_code::ok;
}

inline int cmd_build(const CliOptions& o, std::ostream& out, std::ostream& err) {
    AblationSet abl = ablations_of(o);
    if (abl.count(Ablation::no_intent_graph)) throw CliExit{exit_code::validation, "intent graph stage is ablated; nothing to build"};
    KnowledgeBase kb = load_kb(o);
    IntentGraph g = load_graph(o, kb);
    ValidationReport r = validate_intent_graph(g, kb);
    print_issues(r, err);
    if (!structurally_sound(r)) return exit_code::validation;

    LayoutDB layout;
    layout.die_width = g.die_width;
    layout.die_height = g.die_height;
    layout.ring_style = g.ring_style;
    bool adaptor = !abl.count(Ablation::no_adaptor);
    if (adaptor) layout = resolve_or_exit(g, kb);
    Netlist schematic = generate_netlist(g, kb);
    Verification v = verify_layout(layout, g, kb);

    fs::path dir = out_dir(o);
    write_file_atomic(dir / "layout.script", emit_script(layout, adaptor ? schematic : Netlist{}, g));
    write_file_atomic(dir / "netlist.txt", emit_netlist_text(schematic));
    write_file_atomic(dir / "render.svg", emit_svg(layout, kb));
    write_file_atomic(dir / "drc.json", drc_report_json(v.drc).dump(2) + "\n");
    write_file_atomic(dir / "lvs.json", lvs_report_json(v.lvs).dump(2) + "\n");
    return report_verification(v, o, out, err);
}

inline int cmd_verify(const CliOptions& o, std::ostream& out, std::ostream& err) {
    if (o.layout_path.empty()) throw CliExit{exit_code::io, "verify needs --layout"};
    KnowledgeBase kb = load_kb(o);
    IntentGraph g = load_graph(o, kb);
    LayoutDB layout = parse_layout(read_file(o.layout_path));
    Verification v = verify_layout(layout, g, kb);
    if (!o.out.empty()) {
        write_file_atomic(out_dir(o) / "drc.json", drc_report_json(v.drc).dump(2) + "\n");
        write_file_atomic(out_dir(o) / "lvs.json", lvs_report_json(v.lvs).dump(2) + "\n");
    }
    return report_verification(v, o, out, err);
}

inline int cmd_emit(const CliOptions& o, std::ostream& out, std::ostream&) {
    if (o.layout_path.empty()) throw CliExit{exit_code::io, "emit needs --layout"};
    KnowledgeBase kb = load_kb(o);
    IntentGraph g = load_graph(o, kb);
    LayoutDB layout = parse_layout(read_file(o.layout_path));
    Netlist schematic = generate_netlist(g, kb);
    fs::path dir = out_dir(o);
    write_file_atomic(dir / "layout.script", emit_script(layout, schematic, g));
    write_file_atomic(dir / "netlist.txt", emit_netlist_text(schematic));
    write_file_atomic(dir / "render.svg", emit_svg(layout, kb));
    if (!o.json) out << "wrote layout.script, netlist.txt, render.svg to " << dir.string() << "\n";
    return exit_code::ok;
}

inline void write_case_bundles(const fs::path& root, const BenchReport& rep) {
    for (const auto& r : rep.results) {
        fs::path d = root / r.case_id;
        const auto& a = r.artifacts;
        write_file_atomic(d / "spec.json", a.spec_json);
        write_file_atomic(d / "intent.json", a.intent_json);
        write_file_atomic(d / "layout.script", a.script);
        write_file_atomic(d / "netlist.txt", a.netlist);
        write_file_atomic(d / "drc.json", a.drc_json);
        write_file_atomic(d / "lvs.json", a.lvs_json);
        write_file_atomic(d / "render.svg", a.svg);
    }
}

inline int cmd_bench(const CliOptions& o, std::ostream& out, std::ostream&) {
    KnowledgeBase kb = load_knowledge_base(o.kb_path.empty() ? std::string(kDefaultKnowledgeBase) : read_file(o.kb_path));
    EvalOptions opt;
    opt.ablations = ablations_of(o);
    std::optional<Tier> tier;
    if (!o.tier.empty()) {
        tier = parse_tier(o.tier);
        if (!tier) throw CliExit{exit_code::io, "unknown tier " + o.tier};
    }
    BenchReport rep = run_bench(o.seed, kb, opt, tier, std::max(1u, o.jobs));
    std::string text = serialize_bench_report(rep);
    if (!o.out.empty()) write_file_atomic(o.out, text);
    if (!o.cases_dir.empty()) write_case_bundles(o.cases_dir, rep);
    if (o.json) out << text;
    else out << format_metrics_table(rep.table) << "digest " << bench_digest(rep) << "\n";
    return exit_code::ok;
}

inline int cmd_report(const CliOptions& o, std::ostream& out, std::ostream&) {
    if (o.report_path.empty()) throw CliExit{exit_code::io, "report needs --in"};
    json doc = parse_json(read_file(o.report_path));
    const json& overall = require_object(require_object(doc, "table", ""), "overall", "table");
    if (o.json) {
        out << doc["table"].dump(2) << "\n";
        return exit_code::ok;
    }
    out << "seed " << require(doc, "seed", "").dump() << ", " << require_array(doc, "cases", "").size() << " cases\n";
    for (auto name : kMetricNames) {
        const json& m = require_object(overall, std::string(name), "table.overall");
        out << name << ": " << require_string(m, "percent", "") << " (" << require_int(m, "passed", "") << "/"
            << require_int(m, "total", "") << ")\n";
    }
    return exit_code::ok;
}

} // namespace detail

/// Command-line entry point; returns the process exit status.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CliOptions o;
    CLI::App app{"I/O pad ring synthesis and verification"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--kb", o.kb_path, "knowledge base JSON (default: built-in)");
    app.add_flag("--json", o.json, "machine-readable JSON on stdout");
    app.add_option("--jobs", o.jobs, "bench worker threads");
    app.add_option("--seed", o.seed, "bench generator seed");
    app.add_flag("--strict", o.strict, "fail on pins no pattern resolves");
    app.add_option("--ablate", o.ablate, "no_kb, no_intent_graph, no_adaptor")->delimiter(',');
    app.add_option("--structurer", o.structurer, "deterministic or external");
    app.add_option("--endpoint", o.endpoint, "external structurer URL (or IORING_ENDPOINT)");

    auto* structure = app.add_subcommand("structure", "pin plan -> intent.json");
    structure->add_option("--spec", o.spec_path)->required();
    structure->add_option("--format", o.spec_format, "csv or json (default: by extension)");
    structure->add_option("-o,--out", o.out, "output intent JSON");

    auto* resolve = app.add_subcommand("resolve", "intent graph -> layout.json");
    resolve->add_option("--intent", o.intent_path);
    resolve->add_option("--spec", o.spec_path);
    resolve->add_option("--format", o.spec_format);
    resolve->add_option("-o,--out", o.out, "output layout JSON");

    auto* build = app.add_subcommand("build", "resolve, emit and verify");
    build->add_option("--intent", o.intent_path);
    build->add_option("--spec", o.spec_path);
    build->add_option("--format", o.spec_format);
    build->add_option("-o,--out", o.out, "output directory");

    auto* verify = app.add_subcommand("verify", "DRC and LVS on a layout.json");
    verify->add_option("--layout", o.layout_path)->required();
    verify->add_option("--intent", o.intent_path);
    verify->add_option("--spec", o.spec_path);
    verify->add_option("-o,--out", o.out, "directory for drc.json and lvs.json");

    auto* emit = app.add_subcommand("emit", "script, netlist and SVG from a layout.json");
    emit->add_option("--layout", o.layout_path)->required();
    emit->add_option("--intent", o.intent_path);
    emit->add_option("--spec", o.spec_path);
    emit->add_option("-o,--out", o.out, "output directory");

    auto* bench = app.add_subcommand("bench", "generate and evaluate the benchmark suite");
    bench->add_option("--tier", o.tier, "simple, medium or hard");
    bench->add_option("--out", o.out, "report JSON path");
    bench->add_option("--cases-dir", o.cases_dir, "write per-case artifact bundles here");

    auto* report = app.add_subcommand("report", "summarise a bench report");
    report->add_option("--in", o.report_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_code::ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return exit_code::io;
    }

    try {
        if (*structure) return detail::cmd_structure(o, out, err);
        if (*resolve) return detail::cmd_resolve(o, out, err);
        if (*build) return detail::cmd_build(o, out, err);
        if (*verify) return detail::cmd_verify(o, out, err);
        if (*emit) return detail::cmd_emit(o, out, err);
        if (*bench) return detail::cmd_bench(o, out, err);
        if (*report) return detail::cmd_report(o, out, err);
    } catch (const detail::CliExit& e) {
        err << "error: " << e.message << "\n";
        return e.code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::io;
    }
    return exit_code::io;
}

} // namespace ioring
