#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "httplib.h"

#include <ioring/ioring.hpp>

#ifndef IORING_DATA_DIR
#error "IORING_DATA_DIR must point at the repository data/ directory"
#endif
#ifndef IORING_GOLDEN_DIR
#error "IORING_GOLDEN_DIR must point at tests/golden"
#endif

namespace ioring::testing {

inline const KnowledgeBase& default_kb() {
    static const KnowledgeBase kb = load_knowledge_base(kDefaultKnowledgeBase);
    return kb;
}

inline std::filesystem::path data_path(const std::string& name) { return std::filesystem::path(IORING_DATA_DIR) / name; }
inline std::filesystem::path golden_path(const std::string& name) { return std::filesystem::path(IORING_GOLDEN_DIR) / name; }

inline PadPlanSpec load_plan(const std::string& name) {
    auto fmt = name.ends_with(".json") ? SpecFormat::json : SpecFormat::csv;
    return parse_pin_plan(read_file(data_path(name)), fmt, default_kb().rules.grid);
}

/// Fresh scratch directory under the system temp dir, removed on destruction.
struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path = std::filesystem::temp_directory_path() /
               ("ioring_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

// ---- oracles --------------------------------------------------------------

/// Exhaustive filler oracle: walks every multiplicity vector over `widths`
/// whose weighted sum is `gap`. Keeps the smallest piece count and, among
/// those, the lexicographically largest widest-first sequence.
struct FillerOracle {
    bool feasible = false;
    std::size_t count = 0;
    std::vector<Length> pieces;
};

inline FillerOracle filler_oracle(Length gap, std::vector<Length> widths) {
    std::sort(widths.begin(), widths.end(), std::greater<>());
    FillerOracle best;
    std::vector<Length> counts(widths.size(), 0);
    auto consider = [&] {
        std::vector<Length> seq;
        for (std::size_t i = 0; i < widths.size(); ++i) seq.insert(seq.end(), static_cast<std::size_t>(counts[i]), widths[i]);
        if (!best.feasible || seq.size() < best.count || (seq.size() == best.count && seq > best.pieces)) {
            best.feasible = true;
            best.count = seq.size();
            best.pieces = seq;
        }
    };
    auto walk = [&](auto&& self, std::size_t i, Length rem) -> void {
        if (i + 1 == widths.size()) {
            if (rem % widths[i] != 0) return;
            counts[i] = rem / widths[i];
            consider();
            counts[i] = 0;
            return;
        }
        for (Length c = rem / widths[i]; c >= 0; --c) {
            counts[i] = c;
            self(self, i + 1, rem - c * widths[i]);
        }
        counts[i] = 0;
    };
    if (gap == 0) {
        best.feasible = true;
        return best;
    }
    walk(walk, 0, gap);
    return best;
}

inline std::vector<Length> default_filler_widths() {
    std::vector<Length> w;
    for (const auto* f : default_kb().fillers_for("DVDD")) w.push_back(f->width);
    return w;
}

// ---- pipeline -------------------------------------------------------------

struct Pipeline {
    IntentGraph graph;
    LayoutDB layout;
    Netlist schematic;
    Netlist extracted;
    DrcReport drc;
    LvsReport lvs;
};

inline Pipeline run_graph(const IntentGraph& g, const KnowledgeBase& kb = default_kb()) {
    Pipeline p;
    p.graph = g;
    p.layout = resolve_geometry(g, kb);
    p.schematic = generate_netlist(g, kb);
    p.extracted = extract_netlist(p.layout, g, kb);
    p.drc = run_drc(p.layout, kb);
    p.lvs = run_lvs(p.schematic, p.extracted);
    return p;
}

inline Pipeline run_spec(const PadPlanSpec& spec, const KnowledgeBase& kb = default_kb()) {
    return run_graph(structure_intent(spec, kb), kb);
}

/// Re-verifies a hand-mutated layout against an unchanged schematic.
inline void reverify(Pipeline& p, const KnowledgeBase& kb = default_kb()) {
    p.extracted = extract_netlist(p.layout, p.graph, kb);
    p.drc = run_drc(p.layout, kb);
    p.lvs = run_lvs(p.schematic, p.extracted);
}

inline const std::vector<BenchCase>& bench42() {
    static const std::vector<BenchCase> cases = generate_bench(42);
    return cases;
}

inline const BenchCase& bench_case(const std::string& id) {
    for (const auto& c : bench42())
        if (c.case_id == id) return c;
    throw std::runtime_error("no bench case " + id);
}

inline std::size_t count_kind(const LayoutDB& db, CellKind k) {
    return static_cast<std::size_t>(std::count_if(db.instances.begin(), db.instances.end(),
                                                  [&](const PlacedInstance& i) { return i.kind == k; }));
}

/// First medium case whose layout has both fillers and breakers: the mutation fixture.
inline const BenchCase& mutation_case() {
    static const BenchCase* found = [] {
        for (const auto& c : bench42()) {
            if (c.tier != Tier::medium) continue;
            auto p = run_spec(c.spec);
            if (count_kind(p.layout, CellKind::filler) > 0 && count_kind(p.layout, CellKind::breaker) > 0) return &c;
        }
        throw std::runtime_error("no medium case with fillers and breakers");
    }();
    return *found;
}

inline PlacedInstance& instance(LayoutDB& db, const std::string& id) {
    for (auto& i : db.instances)
        if (i.id == id) return i;
    throw std::runtime_error("no instance " + id);
}

/// First outer pad on `side` in placement order.
inline PlacedInstance& first_pad(LayoutDB& db, Side side) {
    for (auto& i : db.instances)
        if (i.side == side && i.kind == CellKind::pad && i.row == Row::outer) return i;
    throw std::runtime_error("no pad on side");
}

inline std::size_t index_of_name(const IntentGraph& g, const std::string& name) {
    for (std::size_t k = 0; k < g.nodes.size(); ++k)
        if (g.nodes[k].name == name) return k;
    throw std::runtime_error("no node " + name);
}

/// Hand-edit: drop one node and close the index gap on its side.
inline IntentGraph without_node(IntentGraph g, const std::string& name) {
    g.nodes.erase(g.nodes.begin() + static_cast<std::ptrdiff_t>(index_of_name(g, name)));
    renumber_positions(g);
    return g;
}

inline const IntentNode* first_breaker(const IntentGraph& g, const KnowledgeBase& kb = default_kb()) {
    for (const auto& n : g.nodes) {
        const CellMaster* c = kb.cell(n.device_type);
        if (c && c->kind == CellKind::breaker) return &n;
    }
    return nullptr;
}

using Names = std::vector<std::string>;

/// Tiny plan builder: pad names per side (S, E, N, W) on a square die.
inline PadPlanSpec make_plan(Length die_nm, Names s, Names e = {}, Names n = {}, Names w = {}) {
    PadPlanSpec spec;
    spec.die_width = die_nm;
    spec.die_height = die_nm;
    std::array<Names*, 4> sides{&s, &e, &n, &w};
    for (std::size_t k = 0; k < 4; ++k)
        for (auto& name : *sides[k]) spec.sides[k].push_back(PinEntry{name, {}});
    return spec;
}

// ---- stub structurer endpoint ----------------------------------------------

/// Local HTTP server answering POSTs with a scripted sequence of bodies; the
/// last body repeats once the script runs out.
class StubEndpoint {
public:
    explicit StubEndpoint(std::vector<std::string> bodies, int status = 200)
        : bodies_(std::move(bodies)), status_(status) {
        server_.Post("/v1/structure", [this](const httplib::Request& req, httplib::Response& res) {
            std::size_t k = hits_++;
            {
                std::lock_guard<std::mutex> lock(mu_);
                requests_.push_back(req.body);
            }
            res.status = status_;
            res.set_content(bodies_[std::min(k, bodies_.size() - 1)], "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~StubEndpoint() {
        server_.stop();
        thread_.join();
    }
    StubEndpoint(const StubEndpoint&) = delete;
    StubEndpoint& operator=(const StubEndpoint&) = delete;

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/structure"; }
    std::size_t hits() const { return hits_; }
    std::vector<std::string> requests() const {
        std::lock_guard<std::mutex> lock(mu_);
        return requests_;
    }

private:
    httplib::Server server_;
    std::vector<std::string> bodies_;
    int status_;
    int port_ = 0;
    std::thread thread_;
    std::atomic<std::size_t> hits_{0};
    mutable std::mutex mu_;
    std::vector<std::string> requests_;
};

inline StructurerConfig external_config(const std::string& url) {
    StructurerConfig cfg;
    cfg.mode = StructurerMode::external;
    cfg.endpoint = url;
    return cfg;
}

inline std::string graph_response(const IntentGraph& g) {
    return detail::json{{"graph", intent_graph_json(g)}}.dump();
}

// ---- CLI ------------------------------------------------------------------

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

inline CliRun cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ioring");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    CliRun r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

} // namespace ioring::testing
