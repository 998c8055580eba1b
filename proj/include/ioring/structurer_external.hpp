#pragma once

#include <string>

#include "httplib.h"

#include "errors.hpp"
#include "intent_graph.hpp"
#include "json_util.hpp"
#include "knowledge_base.hpp"
#include "spec_ingest.hpp"
#include "structurer.hpp"

namespace ioring {

inline constexpr std::string_view kIntentGraphSchemaId = "ioring.intent_graph/v1";

namespace detail {

struct Endpoint {
    std::string base; // scheme://host[:port]
    std::string path;
};

inline Endpoint split_endpoint(const std::string& url) {
    auto scheme = url.find("://");
    if (scheme == std::string::npos) throw EndpointError("endpoint URL needs a scheme: " + url);
    auto slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) return {url, "/"};
    return {url.substr(0, slash), url.substr(slash)};
}

/// Pulls the intent graph out of one response body; throws on anything malformed.
inline IntentGraph graph_from_response(const std::string& body) {
    json doc = parse_json(body);
    const json& g = require(doc, "graph", "");
    if (g.is_string()) return parse_intent_graph(g.get<std::string>());
    return intent_graph_from_json(g);
}

} // namespace detail

/// Sends the KB document and the plan to a completion endpoint and accepts the
/// first response that parses as an intent graph. Malformed responses are
/// retried `retries` times; transport failures are not.
inline IntentGraph structure_intent_external(const PadPlanSpec& spec, const KnowledgeBase& kb,
                                             const StructurerConfig& cfg, int retries = 2) {
    if (!cfg.endpoint || cfg.endpoint->empty()) throw EndpointError("external structurer needs an endpoint URL");
    auto ep = detail::split_endpoint(*cfg.endpoint);
    httplib::Client client(ep.base);
    client.set_connection_timeout(5);
    client.set_read_timeout(60);

    detail::json payload = {{"system", kb.source.empty() ? serialize_knowledge_base(kb) : kb.source},
                            {"input", detail::parse_json(serialize_pin_plan(spec))},
                            {"schema", kIntentGraphSchemaId}};
    const std::string body = payload.dump();

    std::string last_problem;
    for (int attempt = 0; attempt <= retries; ++attempt) {
        auto res = client.Post(ep.path, body, "application/json");
        if (!res) throw EndpointError("request to " + *cfg.endpoint + " failed: " + httplib::to_string(res.error()));
        if (res->status < 200 || res->status >= 300)
            throw EndpointError("endpoint " + *cfg.endpoint + " answered HTTP " + std::to_string(res->status));
        IntentGraph g;
        try {
            g = detail::graph_from_response(res->body);
        } catch (const Error& e) {
            last_problem = e.what();
            continue;
        }
        ValidationReport report = validate_intent_graph(g, kb);
        if (!report.passed) {
            for (const auto& i : report.issues)
                if (i.severity == Severity::error) throw ValidationError(i.code, i.message);
        }
        return g;
    }
    throw MalformedResponseError("no usable intent graph after " + std::to_string(retries + 1) +
                                 " attempts; last problem: " + last_problem);
}

} // namespace ioring
