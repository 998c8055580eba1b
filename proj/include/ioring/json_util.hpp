#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "errors.hpp"

namespace ioring::detail {

using json = nlohmann::json;

inline void line_column(std::string_view text, std::size_t offset, int& line, int& column) {
    line = 1;
    column = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
}

/// Parses JSON text, turning library exceptions into a located ParseError.
inline json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        int line = 0;
        int column = 0;
        // byte is 1-based and points one past the offending character
        line_column(text, e.byte > 0 ? e.byte - 1 : 0, line, column);
        std::string msg = e.what();
        if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
        throw ParseError(msg, line, column);
    }
}

inline std::string join_path(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

inline std::string index_path(const std::string& base, std::size_t i) {
    return base + "[" + std::to_string(i) + "]";
}

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw SchemaError(path.empty() ? "$" : path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(join_path(path, key), "missing required field");
    return *it;
}

inline std::string require_string(const json& obj, const std::string& key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_string()) throw SchemaError(join_path(path, key), "expected a string");
    return v.get<std::string>();
}

inline bool require_bool(const json& obj, const std::string& key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_boolean()) throw SchemaError(join_path(path, key), "expected a boolean");
    return v.get<bool>();
}

inline std::int64_t require_int(const json& obj, const std::string& key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_number_integer()) throw SchemaError(join_path(path, key), "expected an integer");
    return v.get<std::int64_t>();
}

inline const json& require_array(const json& obj, const std::string& key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_array()) throw SchemaError(join_path(path, key), "expected an array");
    return v;
}

inline const json& require_object(const json& obj, const std::string& key, const std::string& path) {
    const json& v = require(obj, key, path);
    if (!v.is_object()) throw SchemaError(join_path(path, key), "expected an object");
    return v;
}

/// 64-bit FNV-1a, used for report digests.
inline std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

} // namespace ioring::detail
