#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ioring {

/// Base of every error the pipeline raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line = 0, int column = 0)
        : Error(format(what, line, column)), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    static std::string format(const std::string& what, int line, int column) {
        if (line <= 0) return "parse error: " + what;
        return "parse error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + what;
    }

    int line_;
    int column_;
};

/// Well-formed input that breaks a model invariant.
class ValidationError : public Error {
public:
    ValidationError(std::string code, const std::string& what)
        : Error(code + ": " + what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Field-level schema breach in a JSON document; `path()` is e.g. `nodes[3].device_type`.
class SchemaError : public Error {
public:
    SchemaError(std::string path, const std::string& what)
        : Error("schema error at " + path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class DuplicatePinError : public Error {
public:
    explicit DuplicatePinError(std::string pin)
        : Error("duplicate pin name: " + pin), pin_(std::move(pin)) {}
    const std::string& pin() const noexcept { return pin_; }

private:
    std::string pin_;
};

class OffGridError : public Error {
public:
    explicit OffGridError(const std::string& value)
        : Error("value off placement grid: " + value) {}
};

class DirectiveError : public Error {
public:
    using Error::Error;
};

class UnresolvedPinError : public Error {
public:
    explicit UnresolvedPinError(std::string pin)
        : Error("unresolved pin (no knowledge-base pattern and no complete override): " + pin),
          pin_(std::move(pin)) {}
    const std::string& pin() const noexcept { return pin_; }

private:
    std::string pin_;
};

class DomainConfigError : public Error {
public:
    using Error::Error;
};

class EsdRuleError : public Error {
public:
    explicit EsdRuleError(std::string domain, const std::string& what)
        : Error("ESD supply rule violated for domain " + domain + ": " + what),
          domain_(std::move(domain)) {}
    const std::string& domain() const noexcept { return domain_; }

private:
    std::string domain_;
};

class EndpointError : public Error {
public:
    using Error::Error;
};

class MalformedResponseError : public Error {
public:
    using Error::Error;
};

class UnfillableGapError : public Error {
public:
    explicit UnfillableGapError(std::int64_t gap, const std::string& where = {})
        : Error("no filler combination closes a gap of " + std::to_string(gap) + " nm" +
                (where.empty() ? std::string{} : " on side " + where)),
          gap_(gap) {}
    std::int64_t gap() const noexcept { return gap_; }

private:
    std::int64_t gap_;
};

class RingOverflowError : public Error {
public:
    RingOverflowError(std::string side, std::int64_t excess)
        : Error("side " + side + " overflows by " + std::to_string(excess) + " nm"),
          side_(std::move(side)), excess_(excess) {}
    const std::string& side() const noexcept { return side_; }
    std::int64_t excess() const noexcept { return excess_; }

private:
    std::string side_;
    std::int64_t excess_;
};

class StaggerConflictError : public Error {
public:
    using Error::Error;
};

class ConsistencyError : public Error {
public:
    using Error::Error;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

} // namespace ioring
