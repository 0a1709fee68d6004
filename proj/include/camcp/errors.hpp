#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace camcp {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value failed a structural check. `field` is a dotted path into the
/// offending document, e.g. "blueprint.stages[1].done_key".
class SchemaError : public Error {
public:
    SchemaError(std::string field, const std::string& what)
        : Error(what + " (field: " + field + ")"), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class DuplicateIdError : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

class IncompleteContext : public Error {
public:
    using Error::Error;
};

class UnsupportedKind : public Error {
public:
    using Error::Error;
};

class ConfigurationError : public Error {
public:
    using Error::Error;
};

class NetworkError : public Error {
public:
    using Error::Error;
};

class TimeoutError : public NetworkError {
public:
    using NetworkError::NetworkError;
};

class HttpStatusError : public Error {
public:
    HttpStatusError(int status, const std::string& body)
        : Error("LLM endpoint returned HTTP " + std::to_string(status)), status_(status), body_(body) {}
    int status() const noexcept { return status_; }
    const std::string& body() const noexcept { return body_; }

private:
    int status_;
    std::string body_;
};

class ScenarioParseError : public Error {
public:
    using Error::Error;
};

class ScenarioValidationError : public Error {
public:
    ScenarioValidationError(std::string field, const std::string& what)
        : Error("scenario field '" + field + "': " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class MalformedTrace : public Error {
public:
    MalformedTrace(std::size_t line, const std::string& what)
        : Error("malformed trace at line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

}  // namespace camcp
