#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace trunkload {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed model or scenario document. Carries the offending line (0 when
/// unknown) and the field path, e.g. `muscles[3].f_max`.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::string field)
        : Error(format(message, line, field)), line_(line), field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    static std::string format(const std::string& message, std::size_t line,
                              const std::string& field) {
        std::string out = "parse error";
        if (line > 0) out += " at line " + std::to_string(line);
        if (!field.empty()) out += " in '" + field + "'";
        return out + ": " + message;
    }

    std::size_t line_;
    std::string field_;
};

/// One broken model invariant: which entity, which rule.
struct Violation {
    std::string entity;
    std::string rule;
    std::string detail;

    std::string to_string() const { return entity + ": " + rule + " (" + detail + ")"; }
    bool operator==(const Violation&) const = default;
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations)
        : Error(summary(violations)), violations_(std::move(violations)) {}

    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    static std::string summary(const std::vector<Violation>& v) {
        std::string out = "model validation failed";
        for (const auto& item : v) out += "\n  " + item.to_string();
        return out;
    }

    std::vector<Violation> violations_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// A name that does not resolve in the model (segment, muscle, coordinate, site).
class UnknownEntity : public Error {
public:
    UnknownEntity(const std::string& kind, const std::string& name)
        : Error("unknown " + kind + " '" + name + "'"), kind_(kind), name_(name) {}

    const std::string& kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }

private:
    std::string kind_;
    std::string name_;
};

class UnknownPhase : public Error {
public:
    using Error::Error;
};

/// Scenario requires contacts (e.g. crutch tips) the model does not have.
class ModelMismatch : public Error {
public:
    using Error::Error;
};

class EmptyGroup : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

/// Brute-force enumeration request beyond the size guard.
class TooLarge : public Error {
public:
    using Error::Error;
};

}  // namespace trunkload
