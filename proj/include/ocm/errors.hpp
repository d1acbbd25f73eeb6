#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ocm {

/// Syntax or semantic error in an operator expression, located by line/column (1-based).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ": " + what),
          line_(line), column_(column), detail_(what) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string detail_;
};

/// Expression evaluation hit a domain error (log of nonpositive, division by zero, ...).
class EvalUndefined : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No jet value reaches the requested target: the range condition fails at the
/// point or the pivot slot cannot move the component.
class RangeViolation : public std::runtime_error {
public:
    RangeViolation(std::size_t component, const std::string& what)
        : std::runtime_error(what), component_(component) {}
    std::size_t component() const noexcept { return component_; }

private:
    std::size_t component_;
};

/// The validity radius of a local approximation shrank below the floor.
class DeltaCollapse : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Geometry precondition failures (degenerate box, point outside the domain, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Config file problems; carries the config line when known (0 otherwise).
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace ocm
