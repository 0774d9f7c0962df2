#pragma once

#include <stdexcept>
#include <string>

namespace nrl {

// Base class for all engine errors. Subclasses distinguish failure
// categories so callers (and the CLI) can report them uniformly.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file content (bad date, non-numeric cell, ...).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error("parse: " + msg) {}
};

// Structurally valid input that violates a contract (duplicate dates,
// all-missing asset, insufficient history, ...).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error("validation: " + msg) {}
};

// Numerical argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error("domain: " + msg) {}
};

// Key (date, asset id, ...) not present in a container.
class LookupError : public Error {
public:
    explicit LookupError(const std::string& msg) : Error("lookup: " + msg) {}
};

// A metric whose denominator degenerates (zero volatility, zero drawdown).
// Callers that tolerate undefined metrics catch this and tag the field.
class UndefinedMetricError : public Error {
public:
    explicit UndefinedMetricError(const std::string& msg) : Error("undefined metric: " + msg) {}
};

} // namespace nrl
