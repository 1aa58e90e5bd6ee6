#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace splitwire {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number of the offending line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Input declares a format this library does not read (e.g. binary PLY).
class UnsupportedFormatError : public ParseError {
public:
    using ParseError::ParseError;
};

/// Input is well-formed but missing a required field or property.
class SchemaError : public ParseError {
public:
    using ParseError::ParseError;
};

/// Input ends before the declared element count is satisfied.
class TruncationError : public ParseError {
public:
    using ParseError::ParseError;
};

/// Parsed values violate a domain invariant (non-finite coordinate, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A tunable parameter is outside its allowed range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Caller violated an API precondition (mismatched lengths, missing labels, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

/// Geometry too degenerate to fit (coincident points, singular normal matrix).
class DegenerateGeometryError : public Error {
public:
    using Error::Error;
};

/// Not enough points to satisfy a fit's minimum support.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Input exceeds a guard on a deliberately quadratic code path.
class SizeError : public Error {
public:
    using Error::Error;
};

}  // namespace splitwire
