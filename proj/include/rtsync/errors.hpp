#pragma once

#include <stdexcept>
#include <string>

namespace rtsync {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input document (bad JSON, missing fields, wrong value shapes).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

/// Semantic violation: metamodel/ruleset well-formedness, rejected change
/// requests, bad arguments.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// A scenario step that cannot be executed against the current runtime state.
class ScenarioError : public Error {
public:
    explicit ScenarioError(const std::string& msg) : Error(msg) {}
};

} // namespace rtsync
