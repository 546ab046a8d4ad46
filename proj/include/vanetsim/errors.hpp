#pragma once

#include <stdexcept>
#include <string>

namespace vanet {

// Malformed input text (network files, scenario configs, CSV tables).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Well-formed input that violates a semantic constraint (dangling ids,
// duplicate names, inconsistent sections).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vanet
