#pragma once

#include <stdexcept>
#include <string>

namespace mhwalk {

// Malformed input file contents (reported with line numbers).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Inconsistent configuration or data that fails a contract check.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem-level failures.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace mhwalk
