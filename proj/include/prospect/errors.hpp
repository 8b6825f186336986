#pragma once

#include <stdexcept>
#include <string>

namespace prospect {

// Base class for every error raised by the library. CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// File/stream problems: unreadable payloads, malformed headers, dangling references.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// Violated preconditions on domain values (degenerate ranges, dimension mismatches, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Bad configuration (unknown setting name, weights off the simplex, missing template).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace prospect
