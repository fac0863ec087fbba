#pragma once

#include <stdexcept>
#include <string>

namespace isd {

// Pressure outside a model's physical domain (e.g. dielectric fully compressed).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Invalid or inconsistent configuration / input parameters.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No usable transition/feature found in a trace.
class DetectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed file contents. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace isd
