#pragma once

#include <stdexcept>
#include <string>

namespace hqr {

// Invalid parameter combination (space overflow, m > N, bad k/kappa, ...).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file; `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Operand dimensions do not agree (gate width vs targets, state size, ...).
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A table, bucket sidecar, or dictionary that do not belong together.
class MismatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hqr
