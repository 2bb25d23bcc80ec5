#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace txpar {

using Gas = std::uint64_t;

/// Malformed or inconsistent trace input. `line()` is 1-based, 0 when the
/// error is not tied to a specific line.
class TraceError : public std::runtime_error {
public:
    TraceError(std::size_t line, const std::string& what)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class InvalidParams : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// No metric is defined for a block without transactions.
class EmptyBlockError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A scheduler produced something that breaks a schedule invariant. Always a bug.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class OracleLimitError : public std::length_error {
public:
    using std::length_error::length_error;
};

}  // namespace txpar
