#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fhkh {

/// Argument outside an operation's domain (t <= 0, mu <= 0, bad ranges, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The boundary condition 2mc^2 V2 / hbar^2 + 1/4 >= 0 is violated, so 1/eta is not real.
class SpectralConditionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Parameters do not satisfy the constraints of the requested potential kind.
class KindError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to converge or produced a non-finite value.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A root bracket does not contain a sign change.
class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or unknown configuration entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace fhkh
