#pragma once

#include <stdexcept>
#include <string>

namespace combsense {

// Argument outside the physical or mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Visibility at (or numerically indistinguishable from) unity: the QFI
// is singular there.
class SingularVisibilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An operation applied to an object in the wrong state (e.g. debiasing twice).
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class OutOfRegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input files (CSV / JSON sidecars).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace combsense
