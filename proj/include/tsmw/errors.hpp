#pragma once

#include <stdexcept>
#include <string>

namespace tsmw {

// Base for every domain error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Equal control and treated observations: the strict indicator assumes continuity.
class TieError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain (negative sizes, pi outside [0,1], p outside (0,1)).
class DomainError : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

// Zero variance where a standardized shape is needed.
class DegenerateError : public Error {
public:
    using Error::Error;
};

class InfeasibleAlpha : public Error {
public:
    using Error::Error;
};

// Malformed input files; carries the 1-based line number when known.
class InputError : public Error {
public:
    InputError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace tsmw
